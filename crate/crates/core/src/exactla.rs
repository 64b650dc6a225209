//! Exact dense linear algebra over the rationals, plus a sparse incremental
//! eliminator for large homogeneous systems.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// The matrix unit `e_ij` (1-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        m.set(i - 1, j - 1, Rational::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// `Some(c)` when the matrix is `c * I`.
    pub fn as_scalar(&self) -> Option<Rational> {
        if self.rows != self.cols {
            return None;
        }
        let c = if self.rows == 0 {
            Rational::zero()
        } else {
            self.get(0, 0).clone()
        };
        for r in 0..self.rows {
            for col in 0..self.cols {
                let v = self.get(r, col);
                if (r == col && *v != c) || (r != col && !v.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Reduced row echelon form.
    ///
    /// Among the candidate rows for a pivot column the entry of smallest bit
    /// size is chosen, which keeps fraction growth down.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| bit_size(m.get(r, col)));
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    if m.get(row, c).is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &factor * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn nullspace(&self) -> Subspace {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in r.pivots.iter().enumerate() {
                    v[pc] = -r.matrix.get(row, f).clone();
                }
                v
            })
            .collect();
        Subspace::span(self.cols, vectors)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", fmt_rational(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// A linear subspace of `Q^ambient`, stored by its reduced echelon basis so
/// that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, QMatrix::identity(ambient).row_vecs())
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let vectors: Vec<_> = vectors
            .into_iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient));
        let r = QMatrix::from_rows(vectors).rref();
        let basis = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::span(self.ambient, vs))
    }

    /// Intersection, computed from the nullspace of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let (da, db) = (self.dim(), other.dim());
        let mut m = QMatrix::zeros(self.ambient, da + db);
        for (c, v) in self.basis.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        for (c, v) in other.basis.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m.set(r, da + c, -x.clone());
            }
        }
        let ns = m.nullspace();
        let vectors = ns
            .basis
            .iter()
            .map(|coef| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (a, basis_vec) in coef[..da].iter().zip(&self.basis) {
                    if a.is_zero() {
                        continue;
                    }
                    for (slot, b) in v.iter_mut().zip(basis_vec) {
                        *slot += a * b;
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::span(self.ambient, vectors))
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient, v.len()));
        }
        // Reduce v against the echelon basis.
        let mut w = v.to_vec();
        for b in &self.basis {
            let pivot = b.iter().position(|x| !x.is_zero()).expect("nonzero basis");
            if w[pivot].is_zero() {
                continue;
            }
            let f = w[pivot].clone();
            for (slot, x) in w.iter_mut().zip(b) {
                if !x.is_zero() {
                    *slot -= &f * x;
                }
            }
        }
        Ok(w.iter().all(Zero::is_zero))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        for v in &other.basis {
            if !self.contains_vector(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Incremental sparse Gaussian elimination for homogeneous systems with many
/// short equations.
#[derive(Clone, Debug, Default)]
pub struct SparseEliminator {
    cols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
    pivot_of: BTreeMap<usize, usize>,
    equations_seen: usize,
}

impl SparseEliminator {
    pub fn new(cols: usize) -> Self {
        SparseEliminator {
            cols,
            ..Default::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn equations_seen(&self) -> usize {
        self.equations_seen
    }

    /// Adds the equation `sum coeff * x_col = 0`.
    pub fn push(&mut self, equation: impl IntoIterator<Item = (usize, Rational)>) {
        self.equations_seen += 1;
        let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in equation {
            assert!(c < self.cols);
            if v.is_zero() {
                continue;
            }
            let e = row.entry(c).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                row.remove(&c);
            }
        }
        // Reduce by existing pivots in increasing column order.
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(&c, _)| c).find(|c| self.pivot_of.contains_key(c));
            let Some(c) = next else { break };
            let factor = row[&c].clone();
            let prow = &self.rows[self.pivot_of[&c]];
            for (&pc, pv) in prow {
                let e = row.entry(pc).or_insert_with(Rational::zero);
                *e -= &factor * pv;
                if e.is_zero() {
                    row.remove(&pc);
                }
            }
            cursor = c + 1;
        }
        let Some((&lead, lead_val)) = row.iter().next() else {
            return;
        };
        let inv = lead_val.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(row);
    }

    /// Basis of the solution space, obtained by back substitution.
    pub fn nullspace(&self) -> Subspace {
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.pivot_of.contains_key(c))
            .collect();
        // Pivot rows sorted by decreasing pivot column, so every pivot row
        // only refers to already-resolved variables when back substituting.
        let mut order: Vec<(usize, usize)> = self.pivot_of.iter().map(|(&c, &r)| (c, r)).collect();
        order.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
        let mut vectors = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v: BTreeMap<usize, Rational> = BTreeMap::new();
            v.insert(f, Rational::one());
            for &(pc, r) in &order {
                let mut acc = Rational::zero();
                for (&c, coef) in self.rows[r].range(pc + 1..) {
                    if let Some(x) = v.get(&c) {
                        acc += coef * x;
                    }
                }
                if !acc.is_zero() {
                    v.insert(pc, -acc);
                }
            }
            let mut dense = vec![Rational::zero(); self.cols];
            for (c, x) in v {
                dense[c] = x;
            }
            vectors.push(dense);
        }
        Subspace::span(self.cols, vectors)
    }
}

/// Normalizes a vector so its first nonzero entry is 1.
pub fn normalize_leading(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = lead.recip();
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

/// True when `a` and `b` are nonzero multiples of each other.
pub fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    a.len() == b.len()
        && a.iter().any(|x| !x.is_zero())
        && normalize_leading(a) == normalize_leading(b)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(QMatrix::zeros(2, 3).nullspace().dim(), 3);
        assert_eq!(QMatrix::identity(4).nullspace().dim(), 0);
        let ns = QMatrix::from_i64(&[&[1, 1]]).nullspace();
        assert_eq!(ns.dim(), 1);
        assert!(proportional(&ns.basis()[0], &v(&[1, -1])));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = QMatrix::from_i64(&[&[2, 4, 1], &[1, 3, 0], &[3, 7, 1]]);
        let r1 = m.rref();
        let r2 = r1.matrix.rref();
        assert_eq!(r1.matrix, r2.matrix);
        assert_eq!(r1.rank, 2);
    }

    #[test]
    fn subspace_examples() {
        let e1 = Subspace::span(2, vec![v(&[1, 0])]);
        let e2 = Subspace::span(2, vec![v(&[0, 1])]);
        assert_eq!(e1.intersect(&e1).unwrap(), e1);
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(2));
        assert!(e1.sum(&e2).unwrap().contains(&e1).unwrap());
        assert!(!e1.contains(&e2).unwrap());
        let e3 = Subspace::zero(3);
        assert_eq!(e1.sum(&e3), Err(Error::AmbientMismatch(2, 3)));
        // Different spanning sets, same subspace.
        let a = Subspace::span(3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, vec![v(&[1, 2, 1]), v(&[1, 0, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn sparse_eliminator_matches_dense() {
        let rows = [v(&[1, 2, 0, -1]), v(&[0, 1, 1, 1]), v(&[1, 3, 1, 0])];
        let dense = QMatrix::from_rows(rows.to_vec()).nullspace();
        let mut sp = SparseEliminator::new(4);
        for r in &rows {
            sp.push(r.iter().cloned().enumerate());
        }
        assert_eq!(sp.rank(), 2);
        assert_eq!(sp.nullspace(), dense);
    }
}
