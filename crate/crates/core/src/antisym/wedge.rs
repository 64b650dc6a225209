//! The algebra `F_n = /\ N_n^* [X]` over the traceless matrices `N_n`, the
//! trace forms `T_h`, the element `O_n` and its ideal.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{QMatrix, Subspace};
use crate::perm;
use crate::ratpoly::{fmt_rational, rat, Rational};

use super::atilde::merge_sign;

/// Ordered basis of `N_n`: the `e_ij` with `i != j` in row-major order,
/// then `e_ii - e_{i+1,i+1}` for `i = 1..n-1`.
pub fn traceless_basis(n: usize) -> Vec<QMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(QMatrix::unit(n, i, j));
            }
        }
    }
    for i in 1..n {
        out.push(&QMatrix::unit(n, i, i) - &QMatrix::unit(n, i + 1, i + 1));
    }
    out
}

/// Coordinates of `A - tr(A)/n` in [`traceless_basis`].
pub fn traceless_coordinates(a: &QMatrix) -> Vec<Rational> {
    let n = a.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(a.get(i, j).clone());
            }
        }
    }
    let shift = a.trace() / rat(n as i64);
    let mut acc = Rational::zero();
    for i in 0..n - 1 {
        acc += a.get(i, i) - &shift;
        out.push(acc.clone());
    }
    out
}

/// Element of `F_n`: a combination of `e^I X^i` with `I` a set of indices
/// into [`traceless_basis`] (as a bitmask).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeForm {
    n: usize,
    terms: BTreeMap<(u32, u32), Rational>,
}

impl WedgeForm {
    pub fn zero(n: usize) -> Self {
        WedgeForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: usize, mask: u32, x: u32, c: Rational) -> Self {
        let mut w = WedgeForm::zero(n);
        w.add_term(mask, x, c);
        w
    }

    pub fn x_power(n: usize, x: u32) -> Self {
        WedgeForm::monomial(n, 0, x, Rational::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, x: u32, c: Rational) {
        if c.is_zero() || !self.valid(mask, x) {
            return;
        }
        let e = self.terms.entry((mask, x)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(mask, x));
        }
    }

    fn valid(&self, mask: u32, x: u32) -> bool {
        (x as usize) < 2 * self.n && mask.count_ones() as usize + x as usize <= self.n * self.n
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(m, x)| (m.count_ones() + x) as usize);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &Rational) -> WedgeForm {
        let mut out = WedgeForm::zero(self.n);
        for (&(m, x), v) in &self.terms {
            out.add_term(m, x, v * c);
        }
        out
    }

    pub fn add(&self, other: &WedgeForm) -> WedgeForm {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (&(m, x), v) in &other.terms {
            out.add_term(m, x, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &WedgeForm) -> WedgeForm {
        self.add(&other.scale(&rat(-1)))
    }

    /// `(w X^i)(v X^k) = (-1)^{i |v|} (w ^ v) X^{i+k}`, truncated at
    /// `X^{2n}` and above degree `n^2`.
    pub fn mul(&self, other: &WedgeForm) -> Result<WedgeForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("F_{} times F_{}", self.n, other.n)));
        }
        let mut out = WedgeForm::zero(self.n);
        for (&(ma, xa), ca) in &self.terms {
            for (&(mb, xb), cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mut s = merge_sign(ma, mb);
                if (xa * mb.count_ones()) % 2 == 1 {
                    s = -s;
                }
                out.add_term(ma | mb, xa + xb, rat(s) * ca * cb);
            }
        }
        Ok(out)
    }

    pub fn coordinates(&self, basis: &[(u32, u32)]) -> Result<Vec<Rational>> {
        let index: BTreeMap<(u32, u32), usize> = basis.iter().enumerate().map(|(k, b)| (*b, k)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (key, c) in &self.terms {
            let k = index.get(key).ok_or_else(|| {
                Error::WrongDegree {
                    expected: basis.first().map(|(m, x)| (m.count_ones() + x) as usize).unwrap_or(0),
                    got: (key.0.count_ones() + key.1) as usize,
                }
            })?;
            v[*k] = c.clone();
        }
        Ok(v)
    }
}

impl fmt::Display for WedgeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(m, x), c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            let abs = c.abs();
            if !abs.is_one() || (m == 0 && x == 0) {
                parts.push(fmt_rational(&abs));
            }
            if m != 0 {
                let idxs: Vec<String> = (0..32).filter(|b| m >> b & 1 == 1).map(|b| format!("e{}", b + 1)).collect();
                parts.push(idxs.join("^"));
            }
            match x {
                0 => {}
                1 => parts.push("X".into()),
                x => parts.push(format!("X^{x}")),
            }
            let body = parts.join(" ");
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Bitmasks with `k` bits among the lowest `m`, in lexicographic order of
/// their index lists.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |acc, &i| acc | (1 << i)));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < m - k + p) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// Basis of `F_n[degree]`: pairs `(I, i)` ordered by `i`, then `I`.
pub fn fn_basis(n: usize, degree: usize) -> Vec<(u32, u32)> {
    let dim_n = n * n - 1;
    let mut out = Vec::new();
    if degree > n * n {
        return out;
    }
    for x in 0..(2 * n).min(degree + 1) {
        for mask in combinations(dim_n, degree - x) {
            out.push((mask, x as u32));
        }
    }
    out
}

pub fn fn_dim(n: usize, degree: usize) -> u128 {
    if degree > n * n {
        return 0;
    }
    (0..(2 * n).min(degree + 1)).map(|x| perm::binomial(n * n - 1, degree - x)).sum()
}

/// `T_h = tr(S_{2h+1})` as an element of `/\^{2h+1} N_n^*`: its coordinate
/// on `e^I` is `tr(S_{2h+1}(b_I))`.
pub fn t_form(n: usize, h: usize) -> WedgeForm {
    let basis = traceless_basis(n);
    let k = 2 * h + 1;
    let mut w = WedgeForm::zero(n);
    for mask in combinations(basis.len(), k) {
        let args: Vec<&QMatrix> = (0..basis.len()).filter(|b| mask >> b & 1 == 1).map(|b| &basis[b]).collect();
        let c = standard_trace(&args, n);
        w.add_term(mask, 0, c);
    }
    w
}

/// `tr(S_k(args))` by the subset recursion.
fn standard_trace(args: &[&QMatrix], n: usize) -> Rational {
    let d = args.len();
    let mut table = vec![QMatrix::identity(n); 1 << d];
    for mask in 1usize..(1 << d) {
        let mut acc = QMatrix::zeros(n, n);
        let mut p = 0;
        let mut rest = mask;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let term = args[b] * &table[mask & !(1 << b)];
            acc = if p % 2 == 0 { &acc + &term } else { &acc - &term };
            p += 1;
        }
        table[mask] = acc;
    }
    table[(1 << d) - 1].trace()
}

/// `O_n = n X^{2n-1} - sum_{i=0}^{n-2} X^{2i} T_{n-i-1}` in `F_n`.
pub fn on_in_fn(n: usize) -> WedgeForm {
    let mut o = WedgeForm::x_power(n, 2 * n as u32 - 1).scale(&rat(n as i64));
    for i in 0..n.saturating_sub(1) {
        let t = t_form(n, n - i - 1);
        let term = t.mul(&WedgeForm::x_power(n, 2 * i as u32)).expect("same n");
        o = o.sub(&term);
    }
    o
}

pub const DEFAULT_FN_BUDGET: u128 = 1_000_000;

pub fn ideal_cost(n: usize, degree: usize) -> u128 {
    let lower = degree.checked_sub(2 * n - 1).map(|d| fn_dim(n, d)).unwrap_or(0);
    lower.saturating_mul(fn_dim(n, degree))
}

/// The degree-`degree` part of the ideal `J = F_n O_n`, spanned by `b O_n`
/// over the basis of `F_n[degree - (2n-1)]`.
pub fn ideal_component(n: usize, degree: usize, budget: u128) -> Result<Subspace> {
    if degree < 2 * n - 1 {
        return Err(Error::WrongDegree {
            expected: 2 * n - 1,
            got: degree,
        });
    }
    let cost = ideal_cost(n, degree);
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: format!("ideal of O_{n} in F_{n}[{degree}]"),
            cost,
            budget,
        });
    }
    let on = on_in_fn(n);
    let target = fn_basis(n, degree);
    let vectors = fn_basis(n, degree - (2 * n - 1))
        .into_iter()
        .map(|(mask, x)| WedgeForm::monomial(n, mask, x, Rational::one()).mul(&on)?.coordinates(&target))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(target.len(), vectors))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary2Report {
    pub n: usize,
    pub fn_dim: usize,
    pub ideal_dim: usize,
    /// Dimension of `/\^{n^2-2} N_n^* X^2`.
    pub x2_dim: usize,
    pub intersection_dim: usize,
    pub sum_dim: usize,
}

impl Corollary2Report {
    pub fn holds(&self) -> bool {
        self.intersection_dim == 0
    }
}

/// Intersects `J cap F_n[n^2]` with `/\^{n^2-2} N_n^* X^2`.
pub fn corollary2(n: usize, budget: u128) -> Result<Corollary2Report> {
    let d = n * n;
    let j = ideal_component(n, d, budget)?;
    let basis = fn_basis(n, d);
    let x2: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .filter(|(_, (_, x))| *x == 2)
        .map(|(k, _)| {
            let mut v = vec![Rational::zero(); basis.len()];
            v[k] = Rational::one();
            v
        })
        .collect();
    let w = Subspace::span(basis.len(), x2);
    let inter = j.intersect(&w)?;
    Ok(Corollary2Report {
        n,
        fn_dim: basis.len(),
        ideal_dim: j.dim(),
        x2_dim: w.dim(),
        intersection_dim: inter.dim(),
        sum_dim: j.sum(&w)?.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisym::realize::{realize_form, sample_tuple, vanishes_on_samples, MultiFn};
    use crate::sampling::SampleConfig;

    #[test]
    fn basis_and_coordinates() {
        let b = traceless_basis(3);
        assert_eq!(b.len(), 8);
        for (k, m) in b.iter().enumerate() {
            let c = traceless_coordinates(m);
            for (l, x) in c.iter().enumerate() {
                assert_eq!(*x, rat((k == l) as i64));
            }
        }
        assert_eq!(fn_basis(2, 4).len(), 7);
        assert_eq!(fn_dim(3, 9), 163);
        assert_eq!(fn_dim(3, 4), 163);
        assert_eq!(fn_basis(3, 9).len(), 163);
    }

    #[test]
    fn t1_form_n2() {
        let t = t_form(2, 1);
        assert_eq!(t.to_string(), "6 e1^e2^e3");
        assert_eq!(on_in_fn(2).to_string(), "2 X^3 - 6 e1^e2^e3");
    }

    #[test]
    fn graded_product_signs() {
        let e1 = WedgeForm::monomial(2, 1, 0, rat(1));
        let x = WedgeForm::x_power(2, 1);
        assert_eq!(x.mul(&e1).unwrap(), e1.mul(&x).unwrap().scale(&rat(-1)));
        assert!(e1.mul(&e1).unwrap().is_zero());
        assert!(WedgeForm::x_power(2, 2).mul(&WedgeForm::x_power(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn on_realizes_to_zero() {
        let cfg = SampleConfig::default();
        for n in 2..=3 {
            let f = realize_form(&on_in_fn(n)).unwrap();
            assert!(vanishes_on_samples(&f, 4, true, &cfg).unwrap(), "n={n}");
        }
    }

    #[test]
    fn t_form_matches_trace_function() {
        let cfg = SampleConfig::default();
        let mut rng = cfg.rng();
        let t = realize_form(&t_form(3, 1)).unwrap();
        let direct = crate::antisym::realize::FactorProduct::new(
            3,
            3,
            vec![(rat(1), vec![crate::antisym::realize::Factor::T(1)])],
        )
        .unwrap();
        for _ in 0..3 {
            let args = sample_tuple(&mut rng, 3, 3, true, 9);
            assert_eq!(t.eval(&args).unwrap(), direct.eval(&args).unwrap());
        }
    }

    #[test]
    fn corollary2_n2() {
        let j = ideal_component(2, 4, DEFAULT_FN_BUDGET).unwrap();
        assert_eq!(j.dim(), 4);
        let rep = corollary2(2, DEFAULT_FN_BUDGET).unwrap();
        assert_eq!(rep, Corollary2Report { n: 2, fn_dim: 7, ideal_dim: 4, x2_dim: 3, intersection_dim: 0, sum_dim: 7 });
        assert!(matches!(corollary2(4, DEFAULT_FN_BUDGET), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn corollary2_n3() {
        let rep = corollary2(3, DEFAULT_FN_BUDGET).unwrap();
        assert_eq!((rep.fn_dim, rep.x2_dim, rep.intersection_dim), (163, 8, 0));
        assert_eq!(rep.sum_dim, rep.ideal_dim + rep.x2_dim);
    }
}
