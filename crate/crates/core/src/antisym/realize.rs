//! Realization of symbolic antisymmetric expressions as multilinear
//! functions on `n x n` rational matrices.
//!
//! A product of factors `f_1 ... f_m` of arities `a_1, ..., a_m` is realized
//! as the shuffle sum over ordered splittings `(W_1, ..., W_m)` of the
//! argument positions, each factor evaluated on its block in increasing
//! order, weighted by the sign of the splitting permutation.

use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactla::QMatrix;
use crate::perm;
use crate::ratpoly::{rat, Rational};
use crate::sampling::{inverse, random_invertible, random_matrix, random_traceless, SampleConfig};

use super::atilde::{merge_sign, ExtElement, ExtMonomial};
use super::wedge::{traceless_coordinates, WedgeForm};

/// A multilinear function of `arity` matrix arguments with matrix values.
pub trait MultiFn {
    fn arity(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix>;
}

impl<T: MultiFn + ?Sized> MultiFn for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        (**self).eval(args)
    }
}

impl<T: MultiFn + ?Sized> MultiFn for Box<T> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        (**self).eval(args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `X^a = S_a` on the raw arguments.
    X(usize),
    /// `Y^a = S_a` on the traceless projections `A - tr(A)/n`.
    Y(usize),
    /// The scalar `T_h = tr(S_{2h+1})`.
    T(usize),
    /// The scalar coordinate function dual to the `k`-th traceless basis
    /// element.
    Coord(usize),
}

impl Factor {
    pub fn arity(&self) -> usize {
        match *self {
            Factor::X(a) | Factor::Y(a) => a,
            Factor::T(h) => 2 * h + 1,
            Factor::Coord(_) => 1,
        }
    }
}

/// A linear combination of factor products.
#[derive(Clone, Debug)]
pub struct FactorProduct {
    n: usize,
    arity: usize,
    terms: Vec<(Rational, Vec<Factor>)>,
}

impl FactorProduct {
    pub fn new(n: usize, arity: usize, terms: Vec<(Rational, Vec<Factor>)>) -> Result<Self> {
        for (_, fs) in &terms {
            let a: usize = fs.iter().map(Factor::arity).sum();
            if a != arity {
                return Err(Error::ArityMismatch { expected: arity, got: a });
            }
        }
        Ok(FactorProduct { n, arity, terms })
    }
}

fn monomial_factors(m: &ExtMonomial) -> Vec<Factor> {
    let mut fs: Vec<Factor> = m.t_indices().into_iter().map(|h| Factor::T(h as usize)).collect();
    if m.i > 0 {
        fs.push(Factor::X(m.i as usize));
    }
    if m.j > 0 {
        fs.push(Factor::Y(m.j as usize));
    }
    fs
}

/// Realizes a homogeneous element of `A~_n` or `TA_n`. Factors are taken in
/// normal order `T..., X^i, Y^j`.
pub fn realize(e: &ExtElement, n: usize) -> Result<FactorProduct> {
    let deg = e
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidArgument("realize needs a nonzero homogeneous element".into()))?;
    let terms = e.terms().map(|(m, c)| (c.clone(), monomial_factors(m))).collect();
    FactorProduct::new(n, deg as usize, terms)
}

pub fn realize_monomial(m: &ExtMonomial, n: usize) -> FactorProduct {
    FactorProduct {
        n,
        arity: m.degree() as usize,
        terms: vec![(Rational::one(), monomial_factors(m))],
    }
}

/// Realizes a homogeneous element of `F_n`: each wedge index is a
/// coordinate one-form and `X^i` is `S_i`.
pub fn realize_form(w: &WedgeForm) -> Result<FactorProduct> {
    let deg = w
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidArgument("realize needs a nonzero homogeneous form".into()))?;
    let terms = w
        .terms()
        .map(|((mask, x), c)| {
            let mut fs: Vec<Factor> = (0..32).filter(|b| mask >> b & 1 == 1).map(Factor::Coord).collect();
            if *x > 0 {
                fs.push(Factor::X(*x as usize));
            }
            (c.clone(), fs)
        })
        .collect();
    FactorProduct::new(w.n(), deg, terms)
}

/// Tables of `S_|U|(args_U)` for every subset `U` of argument positions.
struct Tables {
    raw: Vec<QMatrix>,
    proj: Vec<QMatrix>,
    coords: Vec<Vec<Rational>>,
}

fn standard_table(args: &[QMatrix], n: usize) -> Vec<QMatrix> {
    let d = args.len();
    let mut table = vec![QMatrix::identity(n); 1 << d];
    for mask in 1usize..(1 << d) {
        // S(U) = sum_p (-1)^p A_{u_p} S(U \ u_p)
        let mut acc = QMatrix::zeros(n, n);
        let mut p = 0;
        let mut rest = mask;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let term = &args[b] * &table[mask & !(1 << b)];
            acc = if p % 2 == 0 { &acc + &term } else { &acc - &term };
            p += 1;
        }
        table[mask] = acc;
    }
    table
}

fn project(a: &QMatrix) -> QMatrix {
    let n = a.rows();
    let shift = a.trace() / rat(n as i64);
    a - &QMatrix::scalar(n, shift)
}

impl Tables {
    fn new(args: &[QMatrix], n: usize, factors: &[(Rational, Vec<Factor>)]) -> Self {
        let need_proj = factors.iter().any(|(_, fs)| fs.iter().any(|f| matches!(f, Factor::Y(_))));
        let need_coords = factors.iter().any(|(_, fs)| fs.iter().any(|f| matches!(f, Factor::Coord(_))));
        let raw = standard_table(args, n);
        let proj = if need_proj {
            let p: Vec<QMatrix> = args.iter().map(project).collect();
            standard_table(&p, n)
        } else {
            Vec::new()
        };
        let coords = if need_coords {
            args.iter().map(traceless_coordinates).collect()
        } else {
            Vec::new()
        };
        Tables { raw, proj, coords }
    }

    fn value(&self, f: &Factor, mask: usize, n: usize) -> QMatrix {
        match *f {
            Factor::X(_) => self.raw[mask].clone(),
            Factor::Y(_) => self.proj[mask].clone(),
            Factor::T(_) => QMatrix::scalar(n, self.raw[mask].trace()),
            Factor::Coord(k) => QMatrix::scalar(n, self.coords[mask.trailing_zeros() as usize][k].clone()),
        }
    }
}

/// Subsets of `free` with exactly `k` elements.
fn subsets_of(free: usize, k: usize) -> Vec<usize> {
    let bits: Vec<usize> = (0..usize::BITS as usize).filter(|b| free >> b & 1 == 1).collect();
    let mut out = Vec::new();
    if k > bits.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0, |m, &i| m | (1 << bits[i])));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < bits.len() - k + p) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

impl MultiFn for FactorProduct {
    fn arity(&self) -> usize {
        self.arity
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let n = self.n;
        let tables = Tables::new(args, n, &self.terms);
        let full = (1usize << self.arity) - 1;
        let mut out = QMatrix::zeros(n, n);
        for (c, fs) in &self.terms {
            let mut states: Vec<(usize, QMatrix)> = vec![(0, QMatrix::identity(n))];
            for f in fs {
                let mut next: std::collections::BTreeMap<usize, QMatrix> = std::collections::BTreeMap::new();
                for (used, val) in &states {
                    for v in subsets_of(full & !used, f.arity()) {
                        let s = merge_sign(*used as u32, v as u32);
                        let prod = val * &tables.value(f, v, n);
                        let e = next.entry(used | v).or_insert_with(|| QMatrix::zeros(n, n));
                        *e = if s > 0 { &*e + &prod } else { &*e - &prod };
                    }
                }
                states = next.into_iter().filter(|(_, m)| !m.is_zero()).collect();
            }
            for (_, v) in states {
                out = &out + &v.scale(c);
            }
        }
        Ok(out)
    }
}

/// Shuffle wedge `(F ^ H)(v) = sum_{(W, V)} sign F(v_W) H(v_V)`.
pub struct ShuffleWedge<A, B>(pub A, pub B);

impl<A: MultiFn, B: MultiFn> MultiFn for ShuffleWedge<A, B> {
    fn arity(&self) -> usize {
        self.0.arity() + self.1.arity()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        let (h, k) = (self.0.arity(), self.1.arity());
        if args.len() != h + k {
            return Err(Error::ArityMismatch { expected: h + k, got: args.len() });
        }
        let full = (1usize << (h + k)) - 1;
        let n = self.dim();
        let mut out = QMatrix::zeros(n, n);
        for w in subsets_of(full, h) {
            let v = full & !w;
            let pick = |m: usize| -> Vec<QMatrix> { (0..h + k).filter(|b| m >> b & 1 == 1).map(|b| args[b].clone()).collect() };
            let prod = &self.0.eval(&pick(w))? * &self.1.eval(&pick(v))?;
            out = if merge_sign(w as u32, v as u32) > 0 { &out + &prod } else { &out - &prod };
        }
        Ok(out)
    }
}

/// The full-sum wedge `1/(h! k!) sum_{sigma in S_{h+k}} sign(sigma) F(..) H(..)`.
pub struct FullSumWedge<A, B>(pub A, pub B);

impl<A: MultiFn, B: MultiFn> MultiFn for FullSumWedge<A, B> {
    fn arity(&self) -> usize {
        self.0.arity() + self.1.arity()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        let (h, k) = (self.0.arity(), self.1.arity());
        if args.len() != h + k {
            return Err(Error::ArityMismatch { expected: h + k, got: args.len() });
        }
        let n = self.dim();
        let mut out = QMatrix::zeros(n, n);
        for p in perm::permutations(h + k) {
            let a: Vec<QMatrix> = p[..h].iter().map(|&i| args[i].clone()).collect();
            let b: Vec<QMatrix> = p[h..].iter().map(|&i| args[i].clone()).collect();
            let prod = &self.0.eval(&a)? * &self.1.eval(&b)?;
            out = if perm::sign(&p) > 0 { &out + &prod } else { &out - &prod };
        }
        let norm = Rational::new(1.into(), ((perm::factorial(h) * perm::factorial(k)) as i64).into());
        Ok(out.scale(&norm))
    }
}

/// Evaluates every function at `samples` random tuples (each function on
/// the first `arity` matrices of the tuple) and returns the exact rank of
/// the stacked values. `traceless` draws the tuples from `N_n`.
pub fn realize_rank(
    n: usize,
    exprs: &[&dyn MultiFn],
    samples: usize,
    traceless: bool,
    cfg: &SampleConfig,
) -> Result<usize> {
    let max_arity = exprs.iter().map(|f| f.arity()).max().unwrap_or(0);
    let mut rng = cfg.rng();
    let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); exprs.len()];
    for _ in 0..samples {
        let tuple = sample_tuple(&mut rng, n, max_arity, traceless, cfg.bound);
        for (row, f) in rows.iter_mut().zip(exprs) {
            row.extend_from_slice(f.eval(&tuple[..f.arity()])?.entries());
        }
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Ok(0);
    }
    Ok(QMatrix::from_rows(rows).rank())
}

pub fn sample_tuple(rng: &mut impl Rng, n: usize, len: usize, traceless: bool, bound: i64) -> Vec<QMatrix> {
    (0..len)
        .map(|_| if traceless { random_traceless(rng, n, bound) } else { random_matrix(rng, n, bound) })
        .collect()
}

/// Whether `f` vanishes at `samples` random tuples.
pub fn vanishes_on_samples(f: &dyn MultiFn, samples: usize, traceless: bool, cfg: &SampleConfig) -> Result<bool> {
    let mut rng = cfg.rng();
    for _ in 0..samples {
        let t = sample_tuple(&mut rng, f.dim(), f.arity(), traceless, cfg.bound);
        if !f.eval(&t)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `F(g A_1 g^-1, ...) = g F(A_1, ...) g^-1` at random tuples and
/// random invertible `g`.
pub fn is_equivariant(f: &dyn MultiFn, samples: usize, cfg: &SampleConfig) -> Result<bool> {
    let mut rng = cfg.rng();
    let n = f.dim();
    for _ in 0..samples {
        let t = sample_tuple(&mut rng, n, f.arity(), false, cfg.bound);
        let g = random_invertible(&mut rng, n, cfg.bound);
        let gi = inverse(&g).expect("invertible by construction");
        let conj: Vec<QMatrix> = t.iter().map(|a| &(&g * a) * &gi).collect();
        if f.eval(&conj)? != &(&g * &f.eval(&t)?) * &gi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks antisymmetry under every adjacent transposition at random tuples.
pub fn is_antisymmetric(f: &dyn MultiFn, samples: usize, cfg: &SampleConfig) -> Result<bool> {
    let mut rng = cfg.rng();
    for _ in 0..samples {
        let t = sample_tuple(&mut rng, f.dim(), f.arity(), false, cfg.bound);
        let v = f.eval(&t)?;
        for p in 1..t.len() {
            let mut s = t.clone();
            s.swap(p - 1, p);
            if f.eval(&s)? != v.scale(&rat(-1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Difference of two functions of equal arity.
pub struct Difference<A, B>(pub A, pub B);

impl<A: MultiFn, B: MultiFn> MultiFn for Difference<A, B> {
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, args: &[QMatrix]) -> Result<QMatrix> {
        Ok(&self.0.eval(args)? - &self.1.eval(args)?)
    }
}

/// True when the `j`-th form of the basic formula
/// `X^j T_{n-1} = -sum_{i=1}^{n - floor(j/2)} X^{2i+j} T_{n-i-1}` holds at
/// `samples` random tuples (traceless tuples read `X` as `Y`).
pub fn basic_formula_holds(n: usize, j: usize, samples: usize, traceless: bool, cfg: &SampleConfig) -> Result<bool> {
    let (lhs, rhs) = basic_formula_sides(n, j)?;
    let diff = Difference(lhs, rhs);
    vanishes_on_samples(&diff, samples, traceless, cfg)
}

fn basic_formula_sides(n: usize, j: usize) -> Result<(FactorProduct, FactorProduct)> {
    let arity = j + 2 * n - 1;
    let lhs = FactorProduct::new(n, arity, vec![(Rational::one(), xt(j, n - 1))])?;
    let mut terms = Vec::new();
    for i in 1..=(n - j / 2) {
        if i + 1 > n || 2 * i + j >= 2 * n {
            continue;
        }
        terms.push((rat(-1), xt(2 * i + j, n - i - 1)));
    }
    let rhs = FactorProduct::new(n, arity, terms)?;
    Ok((lhs, rhs))
}

fn xt(a: usize, h: usize) -> Vec<Factor> {
    // X^a T_h in this order
    let mut v = Vec::new();
    if a > 0 {
        v.push(Factor::X(a));
    }
    v.push(Factor::T(h));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisym::atilde::{dimn_basis, trace_on, ExtAlgebra};

    fn cfg() -> SampleConfig {
        SampleConfig::default()
    }

    #[test]
    fn x_squared_is_commutator() {
        let alg = ExtAlgebra::trace_algebra(2);
        let f = realize(&alg.x_power(2), 2).unwrap();
        let mut rng = cfg().rng();
        let t = sample_tuple(&mut rng, 2, 2, false, 9);
        assert_eq!(f.eval(&t).unwrap(), &(&t[0] * &t[1]) - &(&t[1] * &t[0]));
        assert!(matches!(f.eval(&t[..1]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn amitsur_levitzki_and_on() {
        let x4 = FactorProduct::new(2, 4, vec![(rat(1), vec![Factor::X(4)])]).unwrap();
        assert!(vanishes_on_samples(&x4, 10, false, &cfg()).unwrap());
        for n in 2..=3 {
            let on = realize(&trace_on(n), n).unwrap();
            assert!(vanishes_on_samples(&on, 5, false, &cfg()).unwrap());
        }
    }

    #[test]
    fn dimn_rank_n2() {
        let fs: Vec<FactorProduct> = dimn_basis(2).iter().map(|m| realize_monomial(m, 2)).collect();
        let refs: Vec<&dyn MultiFn> = fs.iter().map(|f| f as &dyn MultiFn).collect();
        assert_eq!(realize_rank(2, &refs, 12, false, &cfg()).unwrap(), 8);
    }

    #[test]
    fn shuffle_matches_full_sum() {
        let alg = ExtAlgebra::trace_algebra(2);
        let a = realize(&alg.t(0), 2).unwrap();
        let b = realize(&alg.x_power(2), 2).unwrap();
        let s = ShuffleWedge(&a, &b);
        let f = FullSumWedge(&a, &b);
        let mut rng = cfg().rng();
        for _ in 0..5 {
            let t = sample_tuple(&mut rng, 2, 3, false, 9);
            assert_eq!(s.eval(&t).unwrap(), f.eval(&t).unwrap());
        }
        assert!(is_antisymmetric(&s, 3, &cfg()).unwrap());
    }

    #[test]
    fn basic_formula_small() {
        for n in 2..=3 {
            for j in 1..2 * n {
                assert!(basic_formula_holds(n, j, 3, true, &cfg()).unwrap(), "n={n} j={j} traceless");
                assert!(basic_formula_holds(n, j, 3, false, &cfg()).unwrap(), "n={n} j={j}");
            }
        }
        // j = 0 is the O_n relation, which also carries n X^{2n-1}
        assert!(!basic_formula_holds(2, 0, 3, true, &cfg()).unwrap());
    }

    #[test]
    fn equivariance_of_monomials() {
        let a = ExtAlgebra::atilde(3);
        for m in a.basis(4) {
            assert!(is_equivariant(&realize_monomial(&m, 3), 2, &cfg()).unwrap(), "{m}");
        }
    }
}
