//! The graded symbolic algebras `A~_n` (generators `T_1..T_{n-2}`, `X`, `Y`)
//! and `TA_n` (generators `T_0..T_{n-1}`, `X`), the elements `O~_n` and
//! `O_n`, the functional `rho` and the map `pi_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{dot, QMatrix, Subspace};
use crate::ratpoly::{fmt_rational, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtKind {
    /// `A~_n`: odd generators `T_1..T_{n-2}`, `X`, `Y`.
    Atilde,
    /// `TA_n`: odd generators `T_0..T_{n-1}` and `X`.
    TraceAlgebra,
}

/// A normal-form monomial `T_{h_1} ... T_{h_r} X^i Y^j` with
/// `h_1 < ... < h_r`; bit `h` of `tset` marks `T_h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtMonomial {
    pub tset: u32,
    pub i: u32,
    pub j: u32,
}

impl ExtMonomial {
    pub fn new(ts: &[u32], i: u32, j: u32) -> Self {
        ExtMonomial {
            tset: ts.iter().fold(0, |m, &h| m | (1 << h)),
            i,
            j,
        }
    }

    pub fn t_indices(&self) -> Vec<u32> {
        (0..32).filter(|h| self.tset >> h & 1 == 1).collect()
    }

    pub fn t_count(&self) -> u32 {
        self.tset.count_ones()
    }

    pub fn degree(&self) -> u32 {
        self.t_indices().iter().map(|h| 2 * h + 1).sum::<u32>() + self.i + self.j
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.t_indices().iter().map(|h| format!("T{h}")).collect();
        for (name, e) in [("X", self.i), ("Y", self.j)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A finite linear combination of [`ExtMonomial`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtElement {
    terms: BTreeMap<ExtMonomial, Rational>,
}

impl ExtElement {
    pub fn zero() -> Self {
        ExtElement::default()
    }

    pub fn monomial(m: ExtMonomial, c: Rational) -> Self {
        let mut e = ExtElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: ExtMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ExtMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(ExtMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &Rational) -> ExtElement {
        let mut out = ExtElement::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn add(&self, other: &ExtElement) -> ExtElement {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExtElement) -> ExtElement {
        self.add(&other.scale(&rat(-1)))
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest X power first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.i.cmp(&a.0.i).then(a.0.cmp(b.0)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let abs = c.abs();
            let body = match (abs.is_one(), m.degree() == 0) {
                (true, false) => m.to_string(),
                (_, true) => fmt_rational(&abs),
                _ => format!("{} {}", fmt_rational(&abs), m),
            };
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

/// Parity of the pairs `(a, b)` with `a` in `left`, `b` in `right`, `a > b`.
pub(crate) fn merge_sign(left: u32, right: u32) -> i64 {
    let mut count = 0u32;
    let mut r = right;
    while r != 0 {
        let b = r.trailing_zeros();
        count += (left >> (b + 1)).count_ones();
        r &= r - 1;
    }
    if count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// One of the algebras `A~_n` or `TA_n`, truncated above degree `n^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtAlgebra {
    pub n: usize,
    pub kind: ExtKind,
}

impl ExtAlgebra {
    pub fn atilde(n: usize) -> Self {
        assert!(n >= 2, "A~_n needs n >= 2");
        ExtAlgebra { n, kind: ExtKind::Atilde }
    }

    pub fn trace_algebra(n: usize) -> Self {
        assert!(n >= 1, "TA_n needs n >= 1");
        ExtAlgebra {
            n,
            kind: ExtKind::TraceAlgebra,
        }
    }

    pub fn t_range(&self) -> std::ops::RangeInclusive<u32> {
        match self.kind {
            ExtKind::Atilde => 1..=(self.n as u32).saturating_sub(2),
            ExtKind::TraceAlgebra => 0..=(self.n as u32 - 1),
        }
    }

    fn t_mask(&self) -> u32 {
        self.t_range().fold(0, |m, h| m | (1 << h))
    }

    pub fn max_degree(&self) -> u32 {
        (self.n * self.n) as u32
    }

    fn exp_bound(&self) -> u32 {
        2 * self.n as u32
    }

    /// Whether `m` is a normal-form monomial of this algebra (ignoring the
    /// degree cap).
    pub fn is_valid(&self, m: &ExtMonomial) -> bool {
        m.tset & !self.t_mask() == 0
            && m.i < self.exp_bound()
            && m.j < self.exp_bound()
            && (self.kind == ExtKind::Atilde || m.j == 0)
    }

    fn check(&self, e: &ExtElement) -> Result<()> {
        for m in e.terms.keys() {
            if !self.is_valid(m) {
                return Err(Error::DimensionMismatch(format!("{m} is not a monomial of this algebra at n = {}", self.n)));
            }
        }
        Ok(())
    }

    /// Monomial basis of the degree-`degree` component.
    pub fn basis(&self, degree: u32) -> Vec<ExtMonomial> {
        let mut out = Vec::new();
        if degree > self.max_degree() {
            return out;
        }
        let t_list: Vec<u32> = self.t_range().collect();
        let jmax = if self.kind == ExtKind::Atilde { self.exp_bound() } else { 1 };
        for sub in 0u32..(1 << t_list.len()) {
            let tset = t_list
                .iter()
                .enumerate()
                .filter(|(b, _)| sub >> b & 1 == 1)
                .fold(0, |m, (_, &h)| m | (1 << h));
            let tdeg: u32 = (0..32).filter(|h| tset >> h & 1 == 1).map(|h| 2 * h + 1).sum();
            if tdeg > degree {
                continue;
            }
            for i in (0..self.exp_bound()).rev() {
                for j in 0..jmax {
                    if tdeg + i + j == degree {
                        out.push(ExtMonomial { tset, i, j });
                    }
                }
            }
        }
        out.sort_by_key(|m| (m.tset, std::cmp::Reverse(m.i), m.j));
        out
    }

    /// Product of two normal-form monomials: `(sign, monomial)` or `None`
    /// when it vanishes.
    pub fn mul_monomials(&self, a: &ExtMonomial, b: &ExtMonomial) -> Option<(i64, ExtMonomial)> {
        if a.tset & b.tset != 0 {
            return None;
        }
        let i = a.i + b.i;
        let j = a.j + b.j;
        if i >= self.exp_bound() || j >= self.exp_bound() {
            return None;
        }
        let m = ExtMonomial {
            tset: a.tset | b.tset,
            i,
            j,
        };
        if m.degree() > self.max_degree() {
            return None;
        }
        // move the T's of b left across X^i Y^j of a, merge the T's, then
        // move X^k of b across Y^j of a
        let mut sign = merge_sign(a.tset, b.tset);
        if (b.t_count() * (a.i + a.j)) % 2 == 1 {
            sign = -sign;
        }
        if (a.j * b.i) % 2 == 1 {
            sign = -sign;
        }
        Some((sign, m))
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> Result<ExtElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = ExtElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((s, m)) = self.mul_monomials(ma, mb) {
                    out.add_term(m, rat(s) * ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn one(&self) -> ExtElement {
        ExtElement::monomial(ExtMonomial::default(), Rational::one())
    }

    pub fn x_power(&self, i: u32) -> ExtElement {
        if i >= self.exp_bound() {
            return ExtElement::zero();
        }
        ExtElement::monomial(ExtMonomial { tset: 0, i, j: 0 }, Rational::one())
    }

    pub fn y_power(&self, j: u32) -> ExtElement {
        if j >= self.exp_bound() || self.kind != ExtKind::Atilde {
            return ExtElement::zero();
        }
        ExtElement::monomial(ExtMonomial { tset: 0, i: 0, j }, Rational::one())
    }

    pub fn t(&self, h: u32) -> ExtElement {
        if !self.t_range().contains(&h) {
            return ExtElement::zero();
        }
        ExtElement::monomial(ExtMonomial::new(&[h], 0, 0), Rational::one())
    }

    /// Coordinates of a homogeneous element in the basis of `degree`.
    pub fn coordinates(&self, e: &ExtElement, degree: u32) -> Result<Vec<Rational>> {
        let basis = self.basis(degree);
        let index: BTreeMap<ExtMonomial, usize> = basis.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &e.terms {
            match index.get(m) {
                Some(&k) => v[k] = c.clone(),
                None => return Err(Error::WrongDegree { expected: degree as usize, got: m.degree() as usize }),
            }
        }
        Ok(v)
    }
}

/// `O~_n = n (X^{2n-1} - Y^{2n-1}) - sum_{i=1}^{n-2} (X^{2i} - Y^{2i}) T_{n-i-1}`
/// in `A~_n`.
pub fn obar(n: usize) -> ExtElement {
    let alg = ExtAlgebra::atilde(n);
    let top = 2 * n as u32 - 1;
    let mut e = alg.x_power(top).sub(&alg.y_power(top)).scale(&rat(n as i64));
    for i in 1..=(n as u32).saturating_sub(2) {
        let t = alg.t(n as u32 - i - 1);
        let diff = alg.x_power(2 * i).sub(&alg.y_power(2 * i));
        e = e.sub(&alg.mul(&diff, &t).expect("generators are valid"));
    }
    e
}

/// `O_n = n X^{2n-1} - sum_{i=0}^{n-1} X^{2i} T_{n-i-1}` in `TA_n`.
pub fn trace_on(n: usize) -> ExtElement {
    let alg = ExtAlgebra::trace_algebra(n);
    let mut e = alg.x_power(2 * n as u32 - 1).scale(&rat(n as i64));
    for i in 0..n as u32 {
        let t = alg.t(n as u32 - i - 1);
        e = e.sub(&alg.mul(&alg.x_power(2 * i), &t).expect("generators are valid"));
    }
    e
}

/// Basis of `TA_n` modulo `X^{2n}` and `O_n`: products of distinct
/// `T_0..T_{n-2}` times `X^0..X^{2n-1}`.
pub fn dimn_basis(n: usize) -> Vec<ExtMonomial> {
    let mut out = Vec::new();
    for tset in 0u32..(1 << (n - 1)) {
        for i in 0..2 * n as u32 {
            out.push(ExtMonomial { tset, i, j: 0 });
        }
    }
    out
}

/// Which sentence reading of `rho`'s second rule to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoReading {
    /// Rule 2 applies when `T` misses exactly one factor `T_h`.
    MissesExactlyOne,
    /// Rule 2 applies when `T` consists of the single factor `T_h`.
    ContainsOnlyOne,
}

/// The functional `rho` on `A~_n[n^2]`.
pub fn rho(n: usize, m: &ExtMonomial) -> Result<Rational> {
    rho_with(n, m, RhoReading::MissesExactlyOne)
}

pub fn rho_with(n: usize, m: &ExtMonomial, reading: RhoReading) -> Result<Rational> {
    let alg = ExtAlgebra::atilde(n);
    if !alg.is_valid(m) {
        return Err(Error::DimensionMismatch(format!("{m} is not a monomial of A~_{n}")));
    }
    if m.degree() as usize != n * n {
        return Err(Error::WrongDegree {
            expected: n * n,
            got: m.degree() as usize,
        });
    }
    let full = alg.t_mask();
    let sign_for = |h: u32| rat(if (h as usize + n).is_multiple_of(2) { 1 } else { -1 });
    if m.tset == full {
        let ok = |e: u32| e.is_multiple_of(2) && e >= 2 && e as usize <= 2 * n - 2;
        return Ok(if ok(m.i) && ok(m.j) { rat(n as i64) } else { Rational::zero() });
    }
    match reading {
        RhoReading::MissesExactlyOne => {
            let missing = full & !m.tset;
            Ok(if missing.count_ones() == 1 {
                sign_for(missing.trailing_zeros())
            } else {
                Rational::zero()
            })
        }
        RhoReading::ContainsOnlyOne => Ok(if m.tset.count_ones() == 1 {
            sign_for(m.tset.trailing_zeros())
        } else {
            Rational::zero()
        }),
    }
}

/// Matrix of `a -> a * O~_n` from `A~_n[n^2-2n+1]` to `A~_n[n^2]`; column
/// `c` holds the image of the `c`-th domain monomial.
pub fn pi_map(n: usize) -> QMatrix {
    mult_map(n, false)
}

/// Matrix of `a -> O~_n * a`.
pub fn pi_map_left(n: usize) -> QMatrix {
    mult_map(n, true)
}

fn mult_map(n: usize, left: bool) -> QMatrix {
    let alg = ExtAlgebra::atilde(n);
    let nn = (n * n) as u32;
    let dom = alg.basis(nn + 1 - 2 * n as u32);
    let tgt = alg.basis(nn);
    let ob = obar(n);
    let mut m = QMatrix::zeros(tgt.len(), dom.len());
    for (c, d) in dom.iter().enumerate() {
        let a = ExtElement::monomial(*d, Rational::one());
        let img = if left { alg.mul(&ob, &a) } else { alg.mul(&a, &ob) }.expect("valid monomials");
        let v = alg.coordinates(&img, nn).expect("image is homogeneous of degree n^2");
        for (r, x) in v.into_iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

pub const DEFAULT_KERIM_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct KerimReport {
    pub n: usize,
    pub domain_dim: usize,
    pub target_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub codim: usize,
    /// `rho` vanishes on every column of `pi_n`.
    pub rho_pi_zero: bool,
    pub image_equals_kernel: bool,
    /// `im pi_n + F * S X^2 Y^{2n-2}` is the whole target.
    pub complement_spans: bool,
    pub complement: ExtMonomial,
    pub rho_complement: Rational,
    /// Left and right multiplication by `O~_n` have the same image.
    pub left_image_equal: bool,
}

impl KerimReport {
    pub fn holds(&self) -> bool {
        self.rho_pi_zero && self.image_equals_kernel && self.complement_spans && self.codim == 1
    }
}

pub fn kerim_cost(n: usize) -> u128 {
    let alg = ExtAlgebra::atilde(n);
    let nn = (n * n) as u32;
    alg.basis(nn + 1 - 2 * n as u32).len() as u128 * alg.basis(nn).len() as u128
}

/// Checks that the image of `pi_n` is the kernel of `rho` and that
/// `S X^2 Y^{2n-2}` spans a complement.
pub fn verify_kerim(n: usize, budget: u128) -> Result<KerimReport> {
    verify_kerim_with(n, budget, RhoReading::MissesExactlyOne)
}

pub fn verify_kerim_with(n: usize, budget: u128, reading: RhoReading) -> Result<KerimReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("kerim needs n >= 2".into()));
    }
    let cost = kerim_cost(n);
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: format!("pi_n at n={n}"),
            cost,
            budget,
        });
    }
    let alg = ExtAlgebra::atilde(n);
    let nn = (n * n) as u32;
    let tgt = alg.basis(nn);
    let pi = pi_map(n);
    let rho_vec: Vec<Rational> = tgt
        .iter()
        .map(|m| rho_with(n, m, reading))
        .collect::<Result<_>>()?;
    let columns: Vec<Vec<Rational>> = pi.transpose().row_vecs();
    let rho_pi_zero = columns.iter().all(|c| dot(&rho_vec, c).is_zero());
    let image = Subspace::span(tgt.len(), columns);
    let kernel = QMatrix::from_rows(vec![rho_vec.clone()]).nullspace();
    let image_equals_kernel = image.contains(&kernel)? && kernel.contains(&image)?;
    let complement = ExtMonomial {
        tset: alg.t_mask(),
        i: 2,
        j: 2 * n as u32 - 2,
    };
    let comp_vec = alg.coordinates(&ExtElement::monomial(complement, Rational::one()), nn)?;
    let rho_complement = dot(&rho_vec, &comp_vec);
    let with_comp = image.sum(&Subspace::span(tgt.len(), vec![comp_vec]))?;
    let left = Subspace::span(tgt.len(), pi_map_left(n).transpose().row_vecs());
    Ok(KerimReport {
        n,
        domain_dim: pi.cols(),
        target_dim: tgt.len(),
        image_dim: image.dim(),
        kernel_dim: kernel.dim(),
        codim: image.codim(),
        rho_pi_zero,
        image_equals_kernel,
        complement_spans: with_comp.dim() == tgt.len(),
        complement,
        rho_complement,
        left_image_equal: left == image,
    })
}
