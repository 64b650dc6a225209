//! Exact rationals and sparse commutative polynomials in the indexed
//! variables `c[k,i,j]`, the `(i,j)` entry of the `k`-th generic matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The commuting variable `c[k,i,j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub k: u32,
    pub i: u32,
    pub j: u32,
}

impl Var {
    pub const fn new(k: u32, i: u32, j: u32) -> Self {
        Var { k, i, j }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c[{},{},{}]", self.k, self.i, self.j)
    }
}

/// A monomial in the `c[k,i,j]`: sorted `(variable, exponent)` pairs with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CMonomial(Vec<(Var, u32)>);

impl CMonomial {
    pub fn one() -> Self {
        CMonomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        CMonomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        CMonomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|idx| self.0[idx].1)
            .unwrap_or(0)
    }

    /// Total degree in the variables belonging to generator `k`.
    pub fn degree_in_generator(&self, k: u32) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.k == k)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn mul(&self, other: &CMonomial) -> CMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[x].0, a[x].1 + b[y].1));
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        CMonomial(out)
    }

    /// Applies `f` to every variable; the result is re-normalized.
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> CMonomial {
        CMonomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl fmt::Display for CMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.0 {
            for _ in 0..e {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients in the variables `c[k,i,j]`.
///
/// Terms are kept in a `BTreeMap` without zero coefficients, so equal
/// polynomials have identical representations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CPoly {
    terms: BTreeMap<CMonomial, Rational>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn one() -> Self {
        CPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        CPoly::monomial(CMonomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        CPoly::monomial(CMonomial::var(v), Rational::one())
    }

    pub fn monomial(m: CMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (CMonomial, Rational)>>(it: I) -> Self {
        let mut p = CPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&CMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &CMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&CMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(CMonomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn add_term(&mut self, m: CMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> CPoly {
        if c.is_zero() {
            return CPoly::zero();
        }
        CPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &CMonomial, c: &Rational) -> CPoly {
        if c.is_zero() {
            return CPoly::zero();
        }
        CPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, v)| (mm.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CPoly {
        let mut acc = CPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a point given by `assignment`.
    pub fn eval_with(&self, assignment: impl Fn(Var) -> Option<Rational>) -> Result<Rational> {
        let mut cache: BTreeMap<Var, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.factors() {
                let val = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assignment(v).ok_or(Error::MissingAssignment(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                term *= num_traits::pow(val, e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational> {
        self.eval_with(|v| assignment.get(&v).cloned())
    }

    /// Simultaneous substitution of every variable by a polynomial.
    pub fn subst_with(&self, table: impl Fn(Var) -> Option<CPoly>) -> Result<CPoly> {
        let mut powers: BTreeMap<(Var, u32), CPoly> = BTreeMap::new();
        let mut images: BTreeMap<Var, CPoly> = BTreeMap::new();
        let mut out = CPoly::zero();
        for (m, c) in &self.terms {
            let mut term = CPoly::constant(c.clone());
            for &(v, e) in m.factors() {
                if let std::collections::btree_map::Entry::Vacant(slot) = images.entry(v) {
                    slot.insert(table(v).ok_or(Error::MissingAssignment(v))?);
                }
                let pw = powers
                    .entry((v, e))
                    .or_insert_with(|| images[&v].pow(e))
                    .clone();
                term = &term * &pw;
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        Ok(out)
    }

    pub fn subst(&self, table: &BTreeMap<Var, CPoly>) -> Result<CPoly> {
        self.subst_with(|v| table.get(&v).cloned())
    }

    /// Renames variables; used when permuting generators.
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> CPoly {
        let mut out = CPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&mut f), c.clone());
        }
        out
    }

    /// Largest variable index `i` or `j` appearing in the polynomial.
    pub fn max_entry_index(&self) -> u32 {
        self.variables()
            .iter()
            .map(|v| v.i.max(v.j))
            .max()
            .unwrap_or(0)
    }

    pub fn generators(&self) -> BTreeSet<u32> {
        self.variables().iter().map(|v| v.k).collect()
    }
}

impl From<Rational> for CPoly {
    fn from(c: Rational) -> Self {
        CPoly::constant(c)
    }
}

impl From<Var> for CPoly {
    fn from(v: Var) -> Self {
        CPoly::var(v)
    }
}

impl AddAssign<&CPoly> for CPoly {
    fn add_assign(&mut self, rhs: &CPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&CPoly> for CPoly {
    fn sub_assign(&mut self, rhs: &CPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CPoly {
            type Output = CPoly;
            fn $f(self, rhs: CPoly) -> CPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{} {m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}
