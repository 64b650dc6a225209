//! Quasi-polynomials: the free algebra on generators `x_k` with coefficients
//! in the commutative polynomial ring of the generic-matrix entries.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::genmat::{phi_eval, MatrixPoly};
use crate::perm;
use crate::ratpoly::{fmt_rational, CPoly, Rational, Var};

/// A noncommutative monomial in the generators; the empty word is the unit.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u32>) -> Self {
        assert!(letters.iter().all(|&k| k >= 1), "generator indices start at 1");
        Word(letters)
    }

    pub fn letter(k: u32) -> Self {
        Word::new(vec![k])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn count(&self, k: u32) -> usize {
        self.0.iter().filter(|&&x| x == k).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, k) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{k}")?;
        }
        Ok(())
    }
}

/// `sum lambda_M M` with `lambda_M` a [`CPoly`] and `M` a [`Word`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuasiPoly {
    terms: BTreeMap<Word, CPoly>,
}

impl QuasiPoly {
    pub fn zero() -> Self {
        QuasiPoly::default()
    }

    pub fn one() -> Self {
        QuasiPoly::from_cpoly(CPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        QuasiPoly::from_cpoly(CPoly::constant(c))
    }

    pub fn from_cpoly(c: CPoly) -> Self {
        QuasiPoly::monomial(Word::unit(), c)
    }

    pub fn generator(k: u32) -> Self {
        QuasiPoly::monomial(Word::letter(k), CPoly::one())
    }

    pub fn word(w: Word) -> Self {
        QuasiPoly::monomial(w, CPoly::one())
    }

    pub fn monomial(w: Word, c: CPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        QuasiPoly { terms }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> CPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &CPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplies every coefficient by `c` (coefficients are central).
    pub fn scale(&self, c: &CPoly) -> QuasiPoly {
        let mut out = QuasiPoly::zero();
        for (w, l) in &self.terms {
            out.add_term(w.clone(), &(l * c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> QuasiPoly {
        let mut out = QuasiPoly::zero();
        for (w, l) in &self.terms {
            out.add_term(w.clone(), &l.scale(c));
        }
        out
    }

    /// Generators occurring in words.
    pub fn word_generators(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    /// Generators occurring in words or as the `k` of a coefficient variable.
    pub fn generators(&self) -> BTreeSet<u32> {
        let mut g = self.word_generators();
        for c in self.terms.values() {
            g.extend(c.generators());
        }
        g
    }

    pub fn max_entry_index(&self) -> u32 {
        self.terms
            .values()
            .map(CPoly::max_entry_index)
            .max()
            .unwrap_or(0)
    }

    /// True when every coefficient is a rational constant, i.e. this is an
    /// ordinary noncommutative polynomial.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    /// Largest `|M| + deg(lambda_M)`, the total degree in the matrix entries
    /// after evaluation.
    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, c)| w.len() + c.total_degree() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Renames generators `k -> map[k]` in words and in coefficient
    /// variables; generators missing from `map` are kept.
    pub fn rename_generators(&self, map: &BTreeMap<u32, u32>) -> QuasiPoly {
        let r = |k: u32| map.get(&k).copied().unwrap_or(k);
        let mut out = QuasiPoly::zero();
        for (w, c) in &self.terms {
            let w2 = Word(w.letters().iter().map(|&k| r(k)).collect());
            let c2 = c.map_vars(|v| Var::new(r(v.k), v.i, v.j));
            out.add_term(w2, &c2);
        }
        out
    }

    /// The T-ideal substitution: `x_k -> H_k` in words and simultaneously
    /// `c[k,i,j] -> Phi(H_k)_{ij}` in coefficients.
    pub fn substitute(&self, subs: &BTreeMap<u32, QuasiPoly>, n: usize) -> Result<QuasiPoly> {
        if self.max_entry_index() as usize > n {
            return Err(Error::DimensionMismatch(format!(
                "coefficient index {} exceeds n = {n}",
                self.max_entry_index()
            )));
        }
        for g in self.generators() {
            if !subs.contains_key(&g) {
                return Err(Error::MissingGenerator(g));
            }
        }
        let coeff_gens: BTreeSet<u32> = self.terms.values().flat_map(|c| c.generators()).collect();
        let mut images: BTreeMap<u32, MatrixPoly> = BTreeMap::new();
        for g in coeff_gens {
            images.insert(g, phi_eval(&subs[&g], n)?);
        }
        let mut out = QuasiPoly::zero();
        for (w, c) in &self.terms {
            let c2 = c.subst_with(|v| {
                images
                    .get(&v.k)
                    .map(|m| m.entry(v.i as usize, v.j as usize).clone())
            })?;
            let mut img = QuasiPoly::from_cpoly(c2);
            for &k in w.letters() {
                img = &img * &subs[&k];
                if img.is_zero() {
                    break;
                }
            }
            out += &img;
        }
        Ok(out)
    }

    /// Full polarization in `generator`.
    ///
    /// Every term must contain exactly `fresh.len()` occurrences of the
    /// generator in its word and none in its coefficient. Substituting all
    /// fresh generators back gives `d!` times the input.
    pub fn multilinearize(&self, generator: u32, fresh: &[u32]) -> Result<QuasiPoly> {
        let mut degrees = BTreeSet::new();
        for (w, c) in &self.terms {
            if c.generators().contains(&generator) {
                return Err(Error::CoefficientDependsOnGenerator(generator));
            }
            degrees.insert(w.count(generator));
        }
        if degrees.len() > 1 {
            return Err(Error::NotHomogeneous {
                generator,
                found: degrees.into_iter().collect(),
            });
        }
        let d = degrees.into_iter().next().unwrap_or(fresh.len());
        if d != fresh.len() {
            return Err(Error::FreshCountMismatch {
                expected: d,
                got: fresh.len(),
            });
        }
        let perms = perm::permutations(d);
        let mut out = QuasiPoly::zero();
        for (w, c) in &self.terms {
            for p in &perms {
                let mut slot = 0;
                let letters = w
                    .letters()
                    .iter()
                    .map(|&k| {
                        if k == generator {
                            let f = fresh[p[slot]];
                            slot += 1;
                            f
                        } else {
                            k
                        }
                    })
                    .collect();
                out.add_term(Word(letters), c);
            }
        }
        Ok(out)
    }

    /// The antisymmetrizer `(1/h!) sum_sigma sign(sigma) f(x_sigma(1), ...)`
    /// over the listed generators; `normalized = false` drops the `1/h!`.
    pub fn antisymmetrize(&self, generators: &[u32], normalized: bool) -> Result<QuasiPoly> {
        for (w, c) in &self.terms {
            for m in c.terms().map(|(m, _)| m) {
                for &g in generators {
                    if w.count(g) + m.degree_in_generator(g) as usize != 1 {
                        return Err(Error::NotMultilinear(generators.to_vec()));
                    }
                }
            }
        }
        let h = generators.len();
        let mut out = QuasiPoly::zero();
        for p in perm::permutations(h) {
            let map: BTreeMap<u32, u32> = generators
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, generators[p[i]]))
                .collect();
            let renamed = self.rename_generators(&map);
            if perm::sign(&p) > 0 {
                out += &renamed;
            } else {
                out -= &renamed;
            }
        }
        if normalized {
            let f = Rational::new(1.into(), (perm::factorial(h) as u64).into());
            out = out.scale_rational(&f);
        }
        Ok(out)
    }
}

impl AddAssign<&QuasiPoly> for QuasiPoly {
    fn add_assign(&mut self, rhs: &QuasiPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c);
        }
    }
}

impl SubAssign<&QuasiPoly> for QuasiPoly {
    fn sub_assign(&mut self, rhs: &QuasiPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), &-c);
        }
    }
}

impl Add for &QuasiPoly {
    type Output = QuasiPoly;
    fn add(self, rhs: &QuasiPoly) -> QuasiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QuasiPoly {
    type Output = QuasiPoly;
    fn sub(self, rhs: &QuasiPoly) -> QuasiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &QuasiPoly {
    type Output = QuasiPoly;
    fn mul(self, rhs: &QuasiPoly) -> QuasiPoly {
        let mut out = QuasiPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &QuasiPoly {
    type Output = QuasiPoly;
    fn neg(self) -> QuasiPoly {
        QuasiPoly::zero() - self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for QuasiPoly {
            type Output = QuasiPoly;
            fn $f(self, rhs: QuasiPoly) -> QuasiPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Writes `coefficient * word` in the text grammar accepted by the CLI
/// parser. Returns whether the printed term is negative.
pub(crate) fn fmt_term(c: &CPoly, word: &str, word_is_unit: bool) -> (bool, String) {
    let mut parts: Vec<String> = Vec::new();
    let mut negative = false;
    if c.len() == 1 {
        let (m, r) = c.terms().next().unwrap();
        negative = r.is_negative();
        let abs = r.abs();
        let unit_coeff = abs.is_one();
        if !unit_coeff || (m.is_one() && word_is_unit) {
            parts.push(fmt_rational(&abs));
        }
        if !m.is_one() {
            parts.push(m.to_string());
        }
    } else {
        parts.push(format!("({c})"));
    }
    if !word_is_unit {
        parts.push(word.to_string());
    }
    (negative, parts.join(" "))
}

impl fmt::Display for QuasiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let (neg, body) = fmt_term(c, &w.to_string(), w.is_empty());
            match (idx, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl From<CPoly> for QuasiPoly {
    fn from(c: CPoly) -> Self {
        QuasiPoly::from_cpoly(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmat::{phi_eval, standard_poly};
    use crate::ratpoly::{rat, ratio};

    fn x(k: u32) -> QuasiPoly {
        QuasiPoly::generator(k)
    }

    fn c(k: u32, i: u32, j: u32) -> CPoly {
        CPoly::var(Var::new(k, i, j))
    }

    #[test]
    fn products() {
        let p = &x(1) * &x(2);
        assert_eq!(p, QuasiPoly::word(Word::new(vec![1, 2])));
        let a = QuasiPoly::monomial(Word::letter(1), c(1, 1, 2));
        let b = QuasiPoly::monomial(Word::letter(2), c(2, 1, 2));
        assert_eq!(
            &a * &b,
            QuasiPoly::monomial(Word::new(vec![1, 2]), &c(1, 1, 2) * &c(2, 1, 2))
        );
    }

    #[test]
    fn substitution_examples() {
        let p = QuasiPoly::monomial(Word::letter(2), c(1, 1, 1));
        let ident: BTreeMap<u32, QuasiPoly> = [(1, x(1)), (2, x(2))].into_iter().collect();
        assert_eq!(p.substitute(&ident, 2).unwrap(), p);

        let subs: BTreeMap<u32, QuasiPoly> =
            [(1, &x(3) * &x(4)), (2, x(2))].into_iter().collect();
        let got = p.substitute(&subs, 2).unwrap();
        let expected_coeff = &(&c(3, 1, 1) * &c(4, 1, 1)) + &(&c(3, 1, 2) * &c(4, 2, 1));
        assert_eq!(got, QuasiPoly::monomial(Word::letter(2), expected_coeff));

        let missing: BTreeMap<u32, QuasiPoly> = [(2, x(2))].into_iter().collect();
        assert_eq!(p.substitute(&missing, 2), Err(Error::MissingGenerator(1)));
        assert!(matches!(
            QuasiPoly::from_cpoly(c(1, 3, 1)).substitute(&ident, 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn polarization_examples() {
        let sq = &x(1) * &x(1);
        let pol = sq.multilinearize(1, &[2, 3]).unwrap();
        assert_eq!(pol, &(&x(2) * &x(3)) + &(&x(3) * &x(2)));
        assert_eq!(x(1).multilinearize(1, &[2]).unwrap(), x(2));

        let mixed = &sq + &x(1);
        assert!(matches!(
            mixed.multilinearize(1, &[2, 3]),
            Err(Error::NotHomogeneous { .. })
        ));
        let dep = QuasiPoly::monomial(Word::letter(1), c(1, 1, 1));
        assert_eq!(
            dep.multilinearize(1, &[2]),
            Err(Error::CoefficientDependsOnGenerator(1))
        );
    }

    #[test]
    fn antisymmetrizer_examples() {
        let xy = &x(1) * &x(2);
        let a = xy.antisymmetrize(&[1, 2], true).unwrap();
        assert_eq!(a, standard_poly(2).scale_rational(&ratio(1, 2)));
        let sym = &xy + &(&x(2) * &x(1));
        assert!(sym.antisymmetrize(&[1, 2], true).unwrap().is_zero());

        let w = QuasiPoly::word(Word::new(vec![1, 2, 3, 4]));
        let a4 = w.antisymmetrize(&[1, 2, 3, 4], true).unwrap();
        assert_eq!(a4, standard_poly(4).scale_rational(&ratio(1, 24)));
        assert_eq!(w.antisymmetrize(&[1, 2, 3, 4], false).unwrap(), standard_poly(4));

        assert!(matches!(
            (&x(1) * &x(1)).antisymmetrize(&[1, 2], true),
            Err(Error::NotMultilinear(_))
        ));
    }

    #[test]
    fn antisymmetrizer_handles_coefficients() {
        // c[1,1,2] x2 is multilinear in {1,2} jointly.
        let p = QuasiPoly::monomial(Word::letter(2), c(1, 1, 2));
        let a = p.antisymmetrize(&[1, 2], false).unwrap();
        let expected = &p - &QuasiPoly::monomial(Word::letter(1), c(2, 1, 2));
        assert_eq!(a, expected);
        let twice = a.antisymmetrize(&[1, 2], true).unwrap();
        assert_eq!(twice, a);
    }

    #[test]
    fn display_is_grammar_shaped() {
        let p = &QuasiPoly::monomial(Word::letter(1), c(2, 1, 2))
            - &QuasiPoly::monomial(Word::letter(2), c(1, 1, 2));
        let q = &p + &QuasiPoly::from_cpoly(&(&c(1, 1, 2) * &c(2, 2, 2)) - &(&c(1, 2, 2) * &c(2, 1, 2)));
        assert_eq!(
            q.to_string(),
            "(c[1,1,2] c[2,2,2] - c[1,2,2] c[2,1,2]) + c[2,1,2] x1 - c[1,1,2] x2"
        );
        assert_eq!(QuasiPoly::constant(rat(-3)).to_string(), "-3");
        assert_eq!(standard_poly(2).to_string(), "x1*x2 - x2*x1");
        let _ = phi_eval(&q, 2).unwrap();
    }
}
