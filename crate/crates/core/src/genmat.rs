//! Generic matrices, the evaluation homomorphism `Phi: C<X> -> M_n(C)`,
//! trace polynomials, and the classical identities of `M_n`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::QMatrix;
use crate::freealg::{QuasiPoly, Word};
use crate::perm;
use crate::ratpoly::{fmt_rational, rat, CPoly, Rational, Var};
use crate::sampling::{random_matrix, SampleConfig};

/// An `n x n` matrix over [`CPoly`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixPoly {
    n: usize,
    entries: Vec<CPoly>,
}

impl MatrixPoly {
    pub fn zero(n: usize) -> Self {
        MatrixPoly {
            n,
            entries: vec![CPoly::zero(); n * n],
        }
    }

    pub fn scalar(n: usize, c: &CPoly) -> Self {
        let mut m = MatrixPoly::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        MatrixPoly::scalar(n, &CPoly::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &CPoly {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: CPoly) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CPoly::is_zero)
    }

    pub fn trace(&self) -> CPoly {
        let mut t = CPoly::zero();
        for i in 0..self.n {
            t += &self.entries[i * self.n + i];
        }
        t
    }

    /// `Some(lambda)` when the matrix equals `lambda * I`.
    pub fn as_scalar(&self) -> Option<CPoly> {
        let d = self.entries.first().cloned().unwrap_or_default();
        for i in 0..self.n {
            for j in 0..self.n {
                let e = &self.entries[i * self.n + j];
                if (i == j && *e != d) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(d)
    }

    pub fn scale(&self, c: &CPoly) -> MatrixPoly {
        MatrixPoly {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Substitutes rational values for the variables of every entry.
    pub fn eval_with(&self, assignment: impl Fn(Var) -> Option<Rational> + Copy) -> Result<QMatrix> {
        let mut m = QMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.entries[i * self.n + j].eval_with(assignment)?);
            }
        }
        Ok(m)
    }
}

impl Mul for &MatrixPoly {
    type Output = MatrixPoly;
    fn mul(self, rhs: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = MatrixPoly::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * n + j] += &(a * b);
                }
            }
        }
        out
    }
}

impl Add for &MatrixPoly {
    type Output = MatrixPoly;
    fn add(self, rhs: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.n, rhs.n);
        MatrixPoly {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &MatrixPoly {
    type Output = MatrixPoly;
    fn sub(self, rhs: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.n, rhs.n);
        MatrixPoly {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&MatrixPoly> for MatrixPoly {
    fn add_assign(&mut self, rhs: &MatrixPoly) {
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += b;
        }
    }
}

impl fmt::Display for MatrixPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.n + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The generic matrix `xi_k` with entry `(i, j)` equal to `c[k,i,j]`.
pub fn generic_matrix(k: u32, n: usize) -> MatrixPoly {
    let mut m = MatrixPoly::zero(n);
    for i in 1..=n {
        for j in 1..=n {
            m.set_entry(i, j, CPoly::var(Var::new(k, i as u32, j as u32)));
        }
    }
    m
}

/// Memoized products of generic matrices along words.
#[derive(Default)]
pub(crate) struct WordCache {
    n: usize,
    cache: HashMap<Vec<u32>, MatrixPoly>,
}

impl WordCache {
    pub(crate) fn new(n: usize) -> Self {
        WordCache {
            n,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, letters: &[u32]) -> MatrixPoly {
        if letters.is_empty() {
            return MatrixPoly::identity(self.n);
        }
        if let Some(m) = self.cache.get(letters) {
            return m.clone();
        }
        let m = if letters.len() == 1 {
            generic_matrix(letters[0], self.n)
        } else {
            let prefix = self.get(&letters[..letters.len() - 1]);
            &prefix * &generic_matrix(letters[letters.len() - 1], self.n)
        };
        self.cache.insert(letters.to_vec(), m.clone());
        m
    }
}

fn check_dimension(p: &QuasiPoly, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    let idx = p.max_entry_index() as usize;
    if idx > n {
        return Err(Error::DimensionMismatch(format!(
            "coefficient index {idx} exceeds n = {n}"
        )));
    }
    Ok(())
}

/// `Phi(p)`: words go to products of generic matrices, coefficients to
/// scalar matrices.
pub fn phi_eval(p: &QuasiPoly, n: usize) -> Result<MatrixPoly> {
    check_dimension(p, n)?;
    let mut cache = WordCache::new(n);
    let mut out = MatrixPoly::zero(n);
    for (w, c) in p.terms() {
        let m = cache.get(w.letters());
        out += &m.scale(c);
    }
    Ok(out)
}

/// Exact test: `p` is a quasi-identity of `M_n` iff `Phi(p) = 0`.
pub fn is_quasi_identity(p: &QuasiPoly, n: usize) -> Result<bool> {
    Ok(phi_eval(p, n)?.is_zero())
}

/// Exact test that `Phi(p)` is a scalar matrix.
pub fn is_central(p: &QuasiPoly, n: usize) -> Result<bool> {
    Ok(phi_eval(p, n)?.as_scalar().is_some())
}

/// Evaluates `p` at concrete matrices, `point[k]` standing for `x_k`.
pub fn evaluate(p: &QuasiPoly, point: &BTreeMap<u32, QMatrix>) -> Result<QMatrix> {
    let n = point
        .values()
        .next()
        .map(QMatrix::rows)
        .ok_or_else(|| Error::InvalidArgument("empty evaluation point".into()))?;
    check_dimension(p, n)?;
    for g in p.generators() {
        if !point.contains_key(&g) {
            return Err(Error::MissingGenerator(g));
        }
    }
    let assignment = |v: Var| {
        point
            .get(&v.k)
            .map(|m| m.get(v.i as usize - 1, v.j as usize - 1).clone())
    };
    let mut words: HashMap<Vec<u32>, QMatrix> = HashMap::new();
    let mut out = QMatrix::zeros(n, n);
    for (w, c) in p.terms() {
        let coeff = c.eval_with(assignment)?;
        if coeff.is_zero() {
            continue;
        }
        let m = word_value(w.letters(), point, n, &mut words);
        out = &out + &m.scale(&coeff);
    }
    Ok(out)
}

fn word_value(
    letters: &[u32],
    point: &BTreeMap<u32, QMatrix>,
    n: usize,
    memo: &mut HashMap<Vec<u32>, QMatrix>,
) -> QMatrix {
    if letters.is_empty() {
        return QMatrix::identity(n);
    }
    if let Some(m) = memo.get(letters) {
        return m.clone();
    }
    let prefix = word_value(&letters[..letters.len() - 1], point, n, memo);
    let m = &prefix * &point[&letters[letters.len() - 1]];
    memo.insert(letters.to_vec(), m.clone());
    m
}

/// Outcome of a randomized identity test.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedVerdict {
    /// `true` when every trial evaluated to zero (resp. to a scalar).
    pub holds: bool,
    pub trials_run: usize,
    /// Total degree of the entry polynomials being tested.
    pub degree: usize,
    /// Upper bound on the probability that `holds` is a false positive:
    /// `(degree / (2 * bound + 1))^trials`, capped at 1.
    pub failure_bound: Rational,
    /// Evaluation point refuting the identity, when one was found.
    pub witness: Option<BTreeMap<u32, QMatrix>>,
    pub witness_value: Option<QMatrix>,
}

pub fn schwartz_zippel_bound(degree: usize, cfg: &SampleConfig, trials: usize) -> Rational {
    let per = Rational::new((degree as i64).into(), (cfg.support() as i64).into());
    let per = if per > Rational::one() { Rational::one() } else { per };
    num_traits::pow(per, trials)
}

fn randomized_check(
    p: &QuasiPoly,
    n: usize,
    cfg: &SampleConfig,
    accept: impl Fn(&QMatrix) -> bool,
) -> Result<RandomizedVerdict> {
    check_dimension(p, n)?;
    let mut rng = cfg.rng();
    let gens: Vec<u32> = p.generators().into_iter().collect();
    let degree = p.total_degree();
    for t in 0..cfg.trials {
        let point: BTreeMap<u32, QMatrix> = gens
            .iter()
            .map(|&g| (g, random_matrix(&mut rng, n, cfg.bound)))
            .collect();
        let value = if point.is_empty() {
            let c = p.coefficient(&Word::unit()).as_constant().unwrap_or_default();
            QMatrix::scalar(n, c)
        } else {
            evaluate(p, &point)?
        };
        if !accept(&value) {
            return Ok(RandomizedVerdict {
                holds: false,
                trials_run: t + 1,
                degree,
                failure_bound: Rational::zero(),
                witness: Some(point),
                witness_value: Some(value),
            });
        }
    }
    Ok(RandomizedVerdict {
        holds: true,
        trials_run: cfg.trials,
        degree,
        failure_bound: schwartz_zippel_bound(degree, cfg, cfg.trials),
        witness: None,
        witness_value: None,
    })
}

/// Randomized quasi-identity test at integer points in `[-bound, bound]`.
pub fn is_quasi_identity_randomized(p: &QuasiPoly, n: usize, cfg: &SampleConfig) -> Result<RandomizedVerdict> {
    randomized_check(p, n, cfg, QMatrix::is_zero)
}

/// Randomized centrality test. Note a scalar at each point only certifies
/// pointwise centrality of the sample.
pub fn is_central_randomized(p: &QuasiPoly, n: usize, cfg: &SampleConfig) -> Result<RandomizedVerdict> {
    randomized_check(p, n, cfg, |m| m.as_scalar().is_some())
}

/// Searches for an evaluation point where `p` is nonzero (or non-scalar
/// when `central` is set): first all tuples of matrix units, up to
/// `max_unit_tuples`, then random points.
pub fn find_witness(
    p: &QuasiPoly,
    n: usize,
    central: bool,
    cfg: &SampleConfig,
) -> Result<Option<(BTreeMap<u32, QMatrix>, QMatrix)>> {
    check_dimension(p, n)?;
    let bad = |m: &QMatrix| {
        if central {
            m.as_scalar().is_none()
        } else {
            !m.is_zero()
        }
    };
    let gens: Vec<u32> = p.generators().into_iter().collect();
    if gens.is_empty() {
        let c = p.coefficient(&Word::unit()).as_constant().unwrap_or_default();
        let v = QMatrix::scalar(n, c);
        return Ok(if bad(&v) { Some((BTreeMap::new(), v)) } else { None });
    }
    let units: Vec<QMatrix> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| QMatrix::unit(n, i, j))
        .collect();
    let max_unit_tuples = 4096usize;
    let total = (units.len() as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if total <= max_unit_tuples as u128 {
        let mut idx = vec![0usize; gens.len()];
        loop {
            let point: BTreeMap<u32, QMatrix> = gens
                .iter()
                .zip(&idx)
                .map(|(&g, &u)| (g, units[u].clone()))
                .collect();
            let v = evaluate(p, &point)?;
            if bad(&v) {
                return Ok(Some((point, v)));
            }
            // odometer
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < units.len() {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    let mut rng = cfg.rng();
    for _ in 0..cfg.trials.max(1) * 5 {
        let point: BTreeMap<u32, QMatrix> = gens
            .iter()
            .map(|&g| (g, random_matrix(&mut rng, n, cfg.bound)))
            .collect();
        let v = evaluate(p, &point)?;
        if bad(&v) {
            return Ok(Some((point, v)));
        }
    }
    Ok(None)
}

/// `S_h = sum_sigma sign(sigma) x_sigma(1) ... x_sigma(h)`.
pub fn standard_poly(h: usize) -> QuasiPoly {
    let mut out = QuasiPoly::zero();
    for p in perm::permutations(h) {
        let w = Word::new(p.iter().map(|&i| i as u32 + 1).collect());
        out.add_term(w, &CPoly::constant(rat(perm::sign(&p))));
    }
    out
}

/// Capelli polynomial `C_{2t-1}(x_1..x_t; y_1..y_{t-1})` with `y_r` realized
/// as the generator `x_{t+r}`.
pub fn capelli(t: usize) -> QuasiPoly {
    let mut out = QuasiPoly::zero();
    for p in perm::permutations(t) {
        let mut letters = Vec::with_capacity(2 * t - 1);
        for (pos, &i) in p.iter().enumerate() {
            if pos > 0 {
                letters.push((t + pos) as u32);
            }
            letters.push(i as u32 + 1);
        }
        out.add_term(Word::new(letters), &CPoly::constant(rat(perm::sign(&p))));
    }
    out
}

/// A cyclic word `tr(x_{i1} ... x_{ik})`, stored in its lexicographically
/// least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceWord(Vec<u32>);

impl TraceWord {
    pub fn new(letters: Vec<u32>) -> Self {
        assert!(!letters.is_empty(), "trace of the empty word is n; use a scalar instead");
        let best = (0..letters.len())
            .map(|r| {
                let mut v = letters[r..].to_vec();
                v.extend_from_slice(&letters[..r]);
                v
            })
            .min()
            .unwrap();
        TraceWord(best)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// The trace of the corresponding product of generic matrices.
    pub fn expand(&self, n: usize) -> CPoly {
        WordCache::new(n).get(&self.0).trace()
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tr({})", Word::new(self.0.clone()))
    }
}

/// A term of a trace polynomial: a product of traces times a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceTerm {
    pub traces: Vec<TraceWord>,
    pub word: Word,
}

impl TraceTerm {
    fn new(mut traces: Vec<TraceWord>, word: Word) -> Self {
        traces.sort();
        TraceTerm { traces, word }
    }

    fn degree(&self) -> usize {
        self.traces.iter().map(|t| t.0.len()).sum::<usize>() + self.word.len()
    }
}

impl Ord for TraceTerm {
    /// Longer words first, then more trace factors, then the traces.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .word
            .len()
            .cmp(&self.word.len())
            .then_with(|| other.traces.len().cmp(&self.traces.len()))
            .then_with(|| self.traces.cmp(&other.traces))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for TraceTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the free algebra with formal traces (rational coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TracePoly {
    terms: BTreeMap<TraceTerm, Rational>,
}

impl TracePoly {
    pub fn zero() -> Self {
        TracePoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = TracePoly::zero();
        p.add_term(TraceTerm::new(vec![], Word::unit()), c);
        p
    }

    pub fn one() -> Self {
        TracePoly::constant(Rational::one())
    }

    pub fn word(w: Word) -> Self {
        let mut p = TracePoly::zero();
        p.add_term(TraceTerm::new(vec![], w), Rational::one());
        p
    }

    pub fn generator(k: u32) -> Self {
        TracePoly::word(Word::letter(k))
    }

    /// `tr(w)` as a central element.
    pub fn trace_of(w: &Word) -> Self {
        let mut p = TracePoly::zero();
        p.add_term(TraceTerm::new(vec![TraceWord::new(w.letters().to_vec())], Word::unit()), Rational::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceTerm, &Rational)> {
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

    fn add_term(&mut self, t: TraceTerm, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> TracePoly {
        let mut out = TracePoly::zero();
        for (t, v) in &self.terms {
            out.add_term(t.clone(), v * c);
        }
        out
    }

    /// Expands every trace into a polynomial in the entries of the generic
    /// matrices of `M_n`.
    pub fn expand(&self, n: usize) -> QuasiPoly {
        let mut cache = WordCache::new(n);
        let mut traces: HashMap<TraceWord, CPoly> = HashMap::new();
        let mut out = QuasiPoly::zero();
        for (t, c) in &self.terms {
            let mut coeff = CPoly::constant(c.clone());
            for tw in &t.traces {
                let tp = traces
                    .entry(tw.clone())
                    .or_insert_with(|| cache.get(tw.letters()).trace())
                    .clone();
                coeff = &coeff * &tp;
            }
            out.add_term(t.word.clone(), &coeff);
        }
        out
    }

    pub fn rename_generators(&self, map: &BTreeMap<u32, u32>) -> TracePoly {
        let r = |k: &u32| map.get(k).copied().unwrap_or(*k);
        let mut out = TracePoly::zero();
        for (t, c) in &self.terms {
            let traces = t
                .traces
                .iter()
                .map(|tw| TraceWord::new(tw.0.iter().map(r).collect()))
                .collect();
            let word = Word::new(t.word.letters().iter().map(r).collect());
            out.add_term(TraceTerm::new(traces, word), c.clone());
        }
        out
    }

    /// Full polarization in `generator`, counting occurrences inside traces
    /// as well as in the word.
    pub fn multilinearize(&self, generator: u32, fresh: &[u32]) -> Result<TracePoly> {
        let mut degrees = BTreeSet::new();
        for t in self.terms.keys() {
            let d = t.traces.iter().map(|tw| tw.0.iter().filter(|&&k| k == generator).count()).sum::<usize>()
                + t.word.count(generator);
            degrees.insert(d);
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
        let mut out = TracePoly::zero();
        for (t, c) in &self.terms {
            for p in &perms {
                let mut slot = 0;
                let mut sub = |k: u32| {
                    if k == generator {
                        let f = fresh[p[slot]];
                        slot += 1;
                        f
                    } else {
                        k
                    }
                };
                let traces: Vec<TraceWord> = t
                    .traces
                    .iter()
                    .map(|tw| TraceWord::new(tw.0.iter().map(|&k| sub(k)).collect()))
                    .collect();
                let word = Word::new(t.word.letters().iter().map(|&k| sub(k)).collect());
                out.add_term(TraceTerm::new(traces, word), c.clone());
            }
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(TraceTerm::degree).max().unwrap_or(0)
    }
}

impl Add for &TracePoly {
    type Output = TracePoly;
    fn add(self, rhs: &TracePoly) -> TracePoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TracePoly {
    type Output = TracePoly;
    fn sub(self, rhs: &TracePoly) -> TracePoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &TracePoly {
    type Output = TracePoly;
    fn mul(self, rhs: &TracePoly) -> TracePoly {
        let mut out = TracePoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut traces = a.traces.clone();
                traces.extend(b.traces.iter().cloned());
                out.add_term(TraceTerm::new(traces, a.word.concat(&b.word)), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (t, c)) in self.terms.iter().enumerate() {
            let mut parts: Vec<String> = Vec::new();
            let abs = c.abs();
            let bare = t.traces.is_empty() && t.word.is_empty();
            if !abs.is_one() || bare {
                parts.push(fmt_rational(&abs));
            }
            parts.extend(t.traces.iter().map(ToString::to_string));
            if !t.word.is_empty() {
                parts.push(t.word.to_string());
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

/// Coefficients `tau_0 = 1, tau_1, ..., tau_n` of the characteristic
/// polynomial of `x_1` as trace polynomials, via Newton's identities
/// `i e_i = sum_{j=1}^{i} (-1)^{j-1} e_{i-j} p_j` and `tau_i = (-1)^i e_i`.
pub fn characteristic_coefficients(n: usize) -> Vec<TracePoly> {
    let power_sum = |j: usize| TracePoly::trace_of(&Word::new(vec![1; j]));
    let mut e: Vec<TracePoly> = vec![TracePoly::one()];
    for i in 1..=n {
        let mut acc = TracePoly::zero();
        for j in 1..=i {
            let term = &e[i - j] * &power_sum(j);
            acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&Rational::new(1.into(), (i as i64).into())));
    }
    e.into_iter()
        .enumerate()
        .map(|(i, ei)| if i % 2 == 0 { ei } else { ei.scale(&rat(-1)) })
        .collect()
}

/// `q_n(x_1) = x_1^n + tau_1 x_1^{n-1} + ... + tau_n` as a trace polynomial.
pub fn cayley_hamilton_q_trace(n: usize) -> TracePoly {
    let tau = characteristic_coefficients(n);
    let mut q = TracePoly::zero();
    for (i, t) in tau.iter().enumerate() {
        q = &q + &(t * &TracePoly::word(Word::new(vec![1; n - i])));
    }
    q
}

/// `q_n` with traces expanded over `M_n`.
pub fn cayley_hamilton_q(n: usize) -> QuasiPoly {
    cayley_hamilton_q_trace(n).expand(n)
}

/// The multilinear Cayley-Hamilton polynomial
/// `Q_n = sum_{sigma in S_{n+1}} sign(sigma) phi_sigma(x_1, ..., x_n)`.
///
/// Cycles of `sigma` avoiding `n+1` contribute trace factors; the cycle
/// `(s_1, ..., s_k, n+1)` contributes the word `x_{s_1} ... x_{s_k}`.
/// The sum is multiplied by `(-1)^n` so that `Q_n(x_1, ..., x_1) = n! q_n`
/// for every `n` (the sign of a full `(n+1)`-cycle is `(-1)^n`).
pub fn cayley_hamilton_big_q_trace(n: usize) -> TracePoly {
    let mut out = TracePoly::zero();
    for p in perm::permutations(n + 1) {
        let mut traces = Vec::new();
        let mut word = Vec::new();
        for cyc in perm::cycles(&p) {
            if cyc.contains(&n) {
                // follow sigma starting from sigma(n+1) until returning to n+1
                let mut x = p[n];
                while x != n {
                    word.push(x as u32 + 1);
                    x = p[x];
                }
            } else {
                traces.push(TraceWord::new(cyc.iter().map(|&i| i as u32 + 1).collect()));
            }
        }
        let sign = if n.is_multiple_of(2) { perm::sign(&p) } else { -perm::sign(&p) };
        out.add_term(TraceTerm::new(traces, Word::new(word)), rat(sign));
    }
    out
}

/// `Q_n` with traces expanded over `M_n`.
pub fn cayley_hamilton_big_q(n: usize) -> QuasiPoly {
    cayley_hamilton_big_q_trace(n).expand(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::ratio;

    fn x(k: u32) -> QuasiPoly {
        QuasiPoly::generator(k)
    }

    fn c(k: u32, i: u32, j: u32) -> CPoly {
        CPoly::var(Var::new(k, i, j))
    }

    #[test]
    fn generic_matrix_examples() {
        let g = generic_matrix(1, 2);
        assert_eq!(g.entry(1, 2), &c(1, 1, 2));
        assert_eq!(g.entry(2, 1), &c(1, 2, 1));
        assert_eq!(g.trace(), &c(1, 1, 1) + &c(1, 2, 2));
        assert_ne!(generic_matrix(1, 2), generic_matrix(2, 2));
        assert_eq!(phi_eval(&x(1), 2).unwrap(), g);
    }

    #[test]
    fn zero_divisor_example() {
        let p1 = &(&QuasiPoly::monomial(Word::letter(1), c(2, 1, 2))
            - &QuasiPoly::monomial(Word::letter(2), c(1, 1, 2)))
            + &QuasiPoly::from_cpoly(&(&c(1, 1, 2) * &c(2, 2, 2)) - &(&c(1, 2, 2) * &c(2, 1, 2)));
        let p2 = &(&QuasiPoly::monomial(Word::letter(1), c(2, 1, 2))
            - &QuasiPoly::monomial(Word::letter(2), c(1, 1, 2)))
            + &QuasiPoly::from_cpoly(&(&c(1, 1, 2) * &c(2, 1, 1)) - &(&c(1, 1, 1) * &c(2, 1, 2)));
        assert!(!is_quasi_identity(&p1, 2).unwrap());
        assert!(!is_quasi_identity(&p2, 2).unwrap());
        let prod = &p1 * &p2;
        assert_eq!(prod.len(), 7);
        assert_eq!(prod.terms().map(|(_, c)| c.len()).sum::<usize>(), 16);
        assert!(is_quasi_identity(&prod, 2).unwrap());
    }

    #[test]
    fn standard_and_capelli() {
        assert_eq!(standard_poly(2), &(&x(1) * &x(2)) - &(&x(2) * &x(1)));
        assert_eq!(standard_poly(4).len(), 24);
        let c3 = &(&(&x(1) * &x(3)) * &x(2)) - &(&(&x(2) * &x(3)) * &x(1));
        assert_eq!(capelli(2), c3);
        assert_eq!(capelli(3).len(), 6);
        assert!(is_quasi_identity(&standard_poly(4), 2).unwrap());
        for n in 1..=3 {
            assert!(phi_eval(&standard_poly(2), n).unwrap().trace().is_zero());
        }
    }

    #[test]
    fn s3_is_not_an_identity_of_m2() {
        let s3 = standard_poly(3);
        assert!(!is_quasi_identity(&s3, 2).unwrap());
        // Matrix-unit witness: S_3(e11, e12, e21) = e11 + e22... has a nonzero entry.
        let point: BTreeMap<u32, QMatrix> = [
            (1, QMatrix::unit(2, 1, 1)),
            (2, QMatrix::unit(2, 1, 2)),
            (3, QMatrix::unit(2, 2, 1)),
        ]
        .into_iter()
        .collect();
        let v = evaluate(&s3, &point).unwrap();
        assert!(!v.is_zero());
    }

    #[test]
    fn centrality() {
        let comm = standard_poly(2);
        let sq = &comm * &comm;
        assert!(is_central(&sq, 2).unwrap());
        assert!(!is_central(&sq, 3).unwrap());
        assert!(!is_central(&x(1), 2).unwrap());
        let (point, value) = find_witness(&sq, 3, true, &SampleConfig::default()).unwrap().unwrap();
        assert_eq!(evaluate(&sq, &point).unwrap(), value);
        assert!(value.as_scalar().is_none());
    }

    #[test]
    fn q1_and_q2_expansions() {
        let q1 = cayley_hamilton_q(1);
        assert_eq!(q1, &x(1) - &QuasiPoly::from_cpoly(c(1, 1, 1)));
        let q2 = cayley_hamilton_q_trace(2);
        assert_eq!(
            q2.to_string(),
            "x1*x1 - tr(x1) x1 + 1/2 tr(x1) tr(x1) - 1/2 tr(x1*x1)"
        );
        // tau_2 equals the determinant for n = 2.
        let tau2 = q2.expand(2).coefficient(&Word::unit());
        let det = &(&c(1, 1, 1) * &c(1, 2, 2)) - &(&c(1, 1, 2) * &c(1, 2, 1));
        assert_eq!(tau2, det);
    }

    #[test]
    fn cayley_hamilton_vanishes() {
        for n in 1..=3 {
            assert!(is_quasi_identity(&cayley_hamilton_q(n), n).unwrap());
            assert!(is_quasi_identity(&cayley_hamilton_big_q(n), n).unwrap());
        }
        assert!(!is_quasi_identity(&cayley_hamilton_big_q_trace(2).expand(3), 3).unwrap());
        assert!(!is_quasi_identity(&cayley_hamilton_big_q_trace(1).expand(2), 2).unwrap());
    }

    #[test]
    fn big_q2_matches_printed_form() {
        let q = cayley_hamilton_big_q_trace(2);
        assert_eq!(q.len(), 6);
        assert_eq!(
            q.to_string(),
            "x1*x2 + x2*x1 - tr(x1) x2 - tr(x2) x1 + tr(x1) tr(x2) - tr(x1*x2)"
        );
    }

    #[test]
    fn big_q_symmetry_and_diagonal() {
        for n in 2..=3u32 {
            let q = cayley_hamilton_big_q_trace(n as usize);
            let swap: BTreeMap<u32, u32> = [(1, 2), (2, 1)].into_iter().collect();
            assert_eq!(q.rename_generators(&swap), q);
            let diag: BTreeMap<u32, u32> = (1..=n).map(|k| (k, 1)).collect();
            let fact = perm::factorial(n as usize) as i64;
            assert_eq!(
                q.rename_generators(&diag),
                cayley_hamilton_q_trace(n as usize).scale(&rat(fact))
            );
        }
    }

    #[test]
    fn polarizing_q_gives_big_q() {
        for n in 2..=3 {
            let fresh: Vec<u32> = (1..=n as u32).map(|k| k + 10).collect();
            let pol = cayley_hamilton_q_trace(n).multilinearize(1, &fresh).unwrap();
            let back: BTreeMap<u32, u32> = fresh.iter().enumerate().map(|(i, &f)| (f, i as u32 + 1)).collect();
            assert_eq!(pol.rename_generators(&back), cayley_hamilton_big_q_trace(n));
        }
        // At the quasi-polynomial level the coefficients depend on x1.
        assert_eq!(
            cayley_hamilton_q(2).multilinearize(1, &[2, 3]),
            Err(Error::CoefficientDependsOnGenerator(1))
        );
    }

    #[test]
    fn randomized_modes() {
        let cfg = SampleConfig::default();
        let v = is_quasi_identity_randomized(&standard_poly(4), 2, &cfg).unwrap();
        assert!(v.holds);
        assert_eq!(v.trials_run, 20);
        assert_eq!(v.failure_bound, num_traits::pow(ratio(4, 19), 20));
        let w = is_quasi_identity_randomized(&standard_poly(3), 2, &cfg).unwrap();
        assert!(!w.holds);
        assert!(w.witness.is_some());
        let sq = &standard_poly(2) * &standard_poly(2);
        assert!(is_central_randomized(&sq, 2, &cfg).unwrap().holds);
        assert!(!is_central_randomized(&sq, 3, &cfg).unwrap().holds);
    }

    #[test]
    fn dimension_errors() {
        let p = QuasiPoly::from_cpoly(c(1, 3, 3));
        assert!(matches!(phi_eval(&p, 2), Err(Error::DimensionMismatch(_))));
        assert!(is_quasi_identity(&QuasiPoly::zero(), 2).unwrap());
    }
}
