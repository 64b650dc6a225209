//! Solvers for spaces of quasi-identities: the multilinear nullspace, division
//! of one-variable quasi-identities by `q_n`, and the Capelli test for local
//! linear dependence.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{QMatrix, SparseEliminator, Subspace};
use crate::freealg::{QuasiPoly, Word};
use crate::genmat::{self, RandomizedVerdict};
use crate::perm;
use crate::ratpoly::{rat, CMonomial, CPoly, Rational, Var};
use crate::sampling::{random_matrix, SampleConfig};

/// Default cap on `unknowns * n^(2d)` for the multilinear solver.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// One unknown of the ansatz: the coefficient of
/// `c[g_1,s_1,t_1] ... c[g_k,s_k,t_k] x_{w_1} ... x_{w_{d-k}}`, where
/// `g_1 < ... < g_k` and `(g, w)` is a permutation of `1..d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnsatzTerm {
    pub coeff_generators: Vec<u32>,
    /// `(s, t)` entry indices, 1-based, one per coefficient generator.
    pub entries: Vec<(u32, u32)>,
    pub word: Word,
}

impl AnsatzTerm {
    pub fn monomial(&self) -> CMonomial {
        CMonomial::from_pairs(
            self.coeff_generators
                .iter()
                .zip(&self.entries)
                .map(|(&g, &(s, t))| (Var::new(g, s, t), 1)),
        )
    }
}

/// The general multilinear quasi-polynomial of degree `d` in `x_1..x_d`.
#[derive(Clone, Debug)]
pub struct MultilinearAnsatz {
    pub n: usize,
    pub d: usize,
    terms: Vec<AnsatzTerm>,
    index: HashMap<AnsatzTerm, usize>,
}

/// Number of ansatz unknowns: `sum_k (d!/k!) n^(2k)`.
pub fn ansatz_size(n: usize, d: usize) -> u128 {
    let n2 = (n * n) as u128;
    (0..=d)
        .map(|k| perm::factorial(d) / perm::factorial(k) * n2.pow(k as u32))
        .sum()
}

fn entry_tuples(n: usize, k: usize) -> Vec<Vec<(u32, u32)>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n * n);
        for prefix in &out {
            for s in 1..=n as u32 {
                for t in 1..=n as u32 {
                    let mut v = prefix.clone();
                    v.push((s, t));
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

impl MultilinearAnsatz {
    pub fn new(n: usize, d: usize) -> Self {
        let mut terms = Vec::new();
        for k in 0..=d {
            let tuples = entry_tuples(n, k);
            for p in perm::permutations(d) {
                if p[..k].windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                let gens: Vec<u32> = p[..k].iter().map(|&i| i as u32 + 1).collect();
                let word = Word::new(p[k..].iter().map(|&i| i as u32 + 1).collect());
                for e in &tuples {
                    terms.push(AnsatzTerm {
                        coeff_generators: gens.clone(),
                        entries: e.clone(),
                        word: word.clone(),
                    });
                }
            }
        }
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        MultilinearAnsatz { n, d, terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[AnsatzTerm] {
        &self.terms
    }

    pub fn to_quasipoly(&self, coords: &[Rational]) -> Result<QuasiPoly> {
        if coords.len() != self.terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.terms.len(),
                coords.len()
            )));
        }
        let mut out = QuasiPoly::zero();
        for (t, c) in self.terms.iter().zip(coords) {
            if !c.is_zero() {
                out.add_term(t.word.clone(), &CPoly::monomial(t.monomial(), c.clone()));
            }
        }
        Ok(out)
    }

    /// Coordinates of a multilinear quasi-polynomial of degree `d` in
    /// `x_1..x_d` with entry indices at most `n`.
    pub fn coordinates_of(&self, p: &QuasiPoly) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.terms.len()];
        for (w, c) in p.terms() {
            for (m, coeff) in c.terms() {
                let mut gens = Vec::new();
                let mut entries = Vec::new();
                for &(var, e) in m.factors() {
                    if e != 1 || gens.last() == Some(&var.k) {
                        return Err(Error::NotMultilinear(vec![var.k]));
                    }
                    gens.push(var.k);
                    entries.push((var.i, var.j));
                }
                let key = AnsatzTerm {
                    coeff_generators: gens,
                    entries,
                    word: w.clone(),
                };
                match self.index.get(&key) {
                    Some(&i) => v[i] += coeff,
                    None => {
                        let mut all: Vec<u32> = key.coeff_generators.clone();
                        all.extend_from_slice(w.letters());
                        return Err(Error::NotMultilinear(all));
                    }
                }
            }
        }
        Ok(v)
    }
}

/// Result of [`multilinear_identity_space`].
#[derive(Clone, Debug)]
pub struct MultilinearSolution {
    pub ansatz: MultilinearAnsatz,
    pub space: Subspace,
    pub equations: usize,
    pub rank: usize,
}

impl MultilinearSolution {
    pub fn dimension(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_polys(&self) -> Vec<QuasiPoly> {
        self.space
            .basis()
            .iter()
            .map(|v| self.ansatz.to_quasipoly(v).expect("basis vector has ansatz length"))
            .collect()
    }

    /// Whether the space is exactly the line through `p`.
    pub fn is_spanned_by(&self, p: &QuasiPoly) -> Result<bool> {
        let v = self.ansatz.coordinates_of(p)?;
        if v.iter().all(Zero::is_zero) {
            return Ok(false);
        }
        let line = Subspace::span(self.ansatz.len(), vec![v]);
        Ok(self.space.dim() == 1 && self.space.contains(&line)?)
    }
}

pub fn multilinear_cost(n: usize, d: usize) -> u128 {
    ansatz_size(n, d).saturating_mul((n as u128).saturating_pow(2 * d as u32))
}

/// Space of all multilinear quasi-identities of `M_n` of degree `d`, over the
/// ansatz coordinates.
pub fn multilinear_identity_space(n: usize, d: usize, budget: u128) -> Result<MultilinearSolution> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be at least 1".into()));
    }
    let cost = multilinear_cost(n, d);
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: format!("multilinear solver at n={n}, d={d}"),
            cost,
            budget,
        });
    }
    let ansatz = MultilinearAnsatz::new(n, d);
    let nn = n * n;
    // Output monomials are multilinear: one entry (s, t) per generator,
    // encoded as a base-n^2 number. Equations are keyed by (a, b, monomial).
    let mut equations: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
    let digit = |g: u32| nn.pow(g - 1);
    for (u, t) in ansatz.terms.iter().enumerate() {
        let base: usize = t
            .coeff_generators
            .iter()
            .zip(&t.entries)
            .map(|(&g, &(s, tt))| ((s as usize - 1) * n + (tt as usize - 1)) * digit(g))
            .sum();
        let w = t.word.letters();
        if w.is_empty() {
            for a in 0..n {
                equations.entry((a, a, base)).or_default().push(u);
            }
            continue;
        }
        // paths a = i_0, i_1, ..., i_m = b
        let mut paths: Vec<(usize, usize, usize)> = (0..n).map(|a| (a, a, base)).collect();
        for &g in w {
            let mut next = Vec::with_capacity(paths.len() * n);
            for &(a, cur, code) in &paths {
                for nxt in 0..n {
                    next.push((a, nxt, code + (cur * n + nxt) * digit(g)));
                }
            }
            paths = next;
        }
        for key in paths {
            equations.entry(key).or_default().push(u);
        }
    }
    let mut keys: Vec<_> = equations.keys().copied().collect();
    keys.sort_unstable();
    let mut elim = SparseEliminator::new(ansatz.len());
    for k in keys {
        elim.push(equations[&k].iter().map(|&u| (u, Rational::one())));
    }
    Ok(MultilinearSolution {
        space: elim.nullspace(),
        equations: elim.equations_seen(),
        rank: elim.rank(),
        ansatz,
    })
}

/// Writes a one-variable quasi-identity as `p = r * q_n` by peeling off the
/// top-degree term.
pub fn one_variable_divide(p: &QuasiPoly, n: usize) -> Result<QuasiPoly> {
    if p.word_generators().iter().any(|&g| g != 1) {
        return Err(Error::NotOneVariable);
    }
    if !genmat::is_quasi_identity(p, n)? {
        return Err(Error::NotAQuasiIdentity(n));
    }
    let q = genmat::cayley_hamilton_q(n);
    let mut rem = p.clone();
    let mut r = QuasiPoly::zero();
    while !rem.is_zero() {
        let m = rem.max_word_len();
        if m < n {
            // a nonzero quasi-identity of degree < n in one variable cannot exist
            return Err(Error::NotAQuasiIdentity(n));
        }
        let lambda = rem.coefficient(&Word::new(vec![1; m]));
        let step = QuasiPoly::monomial(Word::new(vec![1; m - n]), lambda);
        rem -= &(&step * &q);
        r += &step;
    }
    debug_assert_eq!(&(&r * &q), p);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DependenceMode {
    Symbolic,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dependent,
    Independent,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Confidence {
    Exact,
    /// Upper bound on the probability of a wrong `Dependent` verdict.
    Probabilistic { trials: usize, failure_bound: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub enum DependenceWitness {
    /// The Capelli composite vanished: identically (symbolic) or at every
    /// sampled point (randomized).
    CapelliVanishes { composite_terms: usize, degree: usize },
    /// A point at which the values of the `f_i` are linearly independent.
    Point {
        point: BTreeMap<u32, QMatrix>,
        values: Vec<QMatrix>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DependenceReport {
    pub verdict: Verdict,
    pub mode: DependenceMode,
    pub witness: DependenceWitness,
    pub confidence: Confidence,
}

/// `C_{2t-1}(f_1, ..., f_t; y_1, ..., y_{t-1})` with `y_r = x_{offset + r}`.
pub fn capelli_composite(fs: &[QuasiPoly], offset: u32) -> QuasiPoly {
    let t = fs.len();
    let mut out = QuasiPoly::zero();
    for p in perm::permutations(t) {
        let mut term = QuasiPoly::constant(rat(perm::sign(&p)));
        for (pos, &i) in p.iter().enumerate() {
            if pos > 0 {
                term = &term * &QuasiPoly::generator(offset + pos as u32);
            }
            term = &term * &fs[i];
        }
        out += &term;
    }
    out
}

fn values_at(fs: &[QuasiPoly], point: &BTreeMap<u32, QMatrix>, n: usize) -> Result<Vec<QMatrix>> {
    fs.iter()
        .map(|f| {
            if f.generators().is_empty() {
                let c = f.coefficient(&Word::unit()).as_constant().unwrap_or_default();
                Ok(QMatrix::scalar(n, c))
            } else {
                genmat::evaluate(f, point)
            }
        })
        .collect()
}

/// An evaluation point and the values of the `f_i` there.
type PointValues = (BTreeMap<u32, QMatrix>, Vec<QMatrix>);

fn values_rank(values: &[QMatrix]) -> usize {
    QMatrix::from_rows(values.iter().map(|v| v.entries().to_vec()).collect()).rank()
}

fn independence_witness(
    fs: &[QuasiPoly],
    n: usize,
    gens: &[u32],
    cfg: &SampleConfig,
) -> Result<Option<PointValues>> {
    let t = fs.len();
    let units: Vec<QMatrix> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| QMatrix::unit(n, i, j)))
        .collect();
    let tuples = (units.len() as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if tuples <= 4096 {
        for code in 0..tuples as usize {
            let mut c = code;
            let mut point = BTreeMap::new();
            for &g in gens.iter().rev() {
                point.insert(g, units[c % units.len()].clone());
                c /= units.len();
            }
            let values = values_at(fs, &point, n)?;
            if values_rank(&values) == t {
                return Ok(Some((point, values)));
            }
        }
    }
    let mut rng = cfg.rng();
    for _ in 0..cfg.trials.max(1) * 5 {
        let point: BTreeMap<u32, QMatrix> = gens.iter().map(|&g| (g, random_matrix(&mut rng, n, cfg.bound))).collect();
        let values = values_at(fs, &point, n)?;
        if values_rank(&values) == t {
            return Ok(Some((point, values)));
        }
    }
    Ok(None)
}

/// Decides whether `fs` are locally linearly dependent on `M_n`, that is,
/// whether the Capelli composite is a quasi-identity.
pub fn local_lin_dep(
    fs: &[QuasiPoly],
    n: usize,
    mode: DependenceMode,
    cfg: &SampleConfig,
    budget: u128,
) -> Result<DependenceReport> {
    if fs.is_empty() {
        return Err(Error::InvalidArgument("at least one polynomial is required".into()));
    }
    if fs.iter().any(|f| !f.is_scalar()) {
        return Err(Error::NonScalarCoefficients);
    }
    let gens: Vec<u32> = fs
        .iter()
        .flat_map(|f| f.generators())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let offset = gens.last().copied().unwrap_or(0);
    let composite = capelli_composite(fs, offset);
    let degree = composite.max_word_len();
    let point_witness = |point: BTreeMap<u32, QMatrix>| -> Result<DependenceWitness> {
        let restricted: BTreeMap<u32, QMatrix> = point.into_iter().filter(|(g, _)| *g <= offset).collect();
        let values = values_at(fs, &restricted, n)?;
        debug_assert_eq!(values_rank(&values), fs.len());
        Ok(DependenceWitness::Point { point: restricted, values })
    };
    match mode {
        DependenceMode::Symbolic => {
            let cost = (composite.len() as u128).saturating_mul((n as u128).saturating_pow(degree as u32 + 1));
            if cost > budget {
                return Err(Error::BudgetExceeded {
                    what: "symbolic Capelli composite".into(),
                    cost,
                    budget,
                });
            }
            if genmat::is_quasi_identity(&composite, n)? {
                return Ok(DependenceReport {
                    verdict: Verdict::Dependent,
                    mode,
                    witness: DependenceWitness::CapelliVanishes {
                        composite_terms: composite.len(),
                        degree,
                    },
                    confidence: Confidence::Exact,
                });
            }
            let witness = match independence_witness(fs, n, &gens, cfg)? {
                Some((point, values)) => DependenceWitness::Point { point, values },
                None => {
                    // A point where the composite is nonzero always separates the f_i.
                    let (point, _) = genmat::find_witness(&composite, n, false, cfg)?.ok_or_else(|| {
                        Error::InvalidArgument("no independence witness found".into())
                    })?;
                    point_witness(point)?
                }
            };
            Ok(DependenceReport {
                verdict: Verdict::Independent,
                mode,
                witness,
                confidence: Confidence::Exact,
            })
        }
        DependenceMode::Randomized => {
            let v: RandomizedVerdict = genmat::is_quasi_identity_randomized(&composite, n, cfg)?;
            if v.holds {
                Ok(DependenceReport {
                    verdict: Verdict::Dependent,
                    mode,
                    witness: DependenceWitness::CapelliVanishes {
                        composite_terms: composite.len(),
                        degree,
                    },
                    confidence: Confidence::Probabilistic {
                        trials: v.trials_run,
                        failure_bound: v.failure_bound,
                    },
                })
            } else {
                Ok(DependenceReport {
                    verdict: Verdict::Independent,
                    mode,
                    witness: point_witness(v.witness.expect("refuted verdict carries a point"))?,
                    confidence: Confidence::Exact,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmat::{cayley_hamilton_big_q, cayley_hamilton_q, is_quasi_identity};

    fn x(k: u32) -> QuasiPoly {
        QuasiPoly::generator(k)
    }

    #[test]
    fn ansatz_sizes() {
        assert_eq!(MultilinearAnsatz::new(2, 2).len(), 26);
        assert_eq!(ansatz_size(2, 2), 26);
        assert_eq!(ansatz_size(3, 3), 1032);
        assert_eq!(MultilinearAnsatz::new(3, 3).len(), 1032);
    }

    #[test]
    fn coordinates_round_trip() {
        let a = MultilinearAnsatz::new(2, 2);
        let q = cayley_hamilton_big_q(2);
        let v = a.coordinates_of(&q).unwrap();
        assert_eq!(a.to_quasipoly(&v).unwrap(), q);
        assert!(a.coordinates_of(&(&x(1) * &x(1))).is_err());
    }

    #[test]
    fn multilinear_m2_degree_2() {
        let sol = multilinear_identity_space(2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.dimension(), 1);
        assert!(sol.is_spanned_by(&cayley_hamilton_big_q(2)).unwrap());
        for p in sol.basis_polys() {
            assert!(is_quasi_identity(&p, 2).unwrap());
        }
    }

    #[test]
    fn multilinear_m3_degree_3() {
        let sol = multilinear_identity_space(3, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.dimension(), 1);
        assert!(sol.is_spanned_by(&cayley_hamilton_big_q(3)).unwrap());
    }

    #[test]
    fn low_degree_is_empty() {
        assert_eq!(multilinear_identity_space(2, 1, DEFAULT_BUDGET).unwrap().dimension(), 0);
        assert_eq!(multilinear_identity_space(3, 2, DEFAULT_BUDGET).unwrap().dimension(), 0);
    }

    #[test]
    fn budget_rejects_large_cases() {
        assert!(matches!(
            multilinear_identity_space(3, 4, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(multilinear_cost(3, 3) <= DEFAULT_BUDGET);
    }

    #[test]
    fn divide_examples() {
        let q = cayley_hamilton_q(2);
        assert_eq!(one_variable_divide(&q, 2).unwrap(), QuasiPoly::one());
        assert_eq!(one_variable_divide(&(&x(1) * &q), 2).unwrap(), x(1));
        let c = CPoly::var(Var::new(1, 1, 2));
        let p = q.scale(&c);
        assert_eq!(one_variable_divide(&p, 2).unwrap(), QuasiPoly::from_cpoly(c));
        assert_eq!(one_variable_divide(&x(1), 2), Err(Error::NotAQuasiIdentity(2)));
        assert_eq!(one_variable_divide(&x(2), 2), Err(Error::NotOneVariable));
    }

    #[test]
    fn dependence_examples() {
        let cfg = SampleConfig::default();
        let one = QuasiPoly::one();
        let sq = &x(1) * &x(1);
        for mode in [DependenceMode::Symbolic, DependenceMode::Randomized] {
            let r = local_lin_dep(&[one.clone(), x(1), sq.clone()], 2, mode, &cfg, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.verdict, Verdict::Dependent);
            let r = local_lin_dep(&[one.clone(), x(1)], 2, mode, &cfg, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.verdict, Verdict::Independent);
            let DependenceWitness::Point { values, .. } = &r.witness else { panic!() };
            assert_eq!(values_rank(values), 2);
            let r = local_lin_dep(&[x(1), x(2)], 2, mode, &cfg, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.verdict, Verdict::Independent);
        }
        let r = local_lin_dep(&[x(1), x(2)], 2, DependenceMode::Symbolic, &cfg, DEFAULT_BUDGET).unwrap();
        let DependenceWitness::Point { point, .. } = &r.witness else { panic!() };
        assert_eq!(point[&1], QMatrix::unit(2, 1, 1));
        assert_eq!(point[&2], QMatrix::unit(2, 1, 2));
        let bad = QuasiPoly::from_cpoly(CPoly::var(Var::new(1, 1, 1)));
        assert_eq!(
            local_lin_dep(&[bad], 2, DependenceMode::Symbolic, &cfg, DEFAULT_BUDGET),
            Err(Error::NonScalarCoefficients)
        );
    }
}

