//! Seeded random sampling of integer matrices for evaluation-based checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::QMatrix;
use crate::ratpoly::{rat, Rational};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_BOUND: i64 = 9;

/// Parameters for randomized checks: entries are drawn uniformly from
/// `[-bound, bound]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub trials: usize,
    pub bound: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
        }
    }
}

impl SampleConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Number of values each entry can take.
    pub fn support(&self) -> u64 {
        (2 * self.bound + 1) as u64
    }
}

pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, bound: i64) -> QMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_rational(rng, bound)).collect())
        .collect();
    QMatrix::from_rows(rows)
}

/// Random integer matrix with trace zero; the last diagonal entry absorbs
/// the trace of the others.
pub fn random_traceless(rng: &mut impl Rng, n: usize, bound: i64) -> QMatrix {
    let mut m = random_matrix(rng, n, bound);
    let t = m.trace() - m.get(n - 1, n - 1).clone();
    m.set(n - 1, n - 1, -t);
    m
}

pub fn random_tuple(rng: &mut impl Rng, n: usize, len: usize, bound: i64) -> Vec<QMatrix> {
    (0..len).map(|_| random_matrix(rng, n, bound)).collect()
}

pub fn random_traceless_tuple(rng: &mut impl Rng, n: usize, len: usize, bound: i64) -> Vec<QMatrix> {
    (0..len).map(|_| random_traceless(rng, n, bound)).collect()
}

/// Random invertible integer matrix (rejection sampled).
pub fn random_invertible(rng: &mut impl Rng, n: usize, bound: i64) -> QMatrix {
    loop {
        let m = random_matrix(rng, n, bound);
        if m.rank() == n {
            return m;
        }
    }
}

/// Exact inverse by Gauss-Jordan on `[M | I]`.
pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.rows();
    let mut aug = QMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, rat(1));
    }
    let red = aug.rref();
    if red.pivots.iter().take(n).cloned().collect::<Vec<_>>() != (0..n).collect::<Vec<_>>() {
        return None;
    }
    let mut inv = QMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, red.matrix.get(r, n + c).clone());
        }
    }
    Some(inv)
}
