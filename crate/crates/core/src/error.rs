use thiserror::Error;

use crate::ratpoly::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("no substitution given for generator x{0}")]
    MissingGenerator(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input is not homogeneous in x{generator}: found degrees {found:?}")]
    NotHomogeneous { generator: u32, found: Vec<usize> },
    #[error("coefficients depend on the polarized generator x{0}")]
    CoefficientDependsOnGenerator(u32),
    #[error("fresh generator list has length {got}, expected {expected}")]
    FreshCountMismatch { expected: usize, got: usize },
    #[error("input is not multilinear in the generators {0:?}")]
    NotMultilinear(Vec<u32>),
    #[error("input depends on generators other than x1")]
    NotOneVariable,
    #[error("input is not a quasi-identity of M_{0}")]
    NotAQuasiIdentity(usize),
    #[error("coefficients must be rational scalars")]
    NonScalarCoefficients,
    #[error("estimated cost {cost} exceeds budget {budget}: {what}")]
    BudgetExceeded {
        what: String,
        cost: u128,
        budget: u128,
    },
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("monomial has degree {got}, expected {expected}")]
    WrongDegree { expected: usize, got: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
