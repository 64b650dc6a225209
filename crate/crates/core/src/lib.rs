//! Exact symbolic computation with polynomial, trace and quasi-identities of
//! the full matrix algebra `M_n`.
//!
//! The crate is layered bottom-up:
//!
//! * [`ratpoly`]: rationals and sparse commutative polynomials in the
//!   generic-matrix entries `c[k,i,j]`.
//! * [`freealg`]: quasi-polynomials, i.e. noncommutative words with
//!   commutative polynomial coefficients.
//! * [`genmat`]: generic matrices, the evaluation map into `M_n(C)`, trace
//!   polynomials and the classical identities (standard, Capelli,
//!   Cayley-Hamilton).
//! * [`exactla`]: exact rational linear algebra.
//! * [`idsolve`]: solvers for spaces of identities and local linear
//!   dependence.
//! * [`antisym`]: the graded exterior computations for antisymmetric
//!   quasi-identities.

pub mod antisym;
pub mod error;
pub mod exactla;
pub mod freealg;
pub mod genmat;
pub mod idsolve;
pub mod perm;
pub mod ratpoly;
pub mod sampling;

pub use error::{Error, Result};
pub use ratpoly::{CMonomial, CPoly, Rational, Var};
