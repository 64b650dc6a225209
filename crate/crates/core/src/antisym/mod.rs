//! Antisymmetric quasi-identities: the symbolic algebras `A~_n` and `TA_n`,
//! the map `pi_n` and functional `rho`, the concrete algebra `F_n` with the
//! ideal of `O_n`, and realization of all of these as matrix functions.

pub mod atilde;
pub mod realize;
pub mod wedge;

pub use atilde::{
    dimn_basis, obar, pi_map, pi_map_left, rho, rho_with, trace_on, verify_kerim, verify_kerim_with, ExtAlgebra,
    ExtElement, ExtKind, ExtMonomial, KerimReport, RhoReading, DEFAULT_KERIM_BUDGET,
};
pub use realize::{
    basic_formula_holds, is_antisymmetric, is_equivariant, realize, realize_form, realize_monomial, realize_rank,
    sample_tuple, vanishes_on_samples, Difference, Factor, FactorProduct, FullSumWedge, MultiFn, ShuffleWedge,
};
pub use wedge::{
    corollary2, fn_basis, fn_dim, ideal_component, on_in_fn, t_form, traceless_basis, Corollary2Report, WedgeForm,
    DEFAULT_FN_BUDGET,
};
