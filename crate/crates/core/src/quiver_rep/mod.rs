//! Representations of medial quivers over the rationals.

pub mod endo;
pub mod matrix;
pub mod module;
pub mod potential;
pub mod subreps;

pub use endo::{
    endomorphism_ring, is_indecomposable, simple_quotients, support_connected, EndRing,
    IndecomposabilityReport,
};
pub use matrix::{minus, plus, plus_minus_matrix, Matrix, Rational};
pub use module::{
    check_jacobian, check_short_exact_sequence, state_module, JacobianReport, QuiverRep, Residual,
};
pub use potential::{
    canonical_potential, cyclic_derivative, phantom_potential, Potential, PotentialTerm,
};
pub use subreps::{
    check_jordan_premise, enumerate_subreps, verify_subrep_isomorphism, PrefixFamily,
    SubrepCertificate,
};
