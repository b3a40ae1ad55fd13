//! Exact-arithmetic cohomology of generalized flag varieties.
//!
//! The crate builds root systems of the simple types, enumerates Weyl groups
//! and their parabolic quotients, computes reflection-invariant polynomial
//! subspaces over exact rationals, and assembles graded quotient rings whose
//! dimensions are cross-checked against Schubert-cell counts. A second
//! family of routines reproduces the characteristic-class computations for
//! the flag variety of lines and planes fibered over projective space.
//!
//! No floating point is used anywhere: scalars are arbitrary-precision
//! rationals and every answer is exact.

pub mod borel;
pub mod cache;
mod engine;
pub mod error;
pub mod grassmann;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod polyalg;
pub mod rational;
pub mod rootsys;
pub mod weyl;

pub use borel::{
    alpha_square_reduction, betti_numbers, complex_dimension, cross_check_betti,
    degree2_generation_check, invariant_quadric, FlagCohomology, GenerationReport,
    ReductionCertificate,
};
pub use error::{Error, Result};
pub use invariants::{ideal_graded_dimension, invariant_subspace, GradedBasis};
pub use polyalg::{monomial_basis, poly_weyl_action, span_dimension, Polynomial};
pub use rootsys::{build_root_system, CartanType, Family, ParabolicSubset, RootSystem};
pub use weyl::{coset_length_counts, enumerate_weyl, length, BettiTable, WeylElement};
