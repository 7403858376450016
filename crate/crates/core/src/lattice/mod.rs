//! Exact integer linear algebra: Smith/Hermite normal forms, kernels and
//! cokernels, finitely generated abelian groups and Pontryagin duality.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel, coinvariants, pontryagin_dual, AbHom, FgAbGroup, PontryaginDual, Presentation, Quotient,
    Subgroup,
};
pub use matrix::{int_vec, IntMatrix};
pub use snf::{
    hermite_basis, in_column_span, integer_kernel, kernel_mod, lattice_basis, rank, reduce_mod_lattice,
    smith_normal_form, solve, Smith,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("bad invariant factors: {0}")]
    BadInvariantFactors(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),
    #[error("group is not torsion for the given modulus: {0}")]
    NotTorsion(String),
    #[error("incompatible action: {0}")]
    IncompatibleAction(String),
}
