//! Exact integer linear algebra: matrices, normal forms, kernels and lattices.

mod lattice;
mod matrix;
mod poly;
mod snf;

use num_bigint::BigInt;
use thiserror::Error;

pub use lattice::{Lattice, LatticeIndex};
pub(crate) use matrix::exact_div;
pub use matrix::{IntMatrix, IntVector};
pub use poly::{cyclotomic, totient, Poly};
pub use snf::{integer_kernel_basis, smith_normal_form, solve_integer, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (det = {det})")]
    NonUnimodular { det: BigInt },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has no entries")]
    Empty,
    #[error("matrix rows have differing lengths")]
    Ragged,
    #[error("lattice has infinite index")]
    InfiniteIndex,
}
