//! Failure of strong scale invariance for groups that are not virtually
//! nilpotent.
//!
//! An injective endomorphism `f` of `Z^n ⋊_A Z` with `A` not virtually
//! nilpotent must have shift `±1`; then `f²` has a fixed point `x ≠ e` of
//! infinite order, so `x ∈ f^k(G)` for every `k` and `⋂ f^k(G)` is not finite.

mod certificate;
mod fixed_point;
mod intersection;
mod lemma25;

use num_bigint::BigInt;
use thiserror::Error;

use crate::endomorphism::EndoError;
use crate::group::{GroupElement, GroupError};
use crate::linalg::LinalgError;
use crate::nilpotency::NilpotencyError;

pub use certificate::{
    certificate_check, refute_strong_scale_invariance, Certificate, CheckReport, NotApplicable, Refutation,
};
pub use fixed_point::{fixed_point_of_square, FixedPointBranch, FixedPointResult};
pub use intersection::bounded_intersection;
pub use lemma25::{b_matrix, lemma25_m, minimal_vanishing_m, order_mod, MAX_EXPONENT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Nilpotency(#[from] NilpotencyError),
    #[error("modulus must be non-zero")]
    ZeroModulus,
    #[error("A is not invertible modulo {r}")]
    NotInvertibleModR { r: BigInt },
    #[error("det must be ±1 (got {det})")]
    NonUnimodular { det: BigInt },
    #[error("exponent {0} is too large")]
    ExponentTooLarge(BigInt),
    #[error("endomorphism is not injective")]
    NotInjective,
    #[error("shift {0} is not ±1")]
    ShiftNotUnit(BigInt),
    #[error("internal error: {0} is not a non-trivial fixed point of f²")]
    FixedPointEquationFailed(GroupElement),
    /// The input contradicts the theorem; reported, never silently ignored.
    #[error("theorem violation suspected: {0}")]
    TheoremViolationSuspected(String),
}
