//! Non-trivial fixed points of `f²` for injective structured endomorphisms
//! with shift `±1`.
//!
//! `f²` has shift `+1`, matrix `F₂ = F²` and translation `u₂` (the translation
//! of `f(t)`), so `f²(v, z) = (F₂ v + B_z u₂, z)`. Either `F₂ - I` is singular and
//! any `v` in its kernel gives the fixed point `(v, 0)`, or
//! `v = (I - F₂)^{-1} B_z u₂` is integral once `B_z ≡ 0 mod det(I - F₂)`, and
//! `(v, z)` is fixed.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lemma25::{b_matrix, lemma25_m};
use super::ScaleError;
use crate::endomorphism::Endomorphism;
use crate::group::GroupElement;
use crate::linalg::{exact_div, integer_kernel_basis, IntMatrix, IntVector};
use crate::serial::decimal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointBranch {
    /// `F₂ - I` singular; the point is `(v, 0)` with `F₂ v = v`.
    Singular,
    /// `u₂ = 0`, so `(0, 1)` is fixed.
    ZeroTranslation,
    /// `v = adj(I - F₂) B_z u₂ / det(I - F₂)` with `z` from the power-sum lemma.
    Lemma25,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointResult {
    pub point: GroupElement,
    pub square_used: bool,
    pub branch: FixedPointBranch,
    #[serde(with = "decimal")]
    pub z_used: BigInt,
    /// `det(I - F₂)`; zero exactly on the singular branch.
    #[serde(with = "decimal")]
    pub r_used: BigInt,
}

/// Structured data of `f²`: `(F₂, u₂)` with shift `+1`.
pub(crate) fn square_structure(f: &Endomorphism) -> Result<(Endomorphism, IntMatrix, IntVector), ScaleError> {
    let s = f.structured()?;
    if !s.is_injective() {
        return Err(ScaleError::NotInjective);
    }
    if !(s.s.is_one() || (-&s.s).is_one()) {
        return Err(ScaleError::ShiftNotUnit(s.s));
    }
    let f2 = f.compose(f)?;
    let s2 = f2.structured()?;
    debug_assert!(s2.s.is_one());
    Ok((f2, s2.f, s2.u))
}

pub fn fixed_point_of_square(f: &Endomorphism) -> Result<FixedPointResult, ScaleError> {
    let (f2, f2_mat, u2) = square_structure(f)?;
    let n = f2_mat.rows();
    let id = IntMatrix::identity(n);
    let i_minus_f2 = &id - &f2_mat;
    let r = i_minus_f2.determinant()?;

    let (point, branch, z_used) = if r.is_zero() {
        let v = integer_kernel_basis(&i_minus_f2).into_iter().next().expect("singular matrix has a kernel");
        (GroupElement::translation(v), FixedPointBranch::Singular, BigInt::zero())
    } else if u2.is_zero() {
        (GroupElement::shift(n, BigInt::one()), FixedPointBranch::ZeroTranslation, BigInt::one())
    } else {
        let z = lemma25_m(f.descriptor().matrix(), &r)?;
        let b = b_matrix(f.descriptor().matrix(), z);
        let num = i_minus_f2.adjugate()?.mul_vec(&b.mul_vec(&u2));
        let v = IntVector::new(num.iter().map(|x| exact_div(x, &r)).collect());
        (GroupElement::new(v, BigInt::from(z)), FixedPointBranch::Lemma25, BigInt::from(z))
    };

    if point.is_identity() || f2.apply(&point)? != point {
        return Err(ScaleError::FixedPointEquationFailed(point));
    }
    Ok(FixedPointResult { point, square_used: true, branch, z_used, r_used: r })
}
