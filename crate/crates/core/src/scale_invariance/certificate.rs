//! Self-contained, independently checkable refutations of strong scale
//! invariance.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fixed_point::{fixed_point_of_square, square_structure, FixedPointBranch, FixedPointResult};
use super::lemma25::lemma25_m;
use super::ScaleError;
use crate::endomorphism::{EndoForm, EndoGenerators, Endomorphism, Injectivity, DEFAULT_KERNEL_SEARCH_BOUND};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::IntMatrix;
use crate::nilpotency::{is_virtually_nilpotent, NilpotencyVerdict};
use crate::serial::SCHEMA_VERSION;

/// A non-trivial `x` with `f²(x) = x` together with an explicit chain
/// `f(p_k) = p_{k-1}`, `p_0 = x`, witnessing `x ∈ f^k(G)` for `k ≤ depth_checked`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub matrix: IntMatrix,
    pub endo: EndoGenerators,
    pub verdict: NilpotencyVerdict,
    pub fixed_point: FixedPointResult,
    pub depth_checked: usize,
    /// `p_1, …, p_depth`.
    pub preimages: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotApplicable {
    VirtuallyNilpotent(NilpotencyVerdict),
    NotInjective { kernel_witness: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Certificate(Box<Certificate>),
    NotApplicable(NotApplicable),
}

/// Builds a certificate that `⋂_k f^k(G)` contains an element of infinite
/// order, following the chain of preimages `depth` steps down.
pub fn refute_strong_scale_invariance(
    g: &GroupDescriptor,
    f: &Endomorphism,
    depth: usize,
) -> Result<Refutation, ScaleError> {
    let verdict = is_virtually_nilpotent(g.matrix())?;
    if verdict.virtually_nilpotent {
        return Ok(Refutation::NotApplicable(NotApplicable::VirtuallyNilpotent(verdict)));
    }
    if f.descriptor() != g {
        return Err(ScaleError::Endo(crate::endomorphism::EndoError::DescriptorMismatch));
    }
    let s = match f.form()? {
        EndoForm::Structured(s) => s,
        EndoForm::General(_) => {
            return match f.injectivity(DEFAULT_KERNEL_SEARCH_BOUND)? {
                Injectivity::NotInjective { kernel_witness } => {
                    Ok(Refutation::NotApplicable(NotApplicable::NotInjective { kernel_witness }))
                }
                _ => Err(ScaleError::TheoremViolationSuspected(format!(
                    "no kernel element with entries up to {DEFAULT_KERNEL_SEARCH_BOUND} for an endomorphism with shifted x_i"
                ))),
            };
        }
    };
    if let Injectivity::NotInjective { kernel_witness } = s.injectivity() {
        return Ok(Refutation::NotApplicable(NotApplicable::NotInjective { kernel_witness }));
    }
    if !s.s.abs().is_one() {
        return Err(ScaleError::TheoremViolationSuspected(format!("injective endomorphism with shift {}", s.s)));
    }

    let fixed = fixed_point_of_square(f)?;
    let mut preimages = Vec::with_capacity(depth);
    let mut current = fixed.point.clone();
    for k in 1..=depth {
        current = s.preimage(g, &current)?.ok_or_else(|| {
            ScaleError::TheoremViolationSuspected(format!("fixed point of f² has no preimage at depth {k}"))
        })?;
        preimages.push(current.clone());
    }
    Ok(Refutation::Certificate(Box::new(Certificate {
        schema_version: SCHEMA_VERSION,
        matrix: g.matrix().clone(),
        endo: f.generators().clone(),
        verdict,
        fixed_point: fixed,
        depth_checked: depth,
        preimages,
    })))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub diagnoses: Vec<String>,
}

/// Re-derives every claim in `c` from its matrix and generator images alone.
pub fn certificate_check(c: &Certificate) -> CheckReport {
    let mut diagnoses = Vec::new();
    check_into(c, &mut diagnoses);
    CheckReport { ok: diagnoses.is_empty(), diagnoses }
}

fn check_into(c: &Certificate, out: &mut Vec<String>) {
    if c.schema_version != SCHEMA_VERSION {
        out.push(format!("unsupported schema_version {}", c.schema_version));
    }
    let g = match GroupDescriptor::new(c.matrix.clone()) {
        Ok(g) => g,
        Err(e) => {
            out.push(format!("matrix: {e}"));
            return;
        }
    };
    match is_virtually_nilpotent(&c.matrix) {
        Ok(v) => {
            if v.virtually_nilpotent {
                out.push("group is virtually nilpotent".into());
            }
            if v != c.verdict {
                out.push("verdict does not match the matrix".into());
            }
        }
        Err(e) => out.push(format!("verdict: {e}")),
    }
    let f = match Endomorphism::validate(&g, c.endo.clone()) {
        Ok(f) => f,
        Err(e) => {
            out.push(format!("endo: {e}"));
            return;
        }
    };
    let (f2, f2_mat, u2) = match square_structure(&f) {
        Ok(x) => x,
        Err(e) => {
            out.push(format!("endo: {e}"));
            return;
        }
    };

    let fp = &c.fixed_point;
    if !fp.square_used {
        out.push("square_used must be true".into());
    }
    if fp.point.dim() != g.n() {
        out.push("fixed point has the wrong dimension".into());
        return;
    }
    if fp.point.is_identity() {
        out.push("trivial fixed point".into());
    }
    match f2.apply(&fp.point) {
        Ok(y) if y == fp.point => {}
        _ => out.push("fixed point equation f²(x) = x fails".into()),
    }

    let r = (&IntMatrix::identity(g.n()) - &f2_mat).determinant().expect("square matrix");
    if fp.r_used != r {
        out.push(format!("r_used is {} but det(I - F²) = {r}", fp.r_used));
    }
    if fp.z_used != fp.point.z {
        out.push("z_used differs from the fixed point's shift".into());
    }
    let branch_ok = match fp.branch {
        FixedPointBranch::Singular => r.is_zero(),
        FixedPointBranch::ZeroTranslation => {
            !r.is_zero() && u2.is_zero() && fp.point == GroupElement::shift(g.n(), BigInt::one())
        }
        FixedPointBranch::Lemma25 => {
            !r.is_zero()
                && !u2.is_zero()
                && lemma25_m(&c.matrix, &r).map(BigInt::from).ok().as_ref() == Some(&fp.z_used)
        }
    };
    if !branch_ok {
        out.push("branch is inconsistent with the endomorphism".into());
    }

    if c.depth_checked != c.preimages.len() {
        out.push(format!("depth_checked {} but {} preimages", c.depth_checked, c.preimages.len()));
    }
    if c.preimages.is_empty() {
        out.push("no preimages".into());
    }
    let mut prev = &fp.point;
    for (k, p) in c.preimages.iter().enumerate() {
        match f.apply(p) {
            Ok(y) if &y == prev => {}
            _ => out.push(format!("link {} broken", k + 1)),
        }
        prev = p;
    }
}
