//! Deciding virtual nilpotency of `Z^n ⋊_A Z`.
//!
//! `G` is virtually nilpotent exactly when every eigenvalue of `A` is a root of
//! unity, equivalently when `A^z - I` is nilpotent for some `z ≠ 0`. Both
//! criteria are evaluated exactly and must agree:
//!
//! * power criterion: with `Z = Z(n)` the lcm of all `k` with `φ(k) ≤ n`, any
//!   root-of-unity eigenvalue has order dividing `Z`, so it suffices to test
//!   `(A^Z - I)^n = 0`;
//! * cyclotomic criterion: the characteristic polynomial factors completely into
//!   cyclotomic polynomials `Φ_k` with `φ(k) ≤ n`.
//!
//! The lower central series of the standard finite-index subgroup
//! `H = ⟨(e_i,0), (0,z)⟩` is tracked through translation lattices
//! `Γ_1 ⊇ Γ_2 ⊇ …`, where `Γ_1` is the `A^{±z}`-closure of `(A^z - I) Z^n` and
//! `Γ_k` the closure of `(A^z - I) Γ_{k-1}`. Since `A^{rz} - I` factors through
//! `A^z - I` in `Z[A]`, these lattices vanish exactly when the commutator
//! generators of `γ_k(H)` do.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupDescriptor, GroupError};
use crate::linalg::{cyclotomic, totient, IntMatrix, Lattice, LinalgError, Poly};
use crate::serial::{decimal, decimal_opt, decimal_vec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NilpotencyError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("exponent must be non-zero")]
    ZeroExponent,
    #[error("internal error: power criterion says {power}, cyclotomic criterion says {cyclotomic}")]
    InternalDisagreement { power: bool, cyclotomic: bool },
}

/// Outcome of the two independent virtual-nilpotency criteria.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodAgreement {
    pub power_criterion: bool,
    pub cyclotomic_criterion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotencyVerdict {
    pub virtually_nilpotent: bool,
    /// Least `z > 0` with `A^z - I` nilpotent.
    #[serde(with = "decimal_opt")]
    pub witness_z: Option<BigInt>,
    /// Least `k` with `(A^z - I)^k = 0` for the witness `z`.
    #[serde(deserialize_with = "crate::serial::required")]
    pub nilpotency_degree: Option<usize>,
    /// `Z(n)`, the exponent used by the power criterion.
    #[serde(with = "decimal")]
    pub order_bound: BigInt,
    /// `det(xI - A)`, constant term first.
    #[serde(with = "decimal_vec")]
    pub char_poly: Vec<BigInt>,
    /// Indices `k` of the cyclotomic factors `Φ_k`, ascending with multiplicity,
    /// when the characteristic polynomial splits into them.
    #[serde(deserialize_with = "crate::serial::required")]
    pub cyclotomic_factors: Option<Vec<usize>>,
    pub method_agreement: MethodAgreement,
}

/// `Z(n) = lcm{k ≥ 1 : φ(k) ≤ n}`.
pub fn cyclotomic_order_bound(n: usize) -> BigInt {
    candidate_orders(n).into_iter().fold(BigInt::from(1), |acc, k| num_integer::lcm(acc, BigInt::from(k)))
}

/// All `k` with `φ(k) ≤ n`, ascending. `φ(k) ≥ sqrt(k/2)` bounds the search.
fn candidate_orders(n: usize) -> Vec<usize> {
    let limit = 2 * n * n + 2;
    (1..=limit).filter(|&k| totient(k as u64) <= n as u64).collect()
}

fn unimodular_check(a: &IntMatrix) -> Result<(), NilpotencyError> {
    let det = a.determinant()?;
    if !det.abs().is_one() {
        return Err(GroupError::NonUnimodular { det }.into());
    }
    Ok(())
}

fn nonneg_power(a: &IntMatrix, z: &BigInt) -> Result<IntMatrix, NilpotencyError> {
    let e = z.to_u64().ok_or_else(|| GroupError::ExponentTooLarge(z.clone()))?;
    Ok(a.pow_unsigned(e))
}

/// `A^z - I`
fn shifted_power(a: &IntMatrix, z: &BigInt) -> Result<IntMatrix, NilpotencyError> {
    let p = nonneg_power(a, z)?;
    Ok(&p - &IntMatrix::identity(a.rows()))
}

/// Least `k ≤ n` with `m^k = 0`, if any.
fn nilpotency_degree(m: &IntMatrix) -> Option<usize> {
    let n = m.rows();
    let mut p = IntMatrix::identity(n);
    for k in 1..=n {
        p = &p * m;
        if p.is_zero() {
            return Some(k);
        }
    }
    None
}

/// Splits a monic polynomial into cyclotomic factors `Φ_k` with `φ(k) ≤ n`,
/// returning the indices, or `None` if some factor is not cyclotomic.
pub fn cyclotomic_factorization(poly: &Poly, n: usize) -> Option<Vec<usize>> {
    let candidates: Vec<(usize, Poly)> = candidate_orders(n).into_iter().map(|k| (k, cyclotomic(k))).collect();
    let mut rest = poly.clone();
    let mut factors = Vec::new();
    'outer: while rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap_or(0);
        for (k, phi) in &candidates {
            if phi.degree().unwrap_or(0) > deg {
                continue;
            }
            let (q, r) = rest.div_rem_monic(phi);
            if r.coeffs().is_empty() {
                factors.push(*k);
                rest = q;
                continue 'outer;
            }
        }
        return None;
    }
    factors.sort_unstable();
    Some(factors)
}

/// Decides whether `Z^n ⋊_A Z` is virtually nilpotent.
pub fn is_virtually_nilpotent(a: &IntMatrix) -> Result<NilpotencyVerdict, NilpotencyError> {
    unimodular_check(a)?;
    let n = a.rows();
    let bound = cyclotomic_order_bound(n);
    let power_vn = nilpotency_degree(&shifted_power(a, &bound)?).is_some();

    let char_poly = a.char_poly()?;
    let cyclotomic_factors = cyclotomic_factorization(&Poly::new(char_poly.clone()), n);
    let cyclo_vn = cyclotomic_factors.is_some();
    if power_vn != cyclo_vn {
        return Err(NilpotencyError::InternalDisagreement { power: power_vn, cyclotomic: cyclo_vn });
    }

    let (witness_z, degree) = if power_vn {
        let z_max = bound.to_u64().expect("order bound fits in u64 at supported sizes");
        let mut found = None;
        for z in (1..=z_max).filter(|z| z_max.is_multiple_of(*z)) {
            if let Some(k) = nilpotency_degree(&shifted_power(a, &BigInt::from(z))?) {
                found = Some((BigInt::from(z), k));
                break;
            }
        }
        let (z, k) = found.expect("the order bound itself is a witness");
        (Some(z), Some(k))
    } else {
        (None, None)
    };

    Ok(NilpotencyVerdict {
        virtually_nilpotent: power_vn,
        witness_z,
        nilpotency_degree: degree,
        order_bound: bound,
        char_poly,
        cyclotomic_factors,
        method_agreement: MethodAgreement { power_criterion: power_vn, cyclotomic_criterion: cyclo_vn },
    })
}

/// Rational dimension of `ker(A^s - I)`.
///
/// For a non-virtually-nilpotent `A` this is at most `n - 2`; a larger value
/// aborts with an internal error.
pub fn kernel_dim(a: &IntMatrix, s: i64) -> Result<usize, NilpotencyError> {
    if s == 0 {
        return Err(NilpotencyError::ZeroExponent);
    }
    unimodular_check(a)?;
    let n = a.rows();
    let m = &a.pow(s)? - &IntMatrix::identity(n);
    let dim = n - m.rank();
    if dim + 2 > n && !is_virtually_nilpotent(a)?.virtually_nilpotent {
        panic!("internal error: ker(A^{s} - I) has dimension {dim} > n - 2 for a non-virtually-nilpotent A");
    }
    Ok(dim)
}

fn invariant_closure(start: Lattice, fwd: &IntMatrix, back: &IntMatrix) -> Result<Lattice, LinalgError> {
    let mut l = start;
    loop {
        let next = l.sum(&l.image(fwd)?)?.sum(&l.image(back)?)?;
        if next == l {
            return Ok(l);
        }
        l = next;
    }
}

/// Translation lattices `Γ_1, …, Γ_{k_max}` of the lower central series of the
/// standard subgroup `⟨(e_i,0), (0,z)⟩`.
pub fn lcs_lattices(g: &GroupDescriptor, z: i64, k_max: usize) -> Result<Vec<Lattice>, NilpotencyError> {
    if z == 0 {
        return Err(NilpotencyError::ZeroExponent);
    }
    let n = g.n();
    let zb = BigInt::from(z);
    let fwd = g.a_pow(&zb)?.into_owned();
    let back = g.a_pow(&-zb)?.into_owned();
    let m = &fwd - &IntMatrix::identity(n);
    let mut out = Vec::with_capacity(k_max);
    let mut current = Lattice::full(n);
    for _ in 0..k_max {
        current = invariant_closure(current.image(&m)?, &fwd, &back)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Nilpotency class of the standard subgroup, searched up to depth `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotencyClass {
    /// Least `k` with `Γ_k = 0`.
    Nilpotent(usize),
    /// `Γ_k ≠ 0` for every `k ≤ depth`; `stabilized` records `Γ_depth = Γ_{depth-1}`.
    NotNilpotentAtDepth { depth: usize, stabilized: bool },
}

pub fn nilpotency_class_of_standard_subgroup(g: &GroupDescriptor, z: i64) -> Result<NilpotencyClass, NilpotencyError> {
    let depth = g.n() + 1;
    let chain = lcs_lattices(g, z, depth)?;
    if let Some(k) = chain.iter().position(Lattice::is_zero) {
        return Ok(NilpotencyClass::Nilpotent(k + 1));
    }
    let stabilized = chain.len() >= 2 && chain[chain.len() - 1] == chain[chain.len() - 2];
    Ok(NilpotencyClass::NotNilpotentAtDepth { depth, stabilized })
}
