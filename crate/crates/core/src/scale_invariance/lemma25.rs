//! Power sums `B_m = I + A + … + A^{m-1}` and the exponent making them
//! vanish modulo `r`.
//!
//! For unimodular `A`, the reduction of `A` mod `r` is a unit of the finite
//! ring `Mat_n(Z/r)` and so has some order `l`. Then
//! `B_{rl} ≡ r (I + A + … + A^{l-1}) ≡ 0 (mod r)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScaleError;
use crate::linalg::IntMatrix;

/// Largest exponent `order_mod` and `lemma25_m` will produce. `B_m` has
/// entries of size roughly `ρ(A)^m`, so larger exponents are not usable.
pub const MAX_EXPONENT: u64 = 1 << 16;

/// `B_m = Σ_{k<m} A^k`, by doubling: `B_{2k} = B_k + A^k B_k`,
/// `B_{k+1} = I + A B_k`.
pub fn b_matrix(a: &IntMatrix, m: u64) -> IntMatrix {
    assert!(m >= 1, "b_matrix needs m >= 1");
    assert!(a.is_square(), "b_matrix needs a square matrix");
    let n = a.rows();
    let id = IntMatrix::identity(n);
    let mut b = IntMatrix::zeros(n, n);
    let mut p = IntMatrix::identity(n);
    for i in (0..64 - m.leading_zeros()).rev() {
        b = &b + &(&p * &b);
        p = &p * &p;
        if (m >> i) & 1 == 1 {
            b = &id + &(a * &b);
            p = &p * a;
        }
    }
    // telescoping: (A - I) B_m = A^m - I
    assert_eq!(&(a - &id) * &b, &p - &id, "internal error: power sum telescoping identity failed");
    b
}

/// Least `l ≥ 1` with `A^l ≡ I (mod |r|)`; `ExponentTooLarge` past
/// [`MAX_EXPONENT`].
pub fn order_mod(a: &IntMatrix, r: &BigInt) -> Result<u64, ScaleError> {
    let modulus = r.abs();
    if modulus.is_zero() {
        return Err(ScaleError::ZeroModulus);
    }
    if modulus.is_one() {
        return Ok(1);
    }
    let det = a.determinant()?;
    if !det.gcd(&modulus).is_one() {
        return Err(ScaleError::NotInvertibleModR { r: r.clone() });
    }
    let n = a.rows();
    let cap = num_traits::pow(modulus.clone(), n * n);
    let id = IntMatrix::identity(n).reduce_mod(&modulus);
    let base = a.reduce_mod(&modulus);
    let mut p = base.clone();
    let mut l: u64 = 1;
    while p != id {
        p = (&p * &base).reduce_mod(&modulus);
        l += 1;
        assert!(BigInt::from(l) <= cap, "internal error: order of A mod {modulus} exceeds {cap}");
        if l > MAX_EXPONENT {
            return Err(ScaleError::ExponentTooLarge(BigInt::from(l)));
        }
    }
    Ok(l)
}

/// `m = |r| · order_mod(A, r)` (and `1` for `|r| = 1`), so that every entry of
/// `B_m` is divisible by `r`. The divisibility is re-checked exactly.
pub fn lemma25_m(a: &IntMatrix, r: &BigInt) -> Result<u64, ScaleError> {
    if r.is_zero() {
        return Err(ScaleError::ZeroModulus);
    }
    let det = a.determinant()?;
    if !det.abs().is_one() {
        return Err(ScaleError::NonUnimodular { det });
    }
    let modulus = r.abs();
    if modulus.is_one() {
        return Ok(1);
    }
    let l = order_mod(a, r)?;
    let m = modulus
        .to_u64()
        .and_then(|r| r.checked_mul(l))
        .filter(|&m| m <= MAX_EXPONENT)
        .ok_or_else(|| ScaleError::ExponentTooLarge(&modulus * l))?;
    assert!(b_matrix(a, m).all_divisible_by(&modulus), "internal error: B_{m} is not divisible by {r}");
    Ok(m)
}

/// Least `m ≤ limit` with `B_m ≡ 0 (mod r)`, by scanning `B_{k+1} = I + A B_k`
/// modulo `r`.
pub fn minimal_vanishing_m(a: &IntMatrix, r: &BigInt, limit: u64) -> Option<u64> {
    let modulus = r.abs();
    if modulus.is_zero() {
        return None;
    }
    let n = a.rows();
    let id = IntMatrix::identity(n);
    let base = a.reduce_mod(&modulus);
    let mut b = id.reduce_mod(&modulus);
    for m in 1..=limit {
        if b.is_zero() {
            return Some(m);
        }
        b = (&id + &(&base * &b)).reduce_mod(&modulus);
    }
    None
}
