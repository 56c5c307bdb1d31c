//! Brute-force view of `⋂_{k ≤ K} f^k(G)` inside a box.

use rayon::prelude::*;

use super::ScaleError;
use crate::endomorphism::Endomorphism;
use crate::group::GroupElement;

/// All `(v, z)` with `‖v‖∞ ≤ radius`, `|z| ≤ radius` lying in `f^k(G)` for every
/// `k ≤ depth`, in ascending order.
///
/// Membership in `f^k(G)` is decided by taking `k` successive preimages, so
/// `f` must be injective and structured.
pub fn bounded_intersection(f: &Endomorphism, depth: usize, radius: u32) -> Result<Vec<GroupElement>, ScaleError> {
    let s = f.structured()?;
    if !s.is_injective() {
        return Err(ScaleError::NotInjective);
    }
    let g = f.descriptor();
    let n = g.n();
    let r = i64::from(radius);
    let side = 2 * u64::from(radius) + 1;
    let total = side
        .checked_pow(n as u32 + 1)
        .ok_or_else(|| ScaleError::ExponentTooLarge(num_bigint::BigInt::from(side).pow(n as u32 + 1)))?;

    let survives = |x: &GroupElement| -> Result<bool, ScaleError> {
        let mut cur = x.clone();
        for _ in 0..depth {
            match s.preimage(g, &cur)? {
                Some(p) => cur = p,
                None => return Ok(false),
            }
        }
        Ok(true)
    };

    let mut out = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut rest = idx;
            let coords: Vec<i64> = (0..=n)
                .map(|_| {
                    let c = (rest % side) as i64 - r;
                    rest /= side;
                    c
                })
                .collect();
            let x = GroupElement::from_i64s(&coords[..n], coords[n]);
            match survives(&x) {
                Ok(true) => Some(Ok(x)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}
