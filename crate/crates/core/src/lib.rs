//! Exact computations in semi-direct products `G = Z^n ⋊_A Z`.
//!
//! The crate decides virtual nilpotency, analyses injective endomorphisms
//! given by generator images, constructs fixed points of `f²` and emits
//! re-checkable certificates that such a fixed point lies in every iterated
//! image `f^k(G)`.

pub mod cli;
pub mod endomorphism;
pub mod group;
pub mod linalg;
pub mod nilpotency;
pub mod scale_invariance;
pub mod serial;
