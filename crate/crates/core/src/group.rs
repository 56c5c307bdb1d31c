//! The group `G = Z^n ⋊_A Z` with product `(v,z)(w,c) = (v + A^z w, z + c)`,
//! and its finitely generated subgroups.

use std::borrow::Cow;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{IntMatrix, IntVector, Lattice, LatticeIndex, LinalgError};

/// Powers `A^k` with `|k|` up to this bound are precomputed.
const POWER_CACHE: usize = 8;

const SATURATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("det must be ±1 (got {det})")]
    NonUnimodular { det: BigInt },
    #[error("element has translation dimension {found}, group has n = {expected}")]
    DescriptorMismatch { expected: usize, found: usize },
    #[error("exponent {0} is too large to evaluate")]
    ExponentTooLarge(BigInt),
    #[error("subgroup needs at least one generator")]
    EmptyGenerators,
    #[error("subgroup has infinite index")]
    InfiniteIndex,
}

/// Element `(v, z)` of `Z^n ⋊_A Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub v: IntVector,
    pub z: BigInt,
}

impl GroupElement {
    pub fn new(v: IntVector, z: BigInt) -> Self {
        GroupElement { v, z }
    }

    pub fn from_i64s(v: &[i64], z: i64) -> Self {
        GroupElement { v: IntVector::from_i64s(v), z: BigInt::from(z) }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { v: IntVector::zeros(n), z: BigInt::zero() }
    }

    pub fn translation(v: IntVector) -> Self {
        GroupElement { v, z: BigInt::zero() }
    }

    pub fn shift(n: usize, z: BigInt) -> Self {
        GroupElement { v: IntVector::zeros(n), z }
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero() && self.v.is_zero()
    }

    /// `G` is torsion-free: a non-zero shift grows linearly under powers, and
    /// for a pure translation `(v,0)^m = (m v, 0)`.
    pub fn has_infinite_order(&self) -> bool {
        !self.is_identity()
    }

    /// `max(‖v‖∞, |z|)`
    pub fn size(&self) -> BigInt {
        self.v.max_abs().max(self.z.abs())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.z)
    }
}

/// The pair `(n, A)` with `det A = ±1`.
#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    a: IntMatrix,
    powers: Vec<IntMatrix>,
    inverse_powers: Vec<IntMatrix>,
}

impl PartialEq for GroupDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for GroupDescriptor {}

impl GroupDescriptor {
    pub fn new(a: IntMatrix) -> Result<Self, GroupError> {
        let det = a.determinant()?;
        if !det.abs().is_one() {
            return Err(GroupError::NonUnimodular { det });
        }
        let inv = a.inverse_unimodular()?;
        let n = a.rows();
        let mut powers = vec![IntMatrix::identity(n)];
        let mut inverse_powers = vec![IntMatrix::identity(n)];
        for k in 1..=POWER_CACHE {
            powers.push(&powers[k - 1] * &a);
            inverse_powers.push(&inverse_powers[k - 1] * &inv);
        }
        Ok(GroupDescriptor { a, powers, inverse_powers })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn matrix_inverse(&self) -> &IntMatrix {
        &self.inverse_powers[1]
    }

    /// `A^z`.
    pub fn a_pow(&self, z: &BigInt) -> Result<Cow<'_, IntMatrix>, GroupError> {
        let k = z.to_i64().ok_or_else(|| GroupError::ExponentTooLarge(z.clone()))?;
        let mag = k.unsigned_abs() as usize;
        if mag <= POWER_CACHE {
            return Ok(Cow::Borrowed(if k >= 0 { &self.powers[mag] } else { &self.inverse_powers[mag] }));
        }
        let base = if k >= 0 { &self.a } else { self.matrix_inverse() };
        Ok(Cow::Owned(base.pow_unsigned(k.unsigned_abs())))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.n())
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.dim() != self.n() {
            return Err(GroupError::DescriptorMismatch { expected: self.n(), found: g.dim() });
        }
        Ok(())
    }

    /// `(v,z)(w,c) = (v + A^z w, z + c)`
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        let w = if h.v.is_zero() { h.v.clone() } else { self.a_pow(&g.z)?.mul_vec(&h.v) };
        Ok(GroupElement { v: &g.v + &w, z: &g.z + &h.z })
    }

    /// `(v,z)^{-1} = (-A^{-z} v, -z)`
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        let neg_z = -&g.z;
        let v = -&self.a_pow(&neg_z)?.mul_vec(&g.v);
        Ok(GroupElement { v, z: neg_z })
    }

    /// `g^m` by repeated squaring; negative `m` goes through the inverse.
    pub fn power(&self, g: &GroupElement, m: &BigInt) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        if m.is_zero() {
            return Ok(self.identity());
        }
        let mut base = if m.is_negative() { self.inverse(g)? } else { g.clone() };
        let e = m.magnitude();
        let mut result = self.identity();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.multiply(&result, &base)?;
            }
            if i + 1 < bits {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// `[g, h] = g h g^{-1} h^{-1}`, which for `g = (v,z)`, `h = (w,c)` is
    /// `((A^z - I) w - (A^c - I) v, 0)`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        let gh = self.multiply(g, h)?;
        let ghg = self.multiply(&gh, &self.inverse(g)?)?;
        self.multiply(&ghg, &self.inverse(h)?)
    }

    /// Closed form of [`commutator`](Self::commutator).
    pub fn commutator_formula(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        let az = self.a_pow(&g.z)?;
        let ac = self.a_pow(&h.z)?;
        let first = &az.mul_vec(&h.v) - &h.v;
        let second = &ac.mul_vec(&g.v) - &g.v;
        Ok(GroupElement::translation(&first - &second))
    }

    pub fn subgroup(&self, gens: &[GroupElement]) -> Result<FGSubgroup, GroupError> {
        FGSubgroup::analyze(self, gens)
    }
}

/// Finitely generated subgroup `H ≤ G`, described by the smallest positive
/// shift `b` in `H` (zero when `H` lies in `Z^n`), a witness `h0 ∈ H` with shift
/// `b`, and the translation lattice `L = {w : (w,0) ∈ H}`.
///
/// Then `H = {(l,0) h0^k : l ∈ L, k ∈ Z}`.
#[derive(Clone, Debug)]
pub struct FGSubgroup {
    descriptor: GroupDescriptor,
    generators: Vec<GroupElement>,
    b: BigInt,
    h0: GroupElement,
    lattice: Lattice,
}

impl FGSubgroup {
    pub fn analyze(descriptor: &GroupDescriptor, gens: &[GroupElement]) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        for g in gens {
            descriptor.check(g)?;
        }
        let n = descriptor.n();

        // h0 = product of generator powers realising b = gcd of the shifts
        let mut b = BigInt::zero();
        let mut h0 = descriptor.identity();
        for g in gens {
            if g.z.is_zero() {
                continue;
            }
            let eg = b.extended_gcd(&g.z);
            let (mut d, mut x, mut y) = (eg.gcd, eg.x, eg.y);
            if d.is_negative() {
                d = -d;
                x = -x;
                y = -y;
            }
            h0 = descriptor.multiply(&descriptor.power(&h0, &x)?, &descriptor.power(g, &y)?)?;
            b = d;
        }
        debug_assert_eq!(h0.z, b);

        let mut reduced = Vec::with_capacity(gens.len());
        for g in gens {
            let r = if b.is_zero() {
                g.clone()
            } else {
                let k = &g.z / &b;
                descriptor.multiply(g, &descriptor.power(&h0, &-k)?)?
            };
            debug_assert!(r.z.is_zero());
            reduced.push(r.v);
        }
        let mut lattice = Lattice::from_generators(n, &reduced)?;

        if !b.is_zero() {
            let fwd = descriptor.a_pow(&b)?.into_owned();
            let back = descriptor.a_pow(&-&b)?.into_owned();
            let mut rounds = 0;
            loop {
                let next = lattice.sum(&lattice.image(&fwd)?)?.sum(&lattice.image(&back)?)?;
                if next == lattice {
                    break;
                }
                lattice = next;
                rounds += 1;
                assert!(rounds < SATURATION_CAP, "internal error: translation lattice saturation did not stabilise");
            }
        }

        // canonical witness: translation reduced modulo L
        let h0 = GroupElement { v: lattice.reduce(&h0.v), z: h0.z };
        Ok(FGSubgroup { descriptor: descriptor.clone(), generators: gens.to_vec(), b, h0, lattice })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Smallest positive shift occurring in `H`, or zero.
    pub fn shift_generator(&self) -> &BigInt {
        &self.b
    }

    pub fn witness(&self) -> &GroupElement {
        &self.h0
    }

    pub fn translation_lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn index(&self) -> LatticeIndex {
        match self.lattice.index_in_ambient() {
            LatticeIndex::Finite(l) if !self.b.is_zero() => LatticeIndex::Finite(l * &self.b),
            _ => LatticeIndex::Infinite,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool, GroupError> {
        self.descriptor.check(g)?;
        if self.b.is_zero() {
            return Ok(g.z.is_zero() && self.lattice.member(&g.v)?);
        }
        let (k, r) = g.z.div_rem(&self.b);
        if !r.is_zero() {
            return Ok(false);
        }
        let w = self.descriptor.multiply(g, &self.descriptor.power(&self.h0, &-k)?)?;
        debug_assert!(w.z.is_zero());
        Ok(self.lattice.member(&w.v)?)
    }

    /// Minimal positive `a` with `(a v, 0) ∈ H`; needs finite index.
    pub fn translation_multiplier(&self, v: &IntVector) -> Result<BigInt, GroupError> {
        if self.index() == LatticeIndex::Infinite {
            return Err(GroupError::InfiniteIndex);
        }
        Ok(self.lattice.order_of(v)?)
    }
}
