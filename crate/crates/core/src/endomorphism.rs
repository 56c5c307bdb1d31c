//! Endomorphisms of `G = Z^n ⋊_A Z` given by the images of the generators
//! `(e_i, 0)` and `(0, 1)`.
//!
//! With `x_i = f(e_i, 0)` and `t = f(0, 1)`, the assignment extends to a
//! homomorphism exactly when the defining relations of `G` survive:
//! `t x_i t^{-1} = ∏_j x_j^{(A e_i)_j}` and `x_i x_j = x_j x_i`.
//! Then `f(v, z) = x_1^{v_1} ⋯ x_n^{v_n} t^z`.
//!
//! When every `x_i` has zero shift the endomorphism takes the structured form
//! `f(v, z) = (F v + g(0, z), s z)`, where `F` has the translations of the `x_i`
//! as columns, `t = (u, s)` and `g(0, z)` is the translation part of `t^z`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupDescriptor, GroupElement, GroupError};
use crate::linalg::{integer_kernel_basis, solve_integer, IntMatrix, IntVector, LinalgError};

/// Box radius of the kernel search used for endomorphisms without structure.
pub const DEFAULT_KERNEL_SEARCH_BOUND: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected {expected} generator images, found {found}")]
    WrongGeneratorCount { expected: usize, found: usize },
    /// Generator numbers are 1-based, matching `x_1 … x_n`.
    #[error("CommutationViolation({i},{j})")]
    CommutationViolation { i: usize, j: usize },
    /// Generator number is 1-based.
    #[error("ConjugationViolation({i})")]
    ConjugationViolation { i: usize },
    #[error("internal error: h-functional is not A-invariant")]
    HNotInvariant,
    #[error("internal error: F A != A^s F for a validated endomorphism")]
    ConjugationRelationBroken,
    #[error("endomorphisms live on different groups")]
    DescriptorMismatch,
    #[error("endomorphism is not injective")]
    NotInjective,
    #[error("endomorphism has no structured form (some x_i has non-zero shift)")]
    NotStructured,
}

/// Raw generator images `x_i = f(e_i, 0)` and `t = f(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoGenerators {
    pub x: Vec<GroupElement>,
    pub t: GroupElement,
}

impl EndoGenerators {
    pub fn identity(n: usize) -> Self {
        EndoGenerators {
            x: (0..n).map(|i| GroupElement::translation(IntVector::unit(n, i))).collect(),
            t: GroupElement::shift(n, BigInt::one()),
        }
    }

    /// Images of the structured endomorphism `(F, u, s)`.
    pub fn from_structure(f: &IntMatrix, u: &IntVector, s: &BigInt) -> Self {
        EndoGenerators {
            x: f.columns().into_iter().map(GroupElement::translation).collect(),
            t: GroupElement::new(u.clone(), s.clone()),
        }
    }
}

/// `h(v, z) = p·v + q z`, the shift part of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HFunctional {
    pub p: IntVector,
    #[serde(with = "crate::serial::decimal")]
    pub q: BigInt,
}

impl HFunctional {
    pub fn eval(&self, g: &GroupElement) -> BigInt {
        self.p.dot(&g.v) + &self.q * &g.z
    }
}

/// `f(v, z) = (F v + g(0, z), s z)` with `t = (u, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredEndo {
    #[serde(rename = "F")]
    pub f: IntMatrix,
    pub u: IntVector,
    #[serde(with = "crate::serial::decimal")]
    pub s: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndoForm {
    Structured(StructuredEndo),
    /// Some `x_i` has a non-zero shift; only the h-functional is reported.
    General(HFunctional),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    NotInjective {
        kernel_witness: GroupElement,
    },
    /// No kernel element found with `‖v‖∞, |z| ≤ bound`.
    Undecided {
        bound: u32,
    },
}

impl StructuredEndo {
    pub fn n(&self) -> usize {
        self.f.rows()
    }

    /// `s ≠ 0` and `det F ≠ 0`; otherwise an explicit non-trivial kernel
    /// element is produced.
    pub fn injectivity(&self) -> Injectivity {
        let n = self.n();
        if self.s.is_zero() {
            // t = (u, 0) so f(v, z) = (F v + z u, 0): kernel of [F | u]
            let k = integer_kernel_basis(&self.f.hconcat(&IntMatrix::from_columns(n, std::slice::from_ref(&self.u))));
            let w = k.into_iter().next().expect("n x (n+1) matrix has a kernel");
            let mut v = w.into_entries();
            let z = v.pop().expect("kernel vector has n + 1 entries");
            return Injectivity::NotInjective { kernel_witness: GroupElement::new(IntVector::new(v), z) };
        }
        match integer_kernel_basis(&self.f).into_iter().next() {
            Some(v) => Injectivity::NotInjective { kernel_witness: GroupElement::translation(v) },
            None => Injectivity::Injective,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity() == Injectivity::Injective
    }

    /// `[G : f(G)] = |det F| · |s|`.
    pub fn image_index(&self) -> Result<BigInt, EndoError> {
        if !self.is_injective() {
            return Err(EndoError::NotInjective);
        }
        Ok(self.f.determinant()?.abs() * self.s.abs())
    }

    fn t(&self) -> GroupElement {
        GroupElement::new(self.u.clone(), self.s.clone())
    }

    pub fn apply(&self, g: &GroupDescriptor, x: &GroupElement) -> Result<GroupElement, EndoError> {
        let tz = g.power(&self.t(), &x.z)?;
        Ok(g.multiply(&GroupElement::translation(self.f.mul_vec(&x.v)), &tz)?)
    }

    /// The unique preimage of `x` under `f`, if `x ∈ f(G)`.
    ///
    /// `(w, c) ∈ f(G)` iff `s | c` and `F v = w - g(0, c/s)` is solvable.
    pub fn preimage(&self, g: &GroupDescriptor, x: &GroupElement) -> Result<Option<GroupElement>, EndoError> {
        g.check(x)?;
        if !self.is_injective() {
            return Err(EndoError::NotInjective);
        }
        let (k, r) = num_integer::Integer::div_rem(&x.z, &self.s);
        if !r.is_zero() {
            return Ok(None);
        }
        let tk = g.power(&self.t(), &k)?;
        let rhs = &x.v - &tk.v;
        Ok(solve_integer(&self.f, &rhs).map(|v| GroupElement::new(v, k)))
    }
}

/// An endomorphism whose generator images satisfy the relations of `G`.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    descriptor: GroupDescriptor,
    gens: EndoGenerators,
    /// `F` when all `x_i` are translations; enables `x^v = (F v, 0)`.
    translation_block: Option<IntMatrix>,
}

impl PartialEq for Endomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor && self.gens == other.gens
    }
}

impl Eq for Endomorphism {}

impl Endomorphism {
    /// Checks the conjugation relations first, then commutation.
    pub fn validate(descriptor: &GroupDescriptor, gens: EndoGenerators) -> Result<Self, EndoError> {
        let n = descriptor.n();
        if gens.x.len() != n {
            return Err(EndoError::WrongGeneratorCount { expected: n, found: gens.x.len() });
        }
        descriptor.check(&gens.t)?;
        for x in &gens.x {
            descriptor.check(x)?;
        }

        let a = descriptor.matrix();
        let t_inv = descriptor.inverse(&gens.t)?;
        for i in 0..n {
            let lhs = descriptor.multiply(&descriptor.multiply(&gens.t, &gens.x[i])?, &t_inv)?;
            let mut rhs = descriptor.identity();
            for j in 0..n {
                let e = &a[(j, i)];
                if !e.is_zero() {
                    rhs = descriptor.multiply(&rhs, &descriptor.power(&gens.x[j], e)?)?;
                }
            }
            if lhs != rhs {
                return Err(EndoError::ConjugationViolation { i: i + 1 });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let xy = descriptor.multiply(&gens.x[i], &gens.x[j])?;
                let yx = descriptor.multiply(&gens.x[j], &gens.x[i])?;
                if xy != yx {
                    return Err(EndoError::CommutationViolation { i: i + 1, j: j + 1 });
                }
            }
        }

        let translation_block = gens
            .x
            .iter()
            .all(|x| x.z.is_zero())
            .then(|| IntMatrix::from_columns(n, &gens.x.iter().map(|x| x.v.clone()).collect::<Vec<_>>()));
        Ok(Endomorphism { descriptor: descriptor.clone(), gens, translation_block })
    }

    pub fn identity(descriptor: &GroupDescriptor) -> Self {
        Self::validate(descriptor, EndoGenerators::identity(descriptor.n())).expect("identity satisfies the relations")
    }

    pub fn from_structure(descriptor: &GroupDescriptor, s: &StructuredEndo) -> Result<Self, EndoError> {
        Self::validate(descriptor, EndoGenerators::from_structure(&s.f, &s.u, &s.s))
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn generators(&self) -> &EndoGenerators {
        &self.gens
    }

    /// `f(v, z) = x_1^{v_1} ⋯ x_n^{v_n} t^z`.
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement, EndoError> {
        let d = &self.descriptor;
        d.check(g)?;
        let xv = match &self.translation_block {
            Some(f) => GroupElement::translation(f.mul_vec(&g.v)),
            None => {
                let mut acc = d.identity();
                for (xi, vi) in self.gens.x.iter().zip(g.v.iter()) {
                    if !vi.is_zero() {
                        acc = d.multiply(&acc, &d.power(xi, vi)?)?;
                    }
                }
                acc
            }
        };
        if g.z.is_zero() {
            return Ok(xv);
        }
        Ok(d.multiply(&xv, &d.power(&self.gens.t, &g.z)?)?)
    }

    pub fn h_functional(&self) -> Result<HFunctional, EndoError> {
        let p = IntVector::new(self.gens.x.iter().map(|x| x.z.clone()).collect());
        let a = self.descriptor.matrix();
        // pᵀ A = pᵀ
        let pa = a.transpose().mul_vec(&p);
        if pa != p {
            return Err(EndoError::HNotInvariant);
        }
        Ok(HFunctional { p, q: self.gens.t.z.clone() })
    }

    pub fn form(&self) -> Result<EndoForm, EndoError> {
        let Some(f) = &self.translation_block else {
            return Ok(EndoForm::General(self.h_functional()?));
        };
        let s = self.gens.t.z.clone();
        let a = self.descriptor.matrix();
        if &f.clone() * a != &*self.descriptor.a_pow(&s)? * f {
            return Err(EndoError::ConjugationRelationBroken);
        }
        Ok(EndoForm::Structured(StructuredEndo { f: f.clone(), u: self.gens.t.v.clone(), s }))
    }

    pub fn structured(&self) -> Result<StructuredEndo, EndoError> {
        match self.form()? {
            EndoForm::Structured(s) => Ok(s),
            EndoForm::General(_) => Err(EndoError::NotStructured),
        }
    }

    /// Closed form for structured endomorphisms; otherwise a kernel search in
    /// the box `‖v‖∞, |z| ≤ bound`.
    pub fn injectivity(&self, bound: u32) -> Result<Injectivity, EndoError> {
        if let EndoForm::Structured(s) = self.form()? {
            return Ok(s.injectivity());
        }
        let n = self.descriptor.n();
        let b = i64::from(bound);
        let side = (2 * b + 1) as u64;
        let total = side.checked_pow(n as u32 + 1).expect("search box too large");
        for idx in 0..total {
            let mut rest = idx;
            let mut coords = Vec::with_capacity(n + 1);
            for _ in 0..=n {
                coords.push((rest % side) as i64 - b);
                rest /= side;
            }
            let g = GroupElement::from_i64s(&coords[..n], coords[n]);
            if g.is_identity() {
                continue;
            }
            if self.apply(&g)?.is_identity() {
                return Ok(Injectivity::NotInjective { kernel_witness: g });
            }
        }
        Ok(Injectivity::Undecided { bound })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, EndoError> {
        if self.descriptor != other.descriptor {
            return Err(EndoError::DescriptorMismatch);
        }
        let x = other.gens.x.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>, _>>()?;
        let t = self.apply(&other.gens.t)?;
        Endomorphism::validate(&self.descriptor, EndoGenerators { x, t })
    }

    /// `f^k`, with `f^0` the identity.
    pub fn iterate(&self, k: u32) -> Result<Endomorphism, EndoError> {
        let mut acc = Endomorphism::identity(&self.descriptor);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Index of `f(G)` for injective structured endomorphisms.
    pub fn image_index(&self) -> Result<BigInt, EndoError> {
        self.structured()?.image_index()
    }

    pub fn preimage(&self, x: &GroupElement) -> Result<Option<GroupElement>, EndoError> {
        self.structured()?.preimage(&self.descriptor, x)
    }

    /// Shift of `t`, as an `i64` if it fits.
    pub fn shift(&self) -> Option<i64> {
        self.gens.t.z.to_i64()
    }
}
