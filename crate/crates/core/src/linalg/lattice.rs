//! Sublattices of `Z^n` in canonical Hermite form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};
use super::LinalgError;

/// Index of a sublattice in its ambient `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(x) => Some(x),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(x) => write!(f, "{x}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// A subgroup of `Z^n`, stored by its Hermite basis.
///
/// Basis vectors are kept in echelon order: the pivot (first non-zero
/// coordinate) of each vector lies strictly right of the previous one, is
/// positive, and every other basis vector has an entry in `[0, pivot)` at that
/// coordinate. That makes the representation unique, so two lattices are equal
/// exactly when their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<IntVector>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| IntVector::unit(ambient_dim, i)).collect();
        Lattice { ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    /// Lattice spanned by `generators`, all of dimension `ambient_dim`.
    pub fn from_generators(ambient_dim: usize, generators: &[IntVector]) -> Result<Self, LinalgError> {
        if let Some(g) = generators.iter().find(|g| g.dim() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: g.dim() });
        }
        let mut rows: Vec<Vec<BigInt>> =
            generators.iter().filter(|g| !g.is_zero()).map(|g| g.entries().to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ambient_dim {
            if r == rows.len() {
                break;
            }
            // gcd-combine every remaining row into row r at this column
            while let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
            {
                rows.swap(r, p);
                let mut done = true;
                for i in r + 1..rows.len() {
                    if rows[i][col].is_zero() {
                        continue;
                    }
                    let q = rows[i][col].div_floor(&rows[r][col]);
                    let (head, tail) = rows.split_at_mut(i);
                    sub_multiple(&mut tail[0], &head[r], &q);
                    done &= tail[0][col].is_zero();
                }
                if done {
                    break;
                }
            }
            if rows[r][col].is_zero() {
                continue;
            }
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            // reduce the rows above into [0, pivot)
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(r);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
            pivots.push(col);
            rows.retain(|row| row.iter().any(|x| !x.is_zero()));
            r += 1;
        }
        rows.truncate(r);
        Ok(Lattice { ambient_dim, basis: rows.into_iter().map(IntVector::new).collect(), pivots })
    }

    /// Lattice spanned by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), &m.columns()).expect("columns share the row count")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    /// Basis as the columns of an `ambient_dim x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_dim, &self.basis)
    }

    /// Reduces `v` against the basis: the result differs from `v` by a lattice
    /// vector and is zero exactly when `v` is a member. At each pivot the
    /// coordinate is brought into `[0, pivot)`.
    pub fn reduce(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.dim(), self.ambient_dim, "vector outside the ambient space");
        let mut w = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let q = w[p].div_floor(&b[p]);
            if !q.is_zero() {
                w = &w - &b.scale(&q);
            }
        }
        w
    }

    pub fn member(&self, v: &IntVector) -> Result<bool, LinalgError> {
        if v.dim() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: v.dim() });
        }
        Ok(self.reduce(v).is_zero())
    }

    /// `|det(basis)|` for full-rank lattices, infinite otherwise.
    pub fn index_in_ambient(&self) -> LatticeIndex {
        if !self.is_full_rank() {
            return LatticeIndex::Infinite;
        }
        // echelon + full rank means the basis is triangular
        let det = self.basis.iter().zip(&self.pivots).map(|(b, &p)| b[p].clone()).product();
        LatticeIndex::Finite(det)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LinalgError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        let gens: Vec<IntVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(self.ambient_dim, &gens)
    }

    /// `A L`.
    pub fn image(&self, a: &IntMatrix) -> Result<Lattice, LinalgError> {
        if a.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: a.cols() });
        }
        let gens: Vec<IntVector> = self.basis.iter().map(|b| a.mul_vec(b)).collect();
        Lattice::from_generators(a.rows(), &gens)
    }

    /// `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.reduce(b).is_zero())
    }

    /// Smallest positive `a` with `a v ∈ L`, i.e. the order of `v + L` in
    /// `Z^n / L`. Needs a full-rank lattice.
    pub fn order_of(&self, v: &IntVector) -> Result<BigInt, LinalgError> {
        if v.dim() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: v.dim() });
        }
        if !self.is_full_rank() {
            return Err(LinalgError::InfiniteIndex);
        }
        // v = sum x_k b_k over Q; forward substitution on the triangular basis
        let n = self.ambient_dim;
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(n);
        for col in 0..n {
            let mut acc = BigRational::from_integer(v[col].clone());
            for (k, x) in coeffs.iter().enumerate() {
                acc -= x * BigRational::from_integer(self.basis[k][col].clone());
            }
            coeffs.push(acc / BigRational::from_integer(self.basis[col][col].clone()));
        }
        Ok(coeffs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
    }
}

fn sub_multiple(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= s * q;
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}
