//! Dense matrices and vectors over the arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Column vector of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard coordinate vector (zero-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.dim(), other.dim(), "dot product of mismatched vectors");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Largest absolute entry; zero for the empty vector.
    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVector {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
///
/// Shapes with zero rows or columns are representable so that empty spans
/// (e.g. the basis of the trivial lattice) need no special casing, but the
/// public constructors used for parsed input reject them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, k: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = k.clone();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows. Fails on an empty or ragged row list.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(LinalgError::Empty);
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(rows).expect("well-formed literal matrix")
    }

    /// Matrix whose columns are the given vectors, all of dimension `dim`.
    pub fn from_columns(dim: usize, cols: &[IntVector]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), dim, "column dimension mismatch");
            for i in 0..dim {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        IntVector::new((0..self.rows).map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hconcat row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Entrywise reduction into `[0, modulus)`.
    pub fn reduce_mod(&self, modulus: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mod_floor(modulus)).collect() }
    }

    pub fn all_divisible_by(&self, r: &BigInt) -> bool {
        self.data.iter().all(|x| x.is_multiple_of(r))
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += t;
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += t;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = exact_div(&num, &prev);
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    /// Rank over the rationals, again by Bareiss elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                for j in col + 1..m.cols {
                    let num = &m[(rank, col)] * &m[(i, j)] - &m[(i, col)] * &m[(rank, j)];
                    m[(i, j)] = exact_div(&num, &prev);
                }
                m[(i, col)] = BigInt::zero();
            }
            prev = m[(rank, col)].clone();
            rank += 1;
        }
        rank
    }

    /// Classical adjugate, so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Result<IntMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let d = minor.determinant()?;
                // adj[j][i] = (-1)^{i+j} M_{ij}
                adj[(j, i)] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        Ok(adj)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self[(i, j)].clone());
            }
        }
        IntMatrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LinalgError> {
        let det = self.determinant()?;
        if !det.abs().is_one() {
            return Err(LinalgError::NonUnimodular { det });
        }
        // det = ±1, so dividing the adjugate by it is a sign flip at most
        Ok(self.adjugate()?.scale(&det))
    }

    /// `A^z` for any integer `z`; negative powers need `|det A| = 1`.
    pub fn pow(&self, z: i64) -> Result<IntMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if z < 0 {
            let inv = self.inverse_unimodular()?;
            return Ok(inv.pow_unsigned(z.unsigned_abs()));
        }
        Ok(self.pow_unsigned(z as u64))
    }

    /// Repeated squaring; `A^0 = I`.
    pub fn pow_unsigned(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients of `det(xI - A)`, constant term first; the last entry is 1.
    ///
    /// Faddeev–LeVerrier recurrence:
    /// `M_k = A M_{k-1} + c_{n-k+1} I`, `c_{n-k} = -tr(A M_k) / k`.
    pub fn char_poly(&self) -> Result<Vec<BigInt>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let tr = (self * &m).trace();
            coeffs[n - k] = -exact_div(&tr, &BigInt::from(k));
        }
        Ok(coeffs)
    }
}

/// Division asserted to be exact; a remainder means an arithmetic bug.
pub(crate) fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "internal error: inexact division {num} / {den}");
    q
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn pow_examples() {
        let shear = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(shear.pow(-1).unwrap(), m(&[&[1, -1], &[0, 1]]));
        let cat = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(cat.pow(2).unwrap(), m(&[&[5, 3], &[3, 2]]));
        assert!(cat.pow(0).unwrap().is_identity());
    }

    #[test]
    fn negative_power_needs_unimodular() {
        let a = m(&[&[2, 0], &[0, 1]]);
        assert!(matches!(a.pow(-1), Err(LinalgError::NonUnimodular { .. })));
        assert_eq!(a.pow(3).unwrap(), m(&[&[8, 0], &[0, 1]]));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant().unwrap(), big(1));
        assert_eq!(IntMatrix::identity(5).determinant().unwrap(), big(1));
        assert_eq!(m(&[&[0, -1], &[1, 0]]).determinant().unwrap(), big(1));
        // needs a row swap
        assert_eq!(m(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]).determinant().unwrap(), big(-3));
        assert!(matches!(m(&[&[1, 2, 3]]).determinant(), Err(LinalgError::NonSquare { rows: 1, cols: 3 })));
    }

    #[test]
    fn char_poly_examples() {
        let c = |rows: &[&[i64]]| -> Vec<i64> {
            m(rows).char_poly().unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect()
        };
        assert_eq!(c(&[&[2, 1], &[1, 1]]), vec![1, -3, 1]);
        assert_eq!(c(&[&[1, 0], &[0, 1]]), vec![1, -2, 1]);
        assert_eq!(c(&[&[0, -1], &[1, 0]]), vec![1, 0, 1]);
    }

    #[test]
    fn rank_and_adjugate() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 2, 3], &[0, 0, 1]]).rank(), 2);
        let a = m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let adj = a.adjugate().unwrap();
        let det = a.determinant().unwrap();
        assert_eq!(&a * &adj, IntMatrix::scalar(3, &det));
    }
}
