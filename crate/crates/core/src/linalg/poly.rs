//! Just enough univariate integer polynomial arithmetic for the cyclotomic
//! tests. Coefficients are stored constant term first.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    /// `x^k - 1`
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::from(-1);
        c[k] = BigInt::one();
        Poly(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.0.len() - 1;
        if self.0.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone();
            if q.is_zero() {
                continue;
            }
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &(&acc * a) + &IntMatrix::scalar(n, c);
        }
        acc
    }
}

/// The `k`-th cyclotomic polynomial, `Φ_k = (x^k - 1) / ∏_{d | k, d < k} Φ_d`.
pub fn cyclotomic(k: usize) -> Poly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut p = Poly::x_pow_minus_one(k);
    for d in (1..k).filter(|d| k.is_multiple_of(*d)) {
        let (q, r) = p.div_rem_monic(&cyclotomic(d));
        debug_assert!(r.0.is_empty());
        p = q;
    }
    p
}

/// Euler's totient.
pub fn totient(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}
