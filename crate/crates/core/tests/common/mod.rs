#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use semidirect::linalg::{IntMatrix, IntVector};

pub fn mat<R: AsRef<[i64]>>(rows: &[R]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &rows[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn det_of(m: &IntMatrix) -> BigInt {
    cofactor_det(&m.row_vectors())
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    mat(&data)
}

/// Uniform among matrices with entries in `[-bound, bound]` and det ±1.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> IntMatrix {
    loop {
        let m = random_matrix(rng, n, n, bound);
        if det_of(&m).abs().is_one() {
            return m;
        }
    }
}

/// Product of `steps` random elementary operations and sign flips.
pub fn random_elementary_product<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            rows[i].iter_mut().for_each(|x| *x = -*x);
        } else {
            let k = rng.gen_range(-2..=2);
            let src = rows[j].clone();
            rows[i].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
        }
    }
    mat(&rows)
}

pub fn vec_i64(v: &[i64]) -> IntVector {
    IntVector::from_i64s(v)
}

/// Dense `i64` product for fast exhaustive filters.
pub fn mul_i64(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    out
}
