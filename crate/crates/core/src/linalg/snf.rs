//! Smith normal form and the integer solving built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::lattice::Lattice;
use super::matrix::{IntMatrix, IntVector};

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Non-zero invariant factors, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form, pivoting on the smallest non-zero absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest non-zero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // row and column cleared; enforce divisibility of the trailing block
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => {
                    if pivot.is_negative() {
                        d.negate_row(t);
                        u.negate_row(t);
                    }
                    break;
                }
            }
        }
    }
    finish(u, d, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> SmithForm {
    SmithForm { u, d, v }
}

/// Integer basis of `{x : A x = 0}`, in canonical (Hermite) form.
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<IntVector> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let gens: Vec<IntVector> = (rank..a.cols()).map(|j| snf.v.column(j)).collect();
    Lattice::from_generators(a.cols(), &gens).expect("kernel generators share the ambient dimension").basis().to_vec()
}

/// Some integer `x` with `A x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &IntVector) -> Option<IntVector> {
    assert_eq!(a.rows(), b.dim(), "right-hand side dimension mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = IntVector::zeros(a.cols());
    for i in 0..a.rows() {
        let di = if i < a.cols() { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
            continue;
        }
        let (q, r) = c[i].div_rem(&di);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let x = snf.v.mul_vec(&y);
    debug_assert_eq!(&a.mul_vec(&x), b);
    Some(x)
}
