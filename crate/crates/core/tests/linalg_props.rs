mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semidirect::linalg::{integer_kernel_basis, smith_normal_form, solve_integer, IntMatrix, IntVector, Lattice, Poly};

fn square(max_n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, n), n).prop_map(|rows| mat(&rows))
    })
}

fn rect(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| mat(&rows))
    })
}

fn unimodular(max_n: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n, any::<u64>(), 1usize..12)
        .prop_map(|(n, seed, steps)| random_elementary_product(&mut ChaCha8Rng::seed_from_u64(seed), n, steps))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn bareiss_matches_cofactor_expansion(a in square(5, 9)) {
        prop_assert_eq!(a.determinant().unwrap(), det_of(&a));
    }

    #[test]
    fn adjugate_inverts_up_to_determinant(a in square(4, 6)) {
        let d = a.determinant().unwrap();
        prop_assert_eq!(&a * &a.adjugate().unwrap(), IntMatrix::scalar(a.rows(), &d));
    }

    #[test]
    fn rank_is_bounded_and_detects_singularity(a in square(4, 2)) {
        let r = a.rank();
        prop_assert!(r <= a.rows());
        prop_assert_eq!(r == a.rows(), !a.determinant().unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn smith_form_contract(a in rect(4, 7)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(det_of(&s.u).abs().is_one());
        prop_assert!(det_of(&s.v).abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.row(i)[j].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(f.len(), a.rank());
    }

    #[test]
    fn powers_and_inverses(a in unimodular(4), p in -6i64..=6, q in -6i64..=6) {
        let n = a.rows();
        prop_assert!((&a * &a.inverse_unimodular().unwrap()).is_identity());
        prop_assert_eq!(&a.pow(p).unwrap() * &a.pow(q).unwrap(), a.pow(p + q).unwrap());
        prop_assert_eq!(&a.pow(p).unwrap() * &a.pow(-p).unwrap(), IntMatrix::identity(n));
    }

    #[test]
    fn cayley_hamilton(a in square(5, 5)) {
        let p = Poly::new(a.char_poly().unwrap());
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), Some(a.rows()));
        prop_assert!(p.eval_matrix(&a).is_zero());
        // constant term is (-1)^n det A
        let sign = if a.rows() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(&p.coeffs()[0] * sign, det_of(&a));
    }

    #[test]
    fn lattice_canonical_form_is_basis_independent(a in rect(4, 6), seed in any::<u64>(), steps in 1usize..10) {
        let gens = a.row_vectors().into_iter().map(IntVector::new).collect::<Vec<_>>();
        let n = a.cols();
        let l = Lattice::from_generators(n, &gens).unwrap();
        // recombine the generators with a unimodular matrix of matching size
        let k = gens.len();
        let u = random_elementary_product(&mut ChaCha8Rng::seed_from_u64(seed), k, steps);
        let mixed: Vec<IntVector> = (0..k)
            .map(|i| {
                let mut acc = IntVector::zeros(n);
                for (j, g) in gens.iter().enumerate() {
                    acc = &acc + &g.scale(&u.row(i)[j]);
                }
                acc
            })
            .rev()
            .collect();
        let mut with_extra = mixed.clone();
        with_extra.push(&gens[0] + &gens[k - 1]);
        with_extra.push(IntVector::zeros(n));
        prop_assert_eq!(&Lattice::from_generators(n, &mixed).unwrap(), &l);
        prop_assert_eq!(&Lattice::from_generators(n, &with_extra).unwrap(), &l);
        for g in &gens {
            prop_assert!(l.member(g).unwrap());
        }
        prop_assert_eq!(l.rank(), a.rank());
    }

    #[test]
    fn integer_solutions(a in rect(4, 5), x in prop::collection::vec(-5i64..=5, 4)) {
        let x = vec_i64(&x[..a.cols()]);
        let b = a.mul_vec(&x);
        let y = solve_integer(&a, &b);
        prop_assert!(y.is_some());
        prop_assert_eq!(a.mul_vec(&y.unwrap()), b);
    }

    #[test]
    fn kernel_basis_is_a_kernel(a in rect(4, 3)) {
        let k = integer_kernel_basis(&a);
        prop_assert_eq!(k.len(), a.cols() - a.rank());
        for v in &k {
            prop_assert!(a.mul_vec(v).is_zero());
        }
    }
}

#[test]
fn unsolvable_systems_are_reported() {
    assert_eq!(solve_integer(&mat(&[[2, 0], [0, 2]]), &vec_i64(&[1, 0])), None);
    assert_eq!(solve_integer(&mat(&[[1, 1], [1, 1]]), &vec_i64(&[1, 0])), None);
}
