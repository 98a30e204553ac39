use mobius_boot::lattice::numbers::power;
use mobius_boot::lattice::{enumerate_partitions, falling_factorial};
use mobius_boot::moments::MomentPolynomial;
use mobius_boot::resampling::{
    apply_s, factorization_with, gamma_exact, level_sums, log_gamma_ratio, one_norm_closed_form, one_norm_direct,
    reduced_matrix, SamplingMatrix,
};
use mobius_boot::{Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

#[test]
fn every_column_sums_to_one() {
    for m in 1..=6 {
        let index = enumerate_partitions(m).unwrap();
        for n in 1..=8 {
            let s = SamplingMatrix::<Rational>::new(&index, n).unwrap();
            for j in 0..index.len() {
                let total = s.entries.column(j).into_iter().fold(Rational::zero(), |a, b| a + b);
                assert!(total.is_one(), "m = {m}, N = {n}, column {j}: {total}");
            }
        }
    }
}

#[test]
fn columns_beyond_n_only_lose_their_diagonal() {
    for m in 2..=5 {
        let index = enumerate_partitions(m).unwrap();
        let counts = index.block_counts();
        for n in 1..m as u64 {
            let s = SamplingMatrix::<Rational>::new(&index, n).unwrap();
            for (j, &k) in counts.iter().enumerate() {
                if k as u64 > n {
                    assert!(s.entries.get(j, j).is_zero());
                    assert!(s.entries.column(j).iter().any(|v| !v.is_zero()));
                }
            }
        }
    }
}

#[test]
fn triangular_with_falling_factorial_diagonal() {
    for m in 1..=6 {
        let index = enumerate_partitions(m).unwrap();
        for n in 1..=8u64 {
            let s = SamplingMatrix::<Rational>::new(&index, n).unwrap();
            assert!(s.entries.is_lower_triangular());
            for (i, p) in index.iter().enumerate() {
                let k = p.block_count() as u64;
                assert_eq!(*s.entries.get(i, i), Rational::new(falling_factorial(n, k), power(n, k)));
                for (j, q) in index.iter().enumerate() {
                    if !s.entries.get(i, j).is_zero() {
                        assert!(q.refines(p).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn diagonal_scaling_of_zeta() {
    for m in 1..=6 {
        let index = enumerate_partitions(m).unwrap();
        for n in 1..=8 {
            let f = factorization_with(&SamplingMatrix::<Rational>::new(&index, n).unwrap()).unwrap();
            assert!(f.check, "m = {m}, N = {n}");
            assert_eq!(f.literal_check, m == 1, "m = {m}, N = {n}");
        }
    }
}

#[test]
fn direct_norm_matches_closed_form() {
    for m in 1..=6 {
        for n in 1..=10 {
            let direct = one_norm_direct::<Rational>(m, n).unwrap();
            assert_eq!(direct, one_norm_closed_form::<Rational>(m, n), "m = {m}, N = {n}");
            let expected = if m as u64 <= n {
                Rational::from_integer(2.into()) * (Rational::one() - Rational::new(falling_factorial(n, m as u64), power(n, m as u64)))
            } else {
                Rational::from_integer(2.into())
            };
            assert_eq!(direct, expected);
        }
    }
}

#[test]
fn log_gamma_matches_exact_gamma() {
    for m in 1..=12 {
        for n in m as u64..=40 {
            let exact = gamma_exact::<Rational>(m, n).to_f64();
            assert!((log_gamma_ratio(m, n).exp() - exact).abs() <= 1e-14 * exact.max(1e-300));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn polynomial_action_matches_matrix(
        (m, f) in (1usize..=4).prop_flat_map(|m| (Just(m), proptest::collection::vec(rational(), [1, 2, 5, 15][m - 1]))),
        n in 1u64..=6,
    ) {
        let index = enumerate_partitions(m).unwrap();
        let s = SamplingMatrix::<Rational>::new(&index, n).unwrap();
        let p = MomentPolynomial::from_lattice_vector(&index, &f).unwrap();
        prop_assert_eq!(apply_s(&p, n).unwrap().to_lattice_vector(&index).unwrap(), s.apply(&f).unwrap());
    }

    #[test]
    fn level_sums_follow_the_reduced_matrix(
        (m, f) in (1usize..=5).prop_flat_map(|m| (Just(m), proptest::collection::vec(rational(), [1, 2, 5, 15, 52][m - 1]))),
        n in 1u64..=9,
    ) {
        let index = enumerate_partitions(m).unwrap();
        let s = SamplingMatrix::<Rational>::new(&index, n).unwrap();
        let r = reduced_matrix::<Rational>(m, n).unwrap();
        let lhs = level_sums(&index, &s.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, r.apply(&level_sums(&index, &f).unwrap()).unwrap());
    }
}
