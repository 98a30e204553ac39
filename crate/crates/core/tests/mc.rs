use mobius_boot::debias::{nonstationary_debias, richardson_debias, StepSchedule};
use mobius_boot::lattice::enumerate_partitions;
use mobius_boot::mc::{
    exhaustive_estimate, mc_estimate, replica_rng, resample, ChainStart, EstimatorCoefficients, ResampleChain,
};
use mobius_boot::moments::{Dataset, LabeledTerm, MomentPolynomial};
use mobius_boot::resampling::apply_s;
use mobius_boot::Rational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn lattice_polynomial(m: usize) -> impl Strategy<Value = MomentPolynomial<Rational>> {
    let index = enumerate_partitions(m).unwrap();
    proptest::collection::vec(rational(), index.len())
        .prop_map(move |f| MomentPolynomial::from_lattice_vector(&index, &f).unwrap())
}

fn rational_data(n: usize, d: usize) -> impl Strategy<Value = Dataset<Rational>> {
    proptest::collection::vec(proptest::collection::vec(rational(), d), n).prop_map(|rows| Dataset::new(rows).unwrap())
}

fn variance() -> MomentPolynomial<f64> {
    let t = |b: Vec<Vec<u32>>| LabeledTerm::new(b).unwrap();
    MomentPolynomial::from_terms(1, [(t(vec![vec![0, 0]]), 1.0), (t(vec![vec![0], vec![0]]), -1.0)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn two_level_chains_match_the_stationary_estimator(
        (n, data, f) in (2usize..=3).prop_flat_map(|n| (Just(n), rational_data(n, 2), lattice_polynomial(2))),
    ) {
        let coeffs = EstimatorCoefficients::<Rational>::stationary(1);
        let chains = exhaustive_estimate(&f, &data, &coeffs, ChainStart::Resample).unwrap();
        let expected = apply_s(&richardson_debias(&f, n as u64, 1).unwrap(), n as u64).unwrap().evaluate(&data).unwrap();
        prop_assert_eq!(chains, expected);
    }

    #[test]
    fn two_level_chains_match_a_scheduled_estimator(
        (n, data, f, eta) in (2usize..=3).prop_flat_map(|n| (Just(n), rational_data(n, 3), lattice_polynomial(3), rational())),
    ) {
        let schedule = StepSchedule::custom(n as u64, vec![eta]).unwrap();
        let coeffs = EstimatorCoefficients::from_schedule(&schedule);
        let chains = exhaustive_estimate(&f, &data, &coeffs, ChainStart::Resample).unwrap();
        let g = nonstationary_debias(&f, n as u64, &schedule).unwrap();
        prop_assert_eq!(chains, apply_s(&g, n as u64).unwrap().evaluate(&data).unwrap());
    }

    #[test]
    fn signed_binomials(k in 0usize..=12) {
        let c = EstimatorCoefficients::<Rational>::stationary(k);
        let mut binom = num_bigint::BigInt::from(1);
        for (j, a) in c.coeffs.iter().enumerate() {
            // binom(k+1, j+1) from binom(k+1, j).
            binom = binom * (k + 1 - j) / (j + 1);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(a.clone(), Rational::from_integer(binom.clone() * sign));
        }
    }
}

#[test]
fn reports_are_bit_identical_across_thread_counts() {
    let data = Dataset::new((0..9).map(|i| vec![(i as f64).sin() * 3.0]).collect()).unwrap();
    let coeffs = EstimatorCoefficients::<f64>::stationary(2);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_estimate(&variance(), &data, &coeffs, 4000, 99, ChainStart::Resample).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.estimate.to_bits(), four.estimate.to_bits());
    assert_eq!(one.std_error.to_bits(), four.std_error.to_bits());
    assert_eq!(one, run(1));
}

#[test]
fn earlier_replicas_do_not_depend_on_the_count() {
    let data = Dataset::new((0..7).map(|i| vec![i as f64 * 0.25 - 1.0]).collect()).unwrap();
    let coeffs = EstimatorCoefficients::<f64>::stationary(1);
    let single = mc_estimate(&variance(), &data, &coeffs, 1, 5, ChainStart::Data).unwrap();
    let chain = ResampleChain::draw(data.clone(), 2, &mut replica_rng(5, 0));
    let v = variance();
    let by_hand = 2.0 * v.evaluate(&chain.datasets[0]).unwrap() - v.evaluate(&chain.datasets[1]).unwrap();
    assert_eq!(single.estimate, by_hand);
}

#[test]
fn standard_error_halves_with_four_times_the_replicas() {
    let data = Dataset::new((0..10).map(|i| vec![(i * i) as f64 / 10.0]).collect()).unwrap();
    let coeffs = EstimatorCoefficients::<f64>::plug_in();
    let ratios: Vec<f64> = (0..20)
        .map(|g| {
            let small = mc_estimate(&variance(), &data, &coeffs, 500, 1000 + g, ChainStart::Resample).unwrap();
            let large = mc_estimate(&variance(), &data, &coeffs, 2000, 2000 + g, ChainStart::Resample).unwrap();
            large.std_error / small.std_error
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean - 0.5).abs() < 0.03, "mean ratio {mean}");
}

#[test]
fn resamples_draw_from_parent_rows() {
    let data = Dataset::new((0..6).map(|i| vec![i as f64, -(i as f64)]).collect()).unwrap();
    let mut rng = replica_rng(0, 0);
    for _ in 0..100 {
        let y = resample(&data, &mut rng);
        assert_eq!((y.n(), y.d()), (6, 2));
        assert!(y.rows().all(|r| r[0] == -r[1] && r[0].fract() == 0.0 && (0.0..6.0).contains(&r[0])));
    }
}
