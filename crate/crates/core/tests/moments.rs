use mobius_boot::lattice::enumerate_partitions;
use mobius_boot::mc::all_index_vectors;
use mobius_boot::moments::{
    cumulants_from_moments, empirical_moment, moments_from_cumulants, symmetric_statistic, Dataset, LabeledTerm,
    MomentPolynomial, MomentTable,
};
use mobius_boot::resampling::apply_s;
use mobius_boot::{Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn dataset(n: std::ops::RangeInclusive<usize>, d: usize) -> impl Strategy<Value = Dataset<Rational>> {
    n.prop_flat_map(move |n| proptest::collection::vec(proptest::collection::vec(rational(), d), n))
        .prop_map(|rows| Dataset::new(rows).unwrap())
}

fn term(d: usize, max_order: usize) -> impl Strategy<Value = LabeledTerm> {
    proptest::collection::vec(proptest::collection::vec(0..d as u32, 1..=max_order), 1..=max_order)
        .prop_filter_map("order too large", move |mut blocks| {
            let mut budget = max_order;
            blocks.retain_mut(|b| {
                b.truncate(budget);
                budget -= b.len();
                !b.is_empty()
            });
            LabeledTerm::new(blocks).ok()
        })
}

fn polynomial(d: usize, max_order: usize) -> impl Strategy<Value = MomentPolynomial<Rational>> {
    proptest::collection::vec((term(d, max_order), rational()), 1..=5)
        .prop_map(move |terms| {
            let mut p = MomentPolynomial::zero(d);
            for (t, c) in terms {
                p = p.add(&MomentPolynomial::from_terms(d, [(t, c)]).unwrap()).unwrap();
            }
            p
        })
}

fn average<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let mut total = T::zero();
    let mut count = 0u64;
    for v in values {
        total += v;
        count += 1;
    }
    total / T::from_u64(count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resample_average_is_exact_expectation(
        (data, f) in (2usize..=4).prop_flat_map(|n| (dataset(n..=n, 2), polynomial(2, 3)))
    ) {
        let n = data.n();
        let avg = average(all_index_vectors(n).map(|v| f.evaluate(&data.select_rows(&v)).unwrap()));
        prop_assert_eq!(avg, apply_s(&f, n as u64).unwrap().evaluate(&data).unwrap());
    }

    #[test]
    fn symmetric_statistics_are_unbiased(
        (data, t) in (2usize..=4).prop_flat_map(|n| (dataset(n..=n, 2), term(2, 3)))
    ) {
        let n = data.n();
        prop_assume!(t.block_count() <= n);
        let avg = average(all_index_vectors(n).map(|v| symmetric_statistic(&data.select_rows(&v), &t).unwrap()));
        let expected = t.blocks().iter().fold(Rational::one(), |acc, b| acc * empirical_moment(&data, b).unwrap());
        prop_assert_eq!(avg, expected);
    }

    #[test]
    fn row_order_does_not_matter(
        data in dataset(1..=6, 2),
        f in polynomial(2, 3),
        t in term(2, 3),
        seed in any::<u64>(),
    ) {
        let n = data.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shuffled = data.select_rows(&order);
        prop_assert_eq!(f.evaluate(&shuffled).unwrap(), f.evaluate(&data).unwrap());
        if t.block_count() <= n {
            prop_assert_eq!(symmetric_statistic(&shuffled, &t).unwrap(), symmetric_statistic(&data, &t).unwrap());
        }
    }

    #[test]
    fn tabulated_moments_match_the_dataset(data in dataset(1..=5, 2), f in polynomial(2, 3)) {
        let table = MomentTable::tabulate(&data, 3).unwrap();
        prop_assert_eq!(f.evaluate(&table).unwrap(), f.evaluate(&data).unwrap());
    }

    #[test]
    fn functional_json_round_trip(f in polynomial(3, 4)) {
        prop_assert_eq!(MomentPolynomial::<Rational>::from_json(&f.to_json().unwrap()).unwrap(), f);
    }

    #[test]
    fn cumulant_round_trip(m in 1usize..=5, seed in proptest::collection::vec(rational(), 52)) {
        let index = enumerate_partitions(m).unwrap();
        let kappa = &seed[..index.len()];
        let mu = moments_from_cumulants(&index, kappa).unwrap();
        prop_assert_eq!(cumulants_from_moments(&index, &mu).unwrap(), kappa.to_vec());
    }
}

#[test]
fn sample_variance_is_the_unbiased_variance() {
    // (x0 x0) − (x0)(x0) corrected by symmetric statistics is Σ(x − x̄)²/(N − 1).
    let xs = [3i64, -1, 4, 1, 5];
    let data = Dataset::new(xs.iter().map(|&x| vec![Rational::from_integer(x.into())]).collect()).unwrap();
    let t = |b: Vec<Vec<u32>>| LabeledTerm::new(b).unwrap();
    let one = Rational::one();
    let v = MomentPolynomial::from_terms(1, [(t(vec![vec![0, 0]]), one.clone()), (t(vec![vec![0], vec![0]]), -one)]).unwrap();
    let mean = Rational::new(12.into(), 5.into());
    let ss = xs.iter().fold(Rational::zero(), |acc, &x| {
        let dev = Rational::from_integer(x.into()) - mean.clone();
        acc + dev.clone() * dev
    });
    let unbiased = mobius_boot::moments::unbiased_evaluate(&v, &data).unwrap();
    assert_eq!(unbiased, ss / Rational::from_integer(4.into()));
}
