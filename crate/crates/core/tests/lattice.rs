use mobius_boot::lattice::numbers::power;
use mobius_boot::lattice::{
    bell, enumerate_partitions, falling_factorial, mobius_matrix, stirling2, zeta_matrix, IncidenceMatrix, Partition,
};
use mobius_boot::matrix::DenseMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn refinement_is_a_partial_order() {
    for m in 1..=5 {
        let index = enumerate_partitions(m).unwrap();
        let ps = index.partitions();
        for a in ps {
            assert!(a.refines(a).unwrap());
            for b in ps {
                let ab = a.refines(b).unwrap();
                if ab && b.refines(a).unwrap() {
                    assert_eq!(a, b);
                }
                for c in ps {
                    if ab && b.refines(c).unwrap() {
                        assert!(a.refines(c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn zeta_times_mobius_is_identity() {
    for m in 1..=7 {
        let z = zeta_matrix(m).unwrap().entries;
        let mu = mobius_matrix(m).unwrap().entries;
        assert_eq!(z.matmul(&mu).unwrap(), DenseMatrix::identity(z.rows()), "m = {m}");
    }
}

#[test]
fn stirling_rows_sum_to_bell() {
    for m in 0..=12 {
        let total: BigInt = (0..=m).map(|k| stirling2(m, k)).sum();
        assert_eq!(total, bell(m), "m = {m}");
    }
}

#[test]
fn mobius_finest_to_coarsest() {
    for m in 1..=6 {
        let index = enumerate_partitions(m).unwrap();
        let mu = IncidenceMatrix::mobius(&index).entries;
        let finest = index.position(&Partition::finest(m)).unwrap();
        let coarsest = index.position(&Partition::coarsest(m)).unwrap();
        let factorial: i64 = (1..m as i64).product();
        let sign = if m % 2 == 1 { 1 } else { -1 };
        assert_eq!(*mu.get(coarsest, finest), sign * factorial, "m = {m}");
    }
}

#[test]
fn index_maps_split_by_kernel() {
    // Every map {1..m} → {1..N} has exactly one kernel partition.
    for m in 1..=8 {
        let index = enumerate_partitions(m).unwrap();
        for n in 1..=20u64 {
            let by_partition: BigInt = index.iter().map(|p| falling_factorial(n, p.block_count() as u64)).sum();
            let by_level: BigInt = (1..=m).map(|k| stirling2(m, k) * falling_factorial(n, k as u64)).sum();
            assert_eq!(by_partition, power(n, m as u64), "m = {m}, N = {n}");
            assert_eq!(by_level, power(n, m as u64), "m = {m}, N = {n}");
        }
    }
}

#[test]
fn matrices_are_lower_triangular() {
    for m in 1..=6 {
        assert!(zeta_matrix(m).unwrap().entries.is_lower_triangular());
        assert!(mobius_matrix(m).unwrap().entries.is_lower_triangular());
    }
}

fn partition_strategy(max_m: usize) -> impl Strategy<Value = Partition> {
    (1..=max_m).prop_flat_map(|m| proptest::collection::vec(0..m, m)).prop_map(|labels| {
        let m = labels.len();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (pos, l) in labels.into_iter().enumerate() {
            blocks[l].push(pos);
        }
        blocks.retain(|b| !b.is_empty());
        Partition::from_blocks(m, &blocks).unwrap()
    })
}

proptest! {
    #[test]
    fn rgs_round_trip(p in partition_strategy(9)) {
        let again = Partition::from_rgs(p.rgs().to_vec()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(Partition::from_blocks(p.m(), &p.blocks()).unwrap(), p.clone());
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Partition>().unwrap(), p);
    }

    #[test]
    fn coarsenings_are_exactly_the_refined_by(p in partition_strategy(6)) {
        let index = enumerate_partitions(p.m()).unwrap();
        let mut expected: Vec<&Partition> = index.iter().filter(|q| p.refines(q).unwrap()).collect();
        let mut listed = p.coarsenings();
        listed.sort_by_key(|q| index.position(q));
        expected.sort_by_key(|q| index.position(q));
        prop_assert_eq!(listed.iter().collect::<Vec<_>>(), expected);
    }
}
