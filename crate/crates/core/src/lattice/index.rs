use std::collections::HashMap;

use super::numbers::bell;
use super::partition::{Partition, RgsIter};
use crate::error::{Error, Result};

/// Largest lattice order enumerated unless a caller raises the cap.
pub const DEFAULT_CAP: usize = 10;

/// All partitions of Π(m) in a fixed linear order.
///
/// The order sorts by decreasing block count and breaks ties
/// lexicographically on the restricted-growth string. It extends the
/// refinement order with the finest partition first, so any matrix moving
/// mass from finer to coarser partitions is lower triangular.
#[derive(Clone, Debug)]
pub struct LatticeIndex {
    m: usize,
    order: Vec<Partition>,
    position: HashMap<Partition, usize>,
}

pub fn enumerate_partitions(m: usize) -> Result<LatticeIndex> {
    enumerate_partitions_with_cap(m, DEFAULT_CAP)
}

pub fn enumerate_partitions_with_cap(m: usize, cap: usize) -> Result<LatticeIndex> {
    check_order(m, cap)?;
    let mut order: Vec<Partition> = RgsIter::new(m)
        .map(|rgs| Partition::from_rgs(rgs).expect("generator yields restricted-growth strings"))
        .collect();
    // Stable sort keeps the lexicographic generation order within a level.
    order.sort_by_key(|p| std::cmp::Reverse(p.block_count()));
    let position = order.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(LatticeIndex { m, order, position })
}

pub(crate) fn check_order(m: usize, cap: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Size { m, bell: "1".into(), cap });
    }
    if m > cap {
        return Err(Error::Size { m, bell: bell(m).to_string(), cap });
    }
    Ok(())
}

impl LatticeIndex {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.order
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.order[i]
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.position.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Partition> {
        self.order.iter()
    }

    /// Block count of each partition, in index order.
    pub fn block_counts(&self) -> Vec<usize> {
        self.order.iter().map(Partition::block_count).collect()
    }

    /// For each partition, the ordinals of all its coarsenings (itself included).
    pub fn coarsening_lists(&self) -> Vec<Vec<usize>> {
        self.order
            .iter()
            .map(|p| p.coarsenings().iter().map(|c| self.position[c]).collect())
            .collect()
    }

    /// Cover relations of the Hasse diagram as `(finer, coarser)` ordinals:
    /// the coarser partition merges exactly two blocks of the finer one.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (i, p) in self.order.iter().enumerate() {
            let k = p.block_count();
            for a in 0..k {
                for b in a + 1..k {
                    let merged = Partition::canonicalize(
                        &p.rgs().iter().map(|&x| if x as usize == b { a } else { x as usize }).collect::<Vec<_>>(),
                    );
                    edges.push((i, self.position[&merged]));
                }
            }
        }
        edges.sort_unstable();
        edges
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    /// Independent enumeration: canonicalize every map {0..m-1} -> {0..m-1}.
    fn brute_force(m: usize) -> HashSet<Partition> {
        let mut out = HashSet::new();
        let total = m.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let labels: Vec<usize> = (0..m)
                .map(|_| {
                    let d = c % m;
                    c /= m;
                    d
                })
                .collect();
            out.insert(Partition::canonicalize(&labels));
        }
        out
    }

    #[test]
    fn order_three_matches_figure_layout() {
        let idx = enumerate_partitions(3).unwrap();
        let text: Vec<String> = idx.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["1|2|3", "12|3", "13|2", "1|23", "123"]);
    }

    #[test]
    fn counts_match_brute_force() {
        for m in 1..=6 {
            let idx = enumerate_partitions(m).unwrap();
            let listed: HashSet<Partition> = idx.iter().cloned().collect();
            assert_eq!(listed.len(), idx.len(), "duplicates at m = {m}");
            assert_eq!(listed, brute_force(m), "m = {m}");
        }
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
    }

    #[test]
    fn rejects_out_of_range_orders() {
        assert!(matches!(enumerate_partitions(0), Err(Error::Size { .. })));
        match enumerate_partitions(11) {
            Err(Error::Size { bell, .. }) => assert_eq!(bell, "678570"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(enumerate_partitions_with_cap(3, 2).unwrap_err().to_string(),
            "partition lattice of order 3 has Bell(3) = 5 elements, above the cap m <= 2");
    }

    #[test]
    fn order_is_linear_extension() {
        let idx = enumerate_partitions(5).unwrap();
        for (i, a) in idx.iter().enumerate() {
            for (j, b) in idx.iter().enumerate() {
                if a.refines(b).unwrap() {
                    assert!(i <= j, "{a} <= {b} but placed after it");
                }
            }
        }
    }

    #[test]
    fn refinement_is_a_partial_order() {
        for m in 1..=5 {
            let idx = enumerate_partitions(m).unwrap();
            let p = idx.partitions();
            for a in p {
                assert!(a.refines(a).unwrap());
                for b in p {
                    let ab = a.refines(b).unwrap();
                    if ab && b.refines(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    if !ab {
                        continue;
                    }
                    for c in p {
                        if b.refines(c).unwrap() {
                            assert!(a.refines(c).unwrap(), "{a} <= {b} <= {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coarsenings_are_exactly_the_upper_set() {
        let idx = enumerate_partitions(5).unwrap();
        for p in idx.iter() {
            let listed: HashSet<_> = p.coarsenings().into_iter().collect();
            let expected: HashSet<_> = idx.iter().filter(|q| p.refines(q).unwrap()).cloned().collect();
            assert_eq!(listed, expected, "{p}");
            assert_eq!(listed.len(), bell_usize(p.block_count()));
        }
    }

    fn bell_usize(n: usize) -> usize {
        bell(n).to_string().parse().unwrap()
    }

    #[test]
    fn hasse_edge_counts() {
        // Cover pairs of Π(4), counted by brute force over the refinement order.
        let idx = enumerate_partitions(4).unwrap();
        let p = idx.partitions();
        let mut brute = 0;
        for a in p {
            for b in p {
                if a != b && a.refines(b).unwrap() && a.block_count() == b.block_count() + 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(idx.hasse_edges().len(), brute);
        assert_eq!(brute, 31);
        assert_eq!(enumerate_partitions(3).unwrap().hasse_edges().len(), 6);
        assert!(enumerate_partitions(1).unwrap().hasse_edges().is_empty());
    }
}
