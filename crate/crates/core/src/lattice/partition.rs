use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A set partition of the positions `{0, .., m-1}`.
///
/// Stored as a restricted-growth string: position `i` carries the index of
/// its block, blocks numbered by first appearance. The encoding is unique,
/// so derived equality and hashing are equality of partitions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<u8>,
}

impl Partition {
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::EmptyOrder);
        }
        if rgs.len() > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("partition of {} positions is too large", rgs.len())));
        }
        let mut next = 0u8;
        for &b in &rgs {
            if b > next {
                return Err(Error::InvalidInput(format!("{rgs:?} is not a restricted-growth string")));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(Self { rgs })
    }

    /// Builds a partition from 0-based blocks covering `{0, .., m-1}` exactly once.
    pub fn from_blocks(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyOrder);
        }
        let mut owner = vec![usize::MAX; m];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            for &i in block {
                if i >= m {
                    return Err(Error::InvalidInput(format!("position {} outside 1..={m}", i + 1)));
                }
                if owner[i] != usize::MAX {
                    return Err(Error::InvalidInput(format!("position {} appears twice", i + 1)));
                }
                owner[i] = b;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInput(format!("position {} is not covered", i + 1)));
        }
        Ok(Self::canonicalize(&owner))
    }

    /// Renumbers arbitrary block labels by first appearance.
    pub(crate) fn canonicalize(labels: &[usize]) -> Self {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let rgs = labels
            .iter()
            .map(|&l| match map.iter().find(|(k, _)| *k == l) {
                Some(&(_, v)) => v,
                None => {
                    let v = map.len() as u8;
                    map.push((l, v));
                    v
                }
            })
            .collect();
        Self { rgs }
    }

    /// Every position in its own block.
    pub fn finest(m: usize) -> Self {
        Self { rgs: (0..m as u8).collect() }
    }

    /// A single block.
    pub fn coarsest(m: usize) -> Self {
        Self { rgs: vec![0; m] }
    }

    pub fn m(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |b| b as usize + 1)
    }

    pub fn block_of(&self, position: usize) -> usize {
        self.rgs[position] as usize
    }

    /// Blocks as ascending 0-based position lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i);
        }
        blocks
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.m() != other.m() {
            return Err(Error::Dimension { expected: self.m(), found: other.m() });
        }
        let mut target = vec![u8::MAX; self.block_count()];
        for (&mine, &theirs) in self.rgs.iter().zip(&other.rgs) {
            let slot = &mut target[mine as usize];
            if *slot == u8::MAX {
                *slot = theirs;
            } else if *slot != theirs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Merges blocks according to `grouping`, a partition of this partition's
    /// blocks (so `grouping.m() == self.block_count()`).
    pub fn merge(&self, grouping: &Partition) -> Result<Partition> {
        if grouping.m() != self.block_count() {
            return Err(Error::Dimension { expected: self.block_count(), found: grouping.m() });
        }
        // Blocks first appear in index order, so relabelling through a
        // restricted-growth grouping is again restricted-growth.
        Ok(Partition { rgs: self.rgs.iter().map(|&b| grouping.rgs[b as usize]).collect() })
    }

    /// All `π̃ ≥ self`, one per partition of the block set; includes `self`.
    pub fn coarsenings(&self) -> Vec<Partition> {
        RgsIter::new(self.block_count())
            .map(|grouping| Partition { rgs: self.rgs.iter().map(|&b| grouping[b as usize]).collect() })
            .collect()
    }
}

impl fmt::Display for Partition {
    /// `13|2|4`: 1-based elements, blocks by least element. Above nine
    /// positions elements inside a block are comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.m() > 9 { "," } else { "" };
        let text = self
            .blocks()
            .iter()
            .map(|block| block.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep))
            .collect::<Vec<_>>()
            .join("|");
        f.write_str(&text)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        let comma_separated = s.contains(',');
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let elements: Vec<usize> = if comma_separated {
                part.split(',')
                    .map(|e| e.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("bad block {part:?} in {s:?}")))?
            } else {
                part.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse(format!("bad block {part:?} in {s:?}")))?
            };
            if elements.contains(&0) {
                return Err(Error::Parse(format!("elements are 1-based in {s:?}")));
            }
            blocks.push(elements.into_iter().map(|e| e - 1).collect::<Vec<_>>());
        }
        let m = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(m, &blocks).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Restricted-growth strings of a fixed length in lexicographic order.
pub(crate) struct RgsIter {
    current: Option<Vec<u8>>,
}

impl RgsIter {
    pub(crate) fn new(len: usize) -> Self {
        Self { current: Some(vec![0; len]) }
    }
}

impl Iterator for RgsIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // Prefix maxima decide how far each position may grow.
        let mut prefix_max = Vec::with_capacity(next.len());
        let mut running = 0u8;
        for &v in &next {
            running = running.max(v);
            prefix_max.push(running);
        }
        for i in (1..next.len()).rev() {
            if next[i] <= prefix_max[i - 1] {
                next[i] += 1;
                for v in &mut next[i + 1..] {
                    *v = 0;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["1|2|3", "12|3", "13|2", "1|23", "123", "13|2|4", "1"] {
            assert_eq!(p(s).to_string(), s);
        }
        // Blocks and elements may be given in any order.
        assert_eq!(p("23|1"), p("1|23"));
        assert_eq!(p("31|2"), p("13|2"));
    }

    #[test]
    fn rejects_malformed_text() {
        for s in ["", "1|1", "13", "1|x", "0|1", "12||3"] {
            assert!(s.parse::<Partition>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn long_partitions_use_commas() {
        let pi = Partition::from_blocks(11, &[(0..10).collect(), vec![10]]).unwrap();
        assert_eq!(pi.to_string(), "1,2,3,4,5,6,7,8,9,10|11");
        assert_eq!(p("1,2,3,4,5,6,7,8,9,10|11"), pi);
    }

    #[test]
    fn refinement_examples() {
        assert!(p("1|2|3").refines(&p("12|3")).unwrap());
        assert!(p("12|3").refines(&p("12|3")).unwrap());
        assert!(!p("12|3").refines(&p("13|2")).unwrap());
        assert!(!p("123").refines(&p("12|3")).unwrap());
        assert!(p("12|3").refines(&p("12")).is_err());
    }

    #[test]
    fn coarsening_examples() {
        assert_eq!(p("1|2|3").coarsenings().len(), 5);
        let mut c = p("12|3").coarsenings();
        c.sort();
        let mut expected = vec![p("12|3"), p("123")];
        expected.sort();
        assert_eq!(c, expected);
        assert_eq!(p("123").coarsenings(), vec![p("123")]);
    }

    #[test]
    fn rgs_validation() {
        assert!(Partition::from_rgs(vec![0, 1, 0, 2]).is_ok());
        assert!(Partition::from_rgs(vec![1, 0]).is_err());
        assert!(Partition::from_rgs(vec![0, 2]).is_err());
        assert!(Partition::from_rgs(vec![]).is_err());
    }

    #[test]
    fn rgs_iter_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| RgsIter::new(n).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        let all: Vec<_> = RgsIter::new(3).collect();
        assert_eq!(all, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    }
}
