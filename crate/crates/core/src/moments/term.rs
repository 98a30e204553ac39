use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Partition;

/// Variable index into the columns of a dataset.
pub type Label = u32;

/// One moment product μ_π over a d-variate distribution.
///
/// Each block is a multiset of variable labels; the term is the product of
/// the block moments. Canonical form sorts labels inside each block and
/// blocks by `(size, labels)`, so two terms denoting the same moment
/// product compare equal. The term with no blocks is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabeledTerm {
    blocks: Vec<Vec<Label>>,
}

impl LabeledTerm {
    pub fn new(mut blocks: Vec<Vec<Label>>) -> Result<Self> {
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("moment blocks must be nonempty".into()));
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        sort_blocks(&mut blocks);
        Ok(Self { blocks })
    }

    /// Positions carrying variable labels: position `i` reads variable `labels[i]`.
    pub fn from_positions(positions: &Partition, labels: &[Label]) -> Result<Self> {
        if labels.len() != positions.m() {
            return Err(Error::Dimension { expected: positions.m(), found: labels.len() });
        }
        let blocks = positions
            .blocks()
            .into_iter()
            .map(|block| block.into_iter().map(|i| labels[i]).collect())
            .collect();
        Self::new(blocks)
    }

    /// The unlabeled lattice term: position `i` reads variable `i`.
    pub fn lattice(p: &Partition) -> Self {
        let labels: Vec<Label> = (0..p.m() as Label).collect();
        Self::from_positions(p, &labels).expect("lattice labels match positions")
    }

    pub fn constant() -> Self {
        Self { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total order `m`: number of variable slots across all blocks.
    pub fn order(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_label(&self) -> Option<Label> {
        self.blocks.iter().flatten().copied().max()
    }

    /// The position partition of the canonical form (blocks occupy
    /// consecutive positions); `None` for the constant term.
    pub fn positions(&self) -> Option<Partition> {
        if self.is_constant() {
            return None;
        }
        let owner: Vec<usize> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, block)| std::iter::repeat_n(b, block.len()))
            .collect();
        Some(Partition::canonicalize(&owner))
    }

    /// Labels in canonical position order.
    pub fn labels(&self) -> Vec<Label> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// When the labels are exactly `0..m` without repetition, the partition
    /// of `{0..m-1}` this term denotes in Π(m).
    pub fn lattice_partition(&self) -> Option<Partition> {
        let m = self.order();
        let mut owner = vec![usize::MAX; m];
        for (b, block) in self.blocks.iter().enumerate() {
            for &l in block {
                let slot = owner.get_mut(l as usize)?;
                if *slot != usize::MAX {
                    return None;
                }
                *slot = b;
            }
        }
        if m == 0 {
            return None;
        }
        Some(Partition::canonicalize(&owner))
    }

    /// Merges blocks by a restricted-growth grouping of the block indices.
    pub fn merge(&self, grouping: &[u8]) -> LabeledTerm {
        debug_assert_eq!(grouping.len(), self.blocks.len());
        let groups = grouping.iter().copied().max().map_or(0, |g| g as usize + 1);
        let mut blocks: Vec<Vec<Label>> = vec![Vec::new(); groups];
        for (block, &g) in self.blocks.iter().zip(grouping) {
            blocks[g as usize].extend_from_slice(block);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        sort_blocks(&mut blocks);
        LabeledTerm { blocks }
    }
}

fn sort_blocks(blocks: &mut [Vec<Label>]) {
    blocks.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

impl fmt::Display for LabeledTerm {
    /// `(x0 x0)(x1)`; the constant term prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return f.write_str("1");
        }
        for block in &self.blocks {
            let inner: Vec<String> = block.iter().map(|l| format!("x{l}")).collect();
            write!(f, "({})", inner.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LabeledTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledTerm{self}")
    }
}
