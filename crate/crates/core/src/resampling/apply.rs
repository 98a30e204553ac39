use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::sampling::check_n;
use crate::error::Result;
use crate::lattice::numbers::power;
use crate::lattice::{check_order, falling_factorial, RgsIter, DEFAULT_CAP};
use crate::moments::{Label, LabeledTerm, MomentPolynomial};
use crate::scalar::{Rational, Scalar};

/// One resampling round on a moment polynomial: each term `c μ_π` sends
/// `c · falling(N, #π̃) / N^{#π}` to every coarsening `π̃ ≥ π`, merging the
/// label multisets of grouped blocks.
pub fn apply_s<T: Scalar>(f: &MomentPolynomial<T>, n: u64) -> Result<MomentPolynomial<T>> {
    check_n(n)?;
    let flow = Flow::build(f)?;
    let mut out = MomentPolynomial::zero(f.d());
    if T::EXACT {
        for (term, value) in flow.accumulate_exact(f, n) {
            out.add_unchecked(term, T::from_rational(&value));
        }
    } else {
        for (term, value) in flow.accumulate(f, n) {
            out.add_unchecked(term, value);
        }
    }
    Ok(out)
}

/// Every term reachable from `f` by merging blocks, the terms of `f` included.
pub fn coarsened_terms<T: Scalar>(f: &MomentPolynomial<T>) -> Result<Vec<LabeledTerm>> {
    Ok(Flow::build(f)?.targets)
}

/// Every (source term, coarsened target) pair, targets interned.
struct Flow {
    targets: Vec<LabeledTerm>,
    target_blocks: Vec<usize>,
    /// For each source term in iteration order, its target ids.
    edges: Vec<Vec<u32>>,
}

impl Flow {
    fn build<T: Scalar>(f: &MomentPolynomial<T>) -> Result<Self> {
        let mut groupings: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
        let mut ids: HashMap<Vec<Vec<Label>>, u32> = HashMap::new();
        let mut targets = Vec::new();
        let mut target_blocks = Vec::new();
        let mut edges = Vec::with_capacity(f.len());
        let mut scratch: Vec<Vec<Label>> = Vec::new();

        for (term, _) in f.terms() {
            let k = term.block_count();
            if k > 0 {
                check_order(k, DEFAULT_CAP)?;
            }
            let list = groupings.entry(k).or_insert_with(|| RgsIter::new(k).collect());
            let mut out = Vec::with_capacity(list.len());
            for grouping in list.iter() {
                let groups = grouping.iter().copied().max().map_or(0, |g| g as usize + 1);
                if scratch.len() < groups {
                    scratch.resize_with(groups, Vec::new);
                }
                for g in &mut scratch[..groups] {
                    g.clear();
                }
                for (block, &g) in term.blocks().iter().zip(grouping) {
                    scratch[g as usize].extend_from_slice(block);
                }
                let key = &mut scratch[..groups];
                for g in key.iter_mut() {
                    g.sort_unstable();
                }
                key.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
                let id = match ids.get(&*key) {
                    Some(&id) => id,
                    None => {
                        let id = targets.len() as u32;
                        let owned = key.to_vec();
                        targets.push(LabeledTerm::new(owned.clone())?);
                        target_blocks.push(groups);
                        ids.insert(owned, id);
                        id
                    }
                };
                out.push(id);
            }
            edges.push(out);
        }
        Ok(Self { targets, target_blocks, edges })
    }

    /// Integer accumulation over the common denominator `L · N^K`.
    fn accumulate_exact<T: Scalar>(self, f: &MomentPolynomial<T>, n: u64) -> Vec<(LabeledTerm, Rational)> {
        let coeffs: Vec<(Rational, usize)> = f.terms().map(|(t, c)| (c.to_rational(), t.block_count())).collect();
        let lcm = coeffs.iter().fold(BigInt::one(), |l, (c, _)| l.lcm(c.denom()));
        let top = coeffs.iter().map(|&(_, k)| k).max().unwrap_or(0);
        let pows: Vec<BigInt> = (0..=top as u64).map(|k| power(n, k)).collect();

        let mut acc = vec![BigInt::zero(); self.targets.len()];
        for ((c, k), targets) in coeffs.iter().zip(&self.edges) {
            let weight = c.numer() * (&lcm / c.denom()) * &pows[top - k];
            for &t in targets {
                acc[t as usize] += &weight;
            }
        }
        let denom = lcm * &pows[top];
        let falling: Vec<BigInt> = (0..=top as u64).map(|k| falling_factorial(n, k)).collect();
        self.targets
            .into_iter()
            .zip(self.target_blocks)
            .zip(acc)
            .map(|((term, k), a)| (term, Rational::new(a * &falling[k], denom.clone())))
            .collect()
    }

    fn accumulate<T: Scalar>(self, f: &MomentPolynomial<T>, n: u64) -> Vec<(LabeledTerm, T)> {
        let top = f.max_block_count();
        let inv_pow: Vec<T> = (0..=top as u64).map(|k| T::from_ratio(&BigInt::one(), &power(n, k))).collect();
        let falling: Vec<T> = (0..=top as u64).map(|k| T::from_bigint(&falling_factorial(n, k))).collect();
        let mut acc = vec![T::zero(); self.targets.len()];
        for ((term, c), targets) in f.terms().zip(&self.edges) {
            let weight = c.clone() * inv_pow[term.block_count()].clone();
            for &t in targets {
                acc[t as usize] += weight.clone();
            }
        }
        self.targets
            .into_iter()
            .zip(self.target_blocks)
            .zip(acc)
            .map(|((term, k), a)| (term, a * falling[k].clone()))
            .collect()
    }
}
