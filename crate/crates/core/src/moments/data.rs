use std::collections::HashMap;
use std::io::Read;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::term::Label;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Anything that can report the moment `E[Π_{l ∈ block} x_l]` of a block.
pub trait MomentSource<T> {
    fn d(&self) -> usize;

    /// Moment of a label multiset; the empty block has moment 1.
    fn moment(&self, block: &[Label]) -> Result<T>;
}

/// An `N × d` sample matrix, one sample per row.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    n: usize,
    d: usize,
    values: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("dataset needs at least one row".into()));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::InvalidInput("dataset needs at least one column".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::Dimension { expected: d, found: bad.len() });
        }
        let values: Vec<T> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::InvalidInput("dataset entries must be finite".into()));
        }
        Ok(Self { n, d, values })
    }

    /// One sample per line, `d` numeric columns. A first line that does not
    /// parse as numbers is taken as a header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows = Vec::new();
        for (line, record) in csv.records().enumerate() {
            let record = record?;
            let parsed: Result<Vec<T>> = record.iter().map(T::parse_str).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("data row {}: {e}", line + 1))),
            }
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.d)
    }

    /// A new dataset made of the given rows of this one, repetitions allowed.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset<T> {
        let mut values = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Dataset { n: indices.len(), d: self.d, values }
    }

    pub(crate) fn check_labels(&self, block: &[Label]) -> Result<()> {
        match block.iter().find(|&&l| l as usize >= self.d) {
            Some(&l) => Err(Error::LabelOutOfRange { label: l as usize, d: self.d }),
            None => Ok(()),
        }
    }

    /// `Π_{l ∈ block} row[l]` for every row.
    pub(crate) fn block_products(&self, block: &[Label]) -> Vec<T> {
        self.rows()
            .map(|row| block.iter().fold(T::one(), |acc, &l| acc * row[l as usize].clone()))
            .collect()
    }
}

/// `(1/N) Σ_rows Π_{l ∈ block} row[l]`.
pub fn empirical_moment<T: Scalar>(data: &Dataset<T>, block: &[Label]) -> Result<T> {
    data.check_labels(block)?;
    let sum = data.block_products(block).into_iter().fold(T::zero(), |a, b| a + b);
    Ok(sum / T::from_u64(data.n() as u64))
}

impl<T: Scalar> MomentSource<T> for Dataset<T> {
    fn d(&self) -> usize {
        self.d
    }

    fn moment(&self, block: &[Label]) -> Result<T> {
        empirical_moment(self, block)
    }
}

/// Moments keyed by sorted label multisets.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    d: usize,
    values: HashMap<Vec<Label>, T>,
}

impl<T: Scalar> MomentTable<T> {
    pub fn new(d: usize) -> Self {
        Self { d, values: HashMap::new() }
    }

    pub fn insert(&mut self, block: &[Label], value: T) -> Result<()> {
        if let Some(&l) = block.iter().find(|&&l| l as usize >= self.d) {
            return Err(Error::LabelOutOfRange { label: l as usize, d: self.d });
        }
        let mut key = block.to_vec();
        key.sort_unstable();
        self.values.insert(key, value);
        Ok(())
    }

    /// Tabulates every block moment of total order `1..=max_order` from a source.
    pub fn tabulate(source: &impl MomentSource<T>, max_order: usize) -> Result<Self> {
        let mut table = Self::new(source.d());
        for order in 1..=max_order {
            for block in multisets(source.d(), order) {
                let v = source.moment(&block)?;
                table.values.insert(block, v);
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries sorted by `(order, labels)`.
    pub fn entries(&self) -> Vec<(Vec<Label>, T)> {
        let mut out: Vec<_> = self.values.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

impl<T: Scalar> MomentSource<T> for MomentTable<T> {
    fn d(&self) -> usize {
        self.d
    }

    fn moment(&self, block: &[Label]) -> Result<T> {
        if block.is_empty() {
            return Ok(T::one());
        }
        let mut key = block.to_vec();
        key.sort_unstable();
        self.values.get(&key).cloned().ok_or_else(|| Error::MissingMoment(format!("{key:?}")))
    }
}

/// Sorted label multisets of a given size over `d` variables.
fn multisets(d: usize, size: usize) -> Vec<Vec<Label>> {
    fn rec(d: usize, size: usize, start: Label, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for l in start..d as Label {
            cur.push(l);
            rec(d, size, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Independent normal coordinates `x_l ~ N(mean_l, variance_l)` with
/// analytic moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalPopulation<T> {
    pub mean: Vec<T>,
    pub variance: Vec<T>,
}

impl<T: Scalar> NormalPopulation<T> {
    pub fn new(mean: Vec<T>, variance: Vec<T>) -> Result<Self> {
        if mean.len() != variance.len() {
            return Err(Error::Dimension { expected: mean.len(), found: variance.len() });
        }
        if mean.is_empty() {
            return Err(Error::InvalidInput("normal population needs at least one coordinate".into()));
        }
        if variance.iter().any(|v| *v < T::zero()) {
            return Err(Error::InvalidInput("variances must be nonnegative".into()));
        }
        Ok(Self { mean, variance })
    }

    pub fn standard(d: usize) -> Self {
        Self { mean: vec![T::zero(); d], variance: vec![T::one(); d] }
    }

    /// `E[x^k]` for `x ~ N(μ, v)`: `Σ_{j even} C(k, j) μ^{k-j} v^{j/2} (j-1)!!`.
    pub fn raw_moment(&self, coordinate: usize, k: usize) -> T {
        let mu = &self.mean[coordinate];
        let v = &self.variance[coordinate];
        let mut total = T::zero();
        let mut binom = BigInt::one();
        let mut double_fact = BigInt::one();
        for j in 0..=k {
            if j > 0 {
                binom = binom * BigInt::from(k - j + 1) / BigInt::from(j);
            }
            if j % 2 == 0 {
                if j >= 2 {
                    double_fact *= BigInt::from(j - 1);
                }
                let term = T::from_bigint(&(&binom * &double_fact))
                    * pow(mu, k - j)
                    * pow(v, j / 2);
                total += term;
            }
        }
        total
    }
}

fn pow<T: Scalar>(x: &T, e: usize) -> T {
    (0..e).fold(T::one(), |acc, _| acc * x.clone())
}

impl<T: Scalar> MomentSource<T> for NormalPopulation<T> {
    fn d(&self) -> usize {
        self.mean.len()
    }

    fn moment(&self, block: &[Label]) -> Result<T> {
        let d = self.mean.len();
        let mut counts = vec![0usize; d];
        for &l in block {
            *counts.get_mut(l as usize).ok_or(Error::LabelOutOfRange { label: l as usize, d })? += 1;
        }
        Ok(counts
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .fold(T::one(), |acc, (c, &k)| acc * self.raw_moment(c, k)))
    }
}
