use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::data::MomentSource;
use super::term::{Label, LabeledTerm};
use crate::error::{Error, Result};
use crate::lattice::LatticeIndex;
use crate::scalar::Scalar;

/// A finite linear combination `Σ c_π μ_π` of moment products over `d`
/// variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MomentPolynomial<T> {
    d: usize,
    terms: BTreeMap<LabeledTerm, T>,
}

impl<T: Scalar> MomentPolynomial<T> {
    pub fn zero(d: usize) -> Self {
        Self { d, terms: BTreeMap::new() }
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (LabeledTerm, T)>) -> Result<Self> {
        let mut p = Self::zero(d);
        for (term, coeff) in terms {
            p.add_term(term, coeff)?;
        }
        Ok(p)
    }

    /// Adds `coeff · term`, combining with an existing coefficient.
    pub fn add_term(&mut self, term: LabeledTerm, coeff: T) -> Result<()> {
        if let Some(l) = term.max_label() {
            if l as usize >= self.d {
                return Err(Error::LabelOutOfRange { label: l as usize, d: self.d });
            }
        }
        self.add_unchecked(term, coeff);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, term: LabeledTerm, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &LabeledTerm) -> T {
        self.terms.get(term).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LabeledTerm, &T)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Dimension { expected: self.d, found: other.d });
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_unchecked(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.d);
        for (t, c) in &self.terms {
            out.add_unchecked(t.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// `Σ |c_π|`.
    pub fn one_norm(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc + c.abs())
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(LabeledTerm::order).max().unwrap_or(0)
    }

    pub fn max_block_count(&self) -> usize {
        self.terms.keys().map(LabeledTerm::block_count).max().unwrap_or(0)
    }

    /// `Σ c_π Π_{B ∈ π} moment(B)`; each distinct block moment is fetched once.
    pub fn evaluate(&self, source: &impl MomentSource<T>) -> Result<T> {
        let mut cache: HashMap<&[Label], T> = HashMap::new();
        let mut total = T::zero();
        for (term, coeff) in &self.terms {
            let mut product = coeff.clone();
            for block in term.blocks() {
                let v = match cache.get(block.as_slice()) {
                    Some(v) => v.clone(),
                    None => {
                        let v = source.moment(block)?;
                        cache.insert(block, v.clone());
                        v
                    }
                };
                product *= v;
            }
            total += product;
        }
        Ok(total)
    }

    /// The polynomial `Σ_π f_π μ_π` over Π(m) with `d = m`, position `i`
    /// reading variable `i`.
    pub fn from_lattice_vector(index: &LatticeIndex, f: &[T]) -> Result<Self> {
        if f.len() != index.len() {
            return Err(Error::Dimension { expected: index.len(), found: f.len() });
        }
        let mut p = Self::zero(index.m());
        for (pi, c) in index.iter().zip(f) {
            p.add_unchecked(LabeledTerm::lattice(pi), c.clone());
        }
        Ok(p)
    }

    /// Inverse of [`Self::from_lattice_vector`]; fails on terms outside Π(m).
    pub fn to_lattice_vector(&self, index: &LatticeIndex) -> Result<Vec<T>> {
        let mut f = vec![T::zero(); index.len()];
        for (term, c) in &self.terms {
            let pos = term
                .lattice_partition()
                .filter(|p| p.m() == index.m())
                .and_then(|p| index.position(&p))
                .ok_or_else(|| {
                    Error::InvalidInput(format!("term {term} is not an element of the lattice of order {}", index.m()))
                })?;
            f[pos] = c.clone();
        }
        Ok(f)
    }

    pub fn to_f64(&self) -> MomentPolynomial<f64> {
        let mut out = MomentPolynomial::zero(self.d);
        for (t, c) in &self.terms {
            out.add_unchecked(t.clone(), c.to_f64());
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value())?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = PolynomialDoc {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermDoc { blocks: t.blocks().to_vec(), coeff: c.to_text() })
                .collect(),
        };
        serde_json::to_value(doc).expect("polynomial documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolynomialDoc = serde_json::from_str(text)?;
        if doc.d == 0 {
            return Err(Error::InvalidInput("d must be positive".into()));
        }
        let mut p = Self::zero(doc.d);
        for term in doc.terms {
            let coeff = T::parse_str(&term.coeff)?;
            p.add_term(LabeledTerm::new(term.blocks)?, coeff)?;
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialDoc {
    d: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    blocks: Vec<Vec<Label>>,
    #[serde(deserialize_with = "coeff_text")]
    coeff: String,
}

/// Coefficients are written as strings but numbers are accepted too.
fn coeff_text<'de, D: serde::Deserializer<'de>>(de: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Number(serde_json::Number),
    }
    Ok(match Raw::deserialize(de)? {
        Raw::Text(s) => s,
        Raw::Number(n) => n.to_string(),
    })
}

impl<T: Scalar> fmt::Debug for MomentPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MomentPolynomial(d={}; ", self.d)?;
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{t}", c.to_text())?;
        }
        f.write_str(")")
    }
}
