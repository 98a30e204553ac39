use std::fs;
use std::path::Path;

use mobius_boot::debias::{BiasMode, StepSchedule};
use mobius_boot::mc::Population;
use mobius_boot::moments::{Dataset, Label, LabeledTerm, MomentPolynomial, MomentSource, MomentTable, NormalPopulation};
use mobius_boot::{Error, Result, Scalar};
use serde_json::Value;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// A functional JSON file, or `builtin:variance` / `builtin:mean` for one variable.
pub fn functional<T: Scalar>(spec: &str) -> Result<MomentPolynomial<T>> {
    let term = |blocks: Vec<Vec<Label>>| LabeledTerm::new(blocks);
    match spec {
        "builtin:variance" => {
            MomentPolynomial::from_terms(1, [(term(vec![vec![0, 0]])?, T::one()), (term(vec![vec![0], vec![0]])?, -T::one())])
        }
        "builtin:mean" => MomentPolynomial::from_terms(1, [(term(vec![vec![0]])?, T::one())]),
        s if s.starts_with("builtin:") => Err(Error::InvalidInput(format!("unknown builtin functional {s:?}"))),
        path => MomentPolynomial::from_json(&read(Path::new(path))?),
    }
}

pub fn dataset<T: Scalar>(path: &Path) -> Result<Dataset<T>> {
    let file = fs::File::open(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Dataset::from_csv_reader(file)
}

/// Ground truth for bias computations.
pub enum PopulationInput<T> {
    Normal(NormalPopulation<T>),
    Table(MomentTable<T>),
    Dataset(Dataset<T>),
}

impl<T: Scalar> MomentSource<T> for PopulationInput<T> {
    fn d(&self) -> usize {
        match self {
            PopulationInput::Normal(p) => p.d(),
            PopulationInput::Table(t) => t.d(),
            PopulationInput::Dataset(x) => x.d(),
        }
    }

    fn moment(&self, block: &[Label]) -> Result<T> {
        match self {
            PopulationInput::Normal(p) => p.moment(block),
            PopulationInput::Table(t) => t.moment(block),
            PopulationInput::Dataset(x) => x.moment(block),
        }
    }
}

impl<T: Scalar> PopulationInput<T> {
    /// A `.csv` path is an empirical population; anything else is JSON,
    /// either `{"kind": "normal", "mean": [..], "variance": [..]}` or
    /// `{"kind": "moments", "d": .., "moments": [{"block": [..], "value": ..}]}`.
    pub fn load(path: &Path) -> Result<Self> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            return Ok(PopulationInput::Dataset(dataset(path)?));
        }
        let doc: Value = serde_json::from_str(&read(path)?)?;
        match doc.get("kind").and_then(Value::as_str) {
            Some("normal") => {
                let mean = scalars(doc.get("mean"), "mean")?;
                let variance = scalars(doc.get("variance"), "variance")?;
                Ok(PopulationInput::Normal(NormalPopulation::new(mean, variance)?))
            }
            Some("moments") => {
                let d = doc.get("d").and_then(Value::as_u64).ok_or_else(|| bad("moments population needs \"d\""))?;
                let mut table = MomentTable::new(d as usize);
                let entries = doc.get("moments").and_then(Value::as_array).ok_or_else(|| bad("missing \"moments\""))?;
                for entry in entries {
                    let block: Vec<Label> = serde_json::from_value(entry.get("block").cloned().unwrap_or(Value::Null))?;
                    table.insert(&block, scalar(entry.get("value"), "value")?)?;
                }
                Ok(PopulationInput::Table(table))
            }
            other => Err(bad(&format!("population kind must be \"normal\" or \"moments\", got {other:?}"))),
        }
    }

    /// The samplable form, if there is one.
    pub fn sampler(self) -> Result<Population<T>> {
        match self {
            PopulationInput::Normal(p) => Ok(Population::Normal(p)),
            PopulationInput::Dataset(x) => Ok(Population::Empirical(x)),
            PopulationInput::Table(_) => Err(bad("a moment table cannot be sampled; use a normal or a CSV population")),
        }
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(msg.into())
}

fn scalar<T: Scalar>(v: Option<&Value>, what: &str) -> Result<T> {
    match v {
        Some(Value::String(s)) => T::parse_str(s),
        Some(Value::Number(n)) => T::parse_str(&n.to_string()),
        _ => Err(bad(&format!("{what} must be a number or a string"))),
    }
}

fn scalars<T: Scalar>(v: Option<&Value>, what: &str) -> Result<Vec<T>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| bad(&format!("{what} must be an array")))?
        .iter()
        .map(|x| scalar(Some(x), what))
        .collect()
}

/// `unit` (the iterated bootstrap), `default`, or a list of step sizes.
pub fn bias_mode<T: Scalar>(schedule: &str, n: u64, k: usize) -> Result<BiasMode<T>> {
    match schedule {
        "unit" | "stationary" => Ok(BiasMode::Stationary),
        "default" => Ok(BiasMode::Schedule(StepSchedule::default_for(n, k)?)),
        list => Ok(BiasMode::Schedule(StepSchedule::parse(n, list)?)),
    }
}
