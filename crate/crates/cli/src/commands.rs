use std::fs;
use std::path::Path;

use mobius_boot::debias::{
    bandlimited_bound, exact_bias, general_bound, linear_cut, neumann_trace_bound, BiasMode, BoundResult,
};
use mobius_boot::lattice::numbers::power;
use mobius_boot::lattice::{enumerate_partitions, falling_factorial, IncidenceMatrix, LatticeIndex};
use mobius_boot::matrix::DenseMatrix;
use mobius_boot::mc::{
    bias_experiment, exhaustive_estimate, mc_estimate, ChainStart, EstimatorCoefficients,
};
use mobius_boot::moments::{Dataset, MomentPolynomial};
use mobius_boot::resampling::{
    apply_s, factorization_with, linear_regime_n, log_gamma_ratio, reduced_matrix, SamplingMatrix,
};
use mobius_boot::{selftest, Error, Rational, Result, Scalar};

use crate::inputs::{self, PopulationInput};
use crate::output::{Artifact, Table};

fn matrix_table<T: Clone>(name: &str, index: &LatticeIndex, m: &DenseMatrix<T>, cell: impl Fn(&T) -> String) -> Table {
    let mut header = vec!["partition".to_string()];
    header.extend(index.iter().map(|p| p.to_string()));
    let mut t = Table::with_header(name, header);
    for (i, p) in index.iter().enumerate() {
        let mut row = vec![p.to_string()];
        row.extend(m.row(i).iter().map(&cell));
        t.push(row);
    }
    t
}

fn partition_table(index: &LatticeIndex) -> Table {
    let mut t = Table::new("partitions", &["index", "partition", "rgs", "block_count"]);
    for (i, p) in index.iter().enumerate() {
        let rgs: String = p.rgs().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        t.push([i.to_string(), p.to_string(), rgs, p.block_count().to_string()]);
    }
    t
}

pub fn lattice(m: usize) -> Result<Artifact> {
    let index = enumerate_partitions(m)?;
    let mut a = Artifact::default();
    a.push(partition_table(&index));
    let mut edges = Table::new("hasse_edges", &["finer", "coarser", "finer_partition", "coarser_partition"]);
    for (lo, hi) in index.hasse_edges() {
        edges.push([lo.to_string(), hi.to_string(), index.get(lo).to_string(), index.get(hi).to_string()]);
    }
    a.push(edges);
    a.push(matrix_table("zeta", &index, &IncidenceMatrix::zeta(&index).entries, i64::to_string));
    a.push(matrix_table("mobius", &index, &IncidenceMatrix::mobius(&index).entries, i64::to_string));
    Ok(a)
}

pub fn smatrix<T: Scalar>(m: usize, n: u64, reduced: bool) -> Result<Artifact> {
    let mut a = Artifact::default();
    if reduced {
        let r = reduced_matrix::<T>(m, n)?;
        let mut header = vec!["level".to_string()];
        header.extend((1..=m).map(|j| j.to_string()));
        let mut t = Table::with_header("reduced_matrix", header);
        for i in 0..m {
            let mut row = vec![(i + 1).to_string()];
            row.extend(r.entries.row(i).iter().map(Scalar::to_text));
            t.push(row);
        }
        a.push(t);
        let mut levels = Table::new("level_scalings", &["level", "r", "c"]);
        for i in 1..=m as u64 {
            levels.push([i.to_string(), falling_factorial(n, i).to_string(), power(n, i).to_string()]);
        }
        a.push(levels);
        return Ok(a);
    }
    let index = enumerate_partitions(m)?;
    let s = SamplingMatrix::<T>::new(&index, n)?;
    let fact = factorization_with(&s)?;
    a.push(partition_table(&index));
    a.push(matrix_table("sampling_matrix", &index, &s.entries, Scalar::to_text));
    let mut scalings = Table::new("scalings", &["partition", "block_count", "r", "c"]);
    for (i, p) in index.iter().enumerate() {
        scalings.push([p.to_string(), p.block_count().to_string(), fact.r[i].to_text(), fact.c[i].to_text()]);
    }
    a.push(scalings);
    let mut f = Table::new("factorization", &["form", "holds"]);
    f.push(["C^-1 zeta R", &fact.literal_check.to_string()]);
    f.push(["R zeta C^-1", &fact.check.to_string()]);
    a.push(f);
    Ok(a)
}

pub struct BiasArgs<'a> {
    pub functional: &'a str,
    pub population: &'a Path,
    pub n: u64,
    pub k: usize,
    pub schedule: &'a str,
    pub emit_functional: Option<&'a Path>,
}

pub fn bias<T: Scalar>(args: &BiasArgs) -> Result<Artifact> {
    let f = inputs::functional::<T>(args.functional)?;
    let population = PopulationInput::<T>::load(args.population)?;
    let mode = inputs::bias_mode::<T>(args.schedule, args.n, args.k)?;
    let report = exact_bias(&f, args.n, args.k, &population, &mode)?;

    let mut a = Artifact::default();
    let mut summary = Table::new("summary", &["n", "mode", "etas", "mu_inf", "f_one"]);
    summary.push([args.n.to_string(), mode_name(&mode).into(), etas_text(&mode), report.mu_inf.to_text(), report.f_one.to_text()]);
    a.push(summary);
    let mut t = Table::new("bias", &["k", "signed_bias", "abs_bias", "signed_bias_decimal", "bound"]);
    let mut coeffs = Table::new("coefficients", &["k", "term", "coefficient"]);
    for r in &report.records {
        t.push([
            r.k.to_string(),
            r.signed_bias.to_text(),
            r.abs_bias.to_text(),
            r.signed_bias.to_f64().to_string(),
            r.bound.map(|b| b.to_string()).unwrap_or_default(),
        ]);
        for (term, c) in r.coefficients.terms() {
            coeffs.push([r.k.to_string(), term.to_string(), c.to_text()]);
        }
    }
    a.push(t);
    a.push(coeffs);
    if let Some(path) = args.emit_functional {
        let last = &report.records.last().expect("k + 1 records").coefficients;
        fs::write(path, last.to_json()? + "\n")?;
    }
    Ok(a)
}

fn mode_name<T>(mode: &BiasMode<T>) -> &'static str {
    match mode {
        BiasMode::Stationary => "stationary",
        BiasMode::Schedule(_) => "schedule",
    }
}

fn etas_text<T: Scalar>(mode: &BiasMode<T>) -> String {
    match mode {
        BiasMode::Stationary => String::new(),
        BiasMode::Schedule(s) => s.etas.iter().map(Scalar::to_text).collect::<Vec<_>>().join(" "),
    }
}

fn coefficients<T: Scalar>(mode: &BiasMode<T>, k: usize) -> Result<EstimatorCoefficients<T>> {
    match mode {
        BiasMode::Stationary => Ok(EstimatorCoefficients::stationary(k)),
        BiasMode::Schedule(s) if s.len() >= k => Ok(EstimatorCoefficients::from_etas(&s.etas[..k])),
        BiasMode::Schedule(s) => Err(Error::InvalidInput(format!("schedule has {} steps, asked for {k}", s.len()))),
    }
}

/// `Σ_j a_j S^j F`, one more `S` when the chain starts from a resample.
fn coefficient_space<T: Scalar>(
    f: &MomentPolynomial<T>,
    coeffs: &EstimatorCoefficients<T>,
    n: u64,
    start: ChainStart,
) -> Result<MomentPolynomial<T>> {
    let mut power = f.clone();
    let mut total = MomentPolynomial::zero(f.d());
    for (j, a) in coeffs.coeffs.iter().enumerate() {
        if j > 0 {
            power = apply_s(&power, n)?;
        }
        total = total.add(&power.scale(a))?;
    }
    match start {
        ChainStart::Data => Ok(total),
        ChainStart::Resample => apply_s(&total, n),
    }
}

fn coefficient_table<T: Scalar>(coeffs: &EstimatorCoefficients<T>) -> Table {
    let mut t = Table::new("coefficients", &["level", "coefficient"]);
    for (j, a) in coeffs.coeffs.iter().enumerate() {
        t.push([(j + 1).to_string(), a.to_text()]);
    }
    t
}

pub struct McArgs<'a> {
    pub functional: &'a str,
    pub data: Option<&'a Path>,
    pub population: Option<&'a Path>,
    pub n: Option<u64>,
    pub k: usize,
    pub schedule: &'a str,
    pub replicas: usize,
    pub seed: u64,
    pub exhaustive: bool,
    pub start: ChainStart,
}

pub fn mc_run(args: &McArgs) -> Result<Artifact> {
    match (args.data, args.population) {
        (Some(data), None) => mc_on_data(args, data),
        (None, Some(population)) => mc_on_population(args, population),
        _ => Err(Error::InvalidInput("give exactly one of --data and --population".into())),
    }
}

fn data_n<T: Scalar>(args: &McArgs, data: &Dataset<T>) -> Result<u64> {
    let rows = data.n() as u64;
    match args.n {
        Some(n) if n != rows => Err(Error::InvalidInput(format!("--n {n} does not match the {rows} data rows"))),
        _ => Ok(rows),
    }
}

fn mc_on_data(args: &McArgs, path: &Path) -> Result<Artifact> {
    let mut a = Artifact::default();
    if args.exhaustive {
        let data = inputs::dataset::<Rational>(path)?;
        let n = data_n(args, &data)?;
        let f = inputs::functional::<Rational>(args.functional)?;
        let coeffs = coefficients(&inputs::bias_mode::<Rational>(args.schedule, n, args.k)?, args.k)?;
        let value = exhaustive_estimate(&f, &data, &coeffs, args.start)?;
        let target = coefficient_space(&f, &coeffs, n, args.start)?.evaluate(&data)?;
        let mut t = Table::new("exhaustive", &["n", "estimate", "estimate_decimal", "coefficient_space", "agrees"]);
        t.push([n.to_string(), value.to_text(), value.to_f64().to_string(), target.to_text(), (value == target).to_string()]);
        a.push(t);
        a.push(coefficient_table(&coeffs));
        return Ok(a);
    }
    let data = inputs::dataset::<f64>(path)?;
    let n = data_n(args, &data)?;
    let f = inputs::functional::<f64>(args.functional)?;
    let coeffs = coefficients(&inputs::bias_mode::<f64>(args.schedule, n, args.k)?, args.k)?;
    let mut report = mc_estimate(&f, &data, &coeffs, args.replicas, args.seed, args.start)?;
    report.target = Some(coefficient_space(&f, &coeffs, n, args.start)?.evaluate(&data)?);
    let mut t = Table::new("mc", &["n", "replicas", "estimate", "std_error", "target", "z_score", "seed"]);
    t.push([
        n.to_string(),
        report.replicas.to_string(),
        report.estimate.to_string(),
        report.std_error.to_string(),
        report.target.map(|v| v.to_string()).unwrap_or_default(),
        report.z_score().map(|v| v.to_string()).unwrap_or_default(),
        report.seed.to_string(),
    ]);
    a.push(t);
    a.push(coefficient_table(&coeffs));
    Ok(a)
}

fn mc_on_population(args: &McArgs, path: &Path) -> Result<Artifact> {
    if args.exhaustive {
        return Err(Error::InvalidInput("--exhaustive needs --data".into()));
    }
    let n = args.n.ok_or_else(|| Error::InvalidInput("--population needs --n".into()))?;
    let f = inputs::functional::<Rational>(args.functional)?;
    let population = PopulationInput::<Rational>::load(path)?.sampler()?;
    let mode = inputs::bias_mode::<Rational>(args.schedule, n, args.k)?;
    let e = bias_experiment(&f, &population, n, args.k, args.replicas, &mode, args.seed)?;

    let mut a = Artifact::default();
    let mut summary = Table::new("summary", &["n", "truth", "mode", "etas"]);
    summary.push([n.to_string(), e.truth.to_string(), mode_name(&mode).into(), etas_text(&mode)]);
    a.push(summary);
    let mut t = Table::new(
        "bias_experiment",
        &["k", "replicas", "estimate", "std_error", "exact_bias", "z_score", "bound", "seed"],
    );
    for r in &e.rows {
        t.push([
            r.k.to_string(),
            r.report.replicas.to_string(),
            r.report.estimate.to_string(),
            r.report.std_error.to_string(),
            r.exact_bias.to_string(),
            r.report.z_score().map(|v| v.to_string()).unwrap_or_default(),
            r.bound.map(|b| b.to_string()).unwrap_or_default(),
            r.report.seed.to_string(),
        ]);
    }
    a.push(t);
    Ok(a)
}

fn bound_table(name: &str, r: &BoundResult) -> Table {
    let mut t = Table::new(name, &["k", "bound", "log_bound"]);
    t.push([r.k.to_string(), r.bound.to_string(), r.log_bound.to_string()]);
    t
}

pub fn bounds_trace(sigma: f64, n: u64) -> Result<Artifact> {
    Ok(Artifact { tables: vec![bound_table("trace", &neumann_trace_bound(sigma, n)?)] })
}

pub fn bounds_bandlimited(d: usize, theta: f64, n: u64) -> Result<Artifact> {
    Ok(Artifact { tables: vec![bound_table("bandlimited", &bandlimited_bound(d, theta, n)?)] })
}

pub fn bounds_general(n: u64, gammas: Option<&str>, sigma: Option<f64>) -> Result<Artifact> {
    let gammas: Vec<f64> = match (gammas, sigma) {
        (Some(list), None) => list
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}"))))
            .collect::<Result<_>>()?,
        (None, Some(s)) if s > 0.0 && s < 1.0 => (0..=linear_cut(n)).map(|j| s.powi(j as i32) / (1.0 - s)).collect(),
        (None, Some(s)) => return Err(Error::InvalidInput(format!("σ must lie in (0, 1), got {s}"))),
        _ => return Err(Error::InvalidInput("give exactly one of --gammas and --sigma".into())),
    };
    let g = general_bound(&gammas, n)?;
    let mut t = Table::new("general", &["cut", "k_star", "bound", "log_bound", "two_term_at_k_star"]);
    let two_term = if g.k_star >= 0 { g.two_term(g.k_star as usize).to_string() } else { String::new() };
    t.push([g.cut.to_string(), g.k_star.to_string(), g.bound.to_string(), g.log_bound.to_string(), two_term]);
    Ok(Artifact { tables: vec![t] })
}

pub fn bounds_linconv(alpha: f64, m_max: usize) -> Result<Artifact> {
    if !(alpha > 0.0 && alpha.is_finite()) || m_max == 0 {
        return Err(Error::InvalidInput("linconv needs α > 0 and --m-max >= 1".into()));
    }
    let mut t = Table::new("linconv", &["m", "n", "gamma_ratio", "log_gamma_ratio", "at_least_three_quarters"]);
    for m in 1..=m_max {
        let n = linear_regime_n(m, alpha);
        let lg = log_gamma_ratio(m, n);
        t.push([m.to_string(), n.to_string(), lg.exp().to_string(), lg.to_string(), (lg >= 0.75f64.ln()).to_string()]);
    }
    Ok(Artifact { tables: vec![t] })
}

pub fn selftest() -> (Artifact, Option<String>) {
    let report = selftest::run();
    let mut t = Table::new("selftest", &["check", "passed", "detail"]);
    for c in &report.checks {
        t.push([c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
    }
    let failure = report.first_failure().map(|c| format!("{}: {}", c.name, c.detail));
    (Artifact { tables: vec![t] }, failure)
}
