mod commands;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mobius_boot::mc::ChainStart;
use mobius_boot::{Error, Rational};
use serde::Serialize;

use commands::{BiasArgs, McArgs};
use output::{Artifact, Format, Provenance};

/// Exact bootstrap bias correction for moment polynomials.
#[derive(Debug, Parser, Serialize)]
#[command(name = "mobius-boot", version)]
struct Cli {
    /// Output format; defaults to CSV unless --out ends in .json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Partitions, Hasse edges, zeta and Möbius matrices of the partition lattice.
    Lattice {
        #[arg(long)]
        m: usize,
    },
    /// The sampling matrix S with its diagonal factorization, or the reduced matrix.
    Smatrix {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        reduced: bool,
        /// Floating point instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// Exact bias of the corrected estimators against a known population.
    Bias {
        /// Functional JSON file, or builtin:variance / builtin:mean.
        #[arg(long)]
        functional: String,
        /// Population: normal or moment-table JSON, or a CSV dataset.
        #[arg(long)]
        population: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// unit, default, or comma-separated step sizes.
        #[arg(long, default_value = "unit")]
        schedule: String,
        /// Write the final corrected functional as JSON.
        #[arg(long)]
        emit_functional: Option<PathBuf>,
        #[arg(long)]
        float: bool,
    },
    /// Monte Carlo or exhaustive simulation of resampling chains.
    McRun {
        #[arg(long)]
        functional: String,
        /// Dataset whose rows are X¹.
        #[arg(long, conflicts_with = "population")]
        data: Option<PathBuf>,
        /// Normal JSON or CSV population; runs a bias experiment.
        #[arg(long)]
        population: Option<PathBuf>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value = "unit")]
        schedule: String,
        #[arg(long, default_value_t = 10_000)]
        replicas: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every chain in exact arithmetic.
        #[arg(long)]
        exhaustive: bool,
        /// Whether X¹ is the data or a resample of it.
        #[arg(long, value_enum, default_value_t = Start::Data)]
        start: Start,
    },
    /// Iteration counts and bias bounds.
    Bounds {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Exact-arithmetic invariant suite.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Start {
    Data,
    Resample,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BoundKind {
    /// Inverse of an averaged matrix with spectrum in (0, σ).
    Trace {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        n: u64,
    },
    /// Bandlimited functions of sub-Gaussian means.
    Bandlimited {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: u64,
    },
    /// Two-regime bound from a nonincreasing sequence γ_0, γ_1, ...
    General {
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "sigma")]
        gammas: Option<String>,
        /// Use γ_j = σ^j / (1 − σ).
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// γ ratio at N = max(⌈α m²⌉, m + 1) for m = 1..=m-max.
    Linconv {
        #[arg(long, default_value_t = 8.0)]
        alpha: f64,
        #[arg(long, default_value_t = 50)]
        m_max: usize,
    },
}

enum Failure {
    Core(Error),
    Selftest(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn run(cli: &Cli) -> Result<Artifact, Failure> {
    let artifact = match &cli.command {
        Command::Lattice { m } => commands::lattice(*m)?,
        Command::Smatrix { m, n, reduced, float } => {
            if *float {
                commands::smatrix::<f64>(*m, *n, *reduced)?
            } else {
                commands::smatrix::<Rational>(*m, *n, *reduced)?
            }
        }
        Command::Bias { functional, population, n, k, schedule, emit_functional, float } => {
            let args = BiasArgs {
                functional,
                population,
                n: *n,
                k: *k,
                schedule,
                emit_functional: emit_functional.as_deref(),
            };
            if *float {
                commands::bias::<f64>(&args)?
            } else {
                commands::bias::<Rational>(&args)?
            }
        }
        Command::McRun { functional, data, population, n, k, schedule, replicas, seed, exhaustive, start } => {
            commands::mc_run(&McArgs {
                functional,
                data: data.as_deref(),
                population: population.as_deref(),
                n: *n,
                k: *k,
                schedule,
                replicas: *replicas,
                seed: *seed,
                exhaustive: *exhaustive,
                start: match start {
                    Start::Data => ChainStart::Data,
                    Start::Resample => ChainStart::Resample,
                },
            })?
        }
        Command::Bounds { kind } => match kind {
            BoundKind::Trace { sigma, n } => commands::bounds_trace(*sigma, *n)?,
            BoundKind::Bandlimited { d, theta, n } => commands::bounds_bandlimited(*d, *theta, *n)?,
            BoundKind::General { n, gammas, sigma } => commands::bounds_general(*n, gammas.as_deref(), *sigma)?,
            BoundKind::Linconv { alpha, m_max } => commands::bounds_linconv(*alpha, *m_max)?,
        },
        Command::Selftest => {
            let (artifact, failure) = commands::selftest();
            emit(cli, &artifact)?;
            return match failure {
                Some(f) => Err(Failure::Selftest(f)),
                None => Ok(artifact),
            };
        }
    };
    emit(cli, &artifact)?;
    Ok(artifact)
}

fn emit(cli: &Cli, artifact: &Artifact) -> Result<(), Failure> {
    let seed = match &cli.command {
        Command::McRun { seed, .. } => Some(*seed),
        _ => None,
    };
    let provenance = Provenance {
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        flags: serde_json::to_value(cli).expect("flags serialize"),
        seed,
    };
    let format = output::resolve_format(cli.format, cli.out.as_deref());
    let bytes = output::render(artifact, &provenance, format).map_err(Failure::Io)?;
    output::write(&bytes, cli.out.as_deref()).map_err(Failure::Io)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 3,
        Error::InvalidInput(_)
        | Error::Parse(_)
        | Error::Dimension { .. }
        | Error::LabelOutOfRange { .. }
        | Error::EmptyOrder
        | Error::Json(_)
        | Error::Csv(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Selftest(first)) => {
            eprintln!("selftest failed: {first}");
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
