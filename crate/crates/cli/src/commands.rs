use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qunit_bell::functional::{max_entangled_state, quantum_value};
use qunit_bell::lhv::{lhv_bound_bruteforce_with, lhv_bound_greedy, LhvBound, LhvMethod};
use qunit_bell::montecarlo::{self, ExperimentPlan};
use qunit_bell::noise::{threshold_closed_form, threshold_numeric, NoiseKind, CLASSICAL_LIMIT};
use qunit_bell::spectral::{analyze, verify_max_entangled_optimality};
use qunit_bell::DensityMatrix;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::state_file::{ConstructionDocument, StateFile};

/// Largest dimension accepted by `scan`.
pub const SCAN_MAX_DIM: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "qunit-bell",
    version,
    about = "Bell inequality for two quNits with binary measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write both bases, the intermediate states and the value table as JSON.
    Construct {
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Evaluate B_N on a state (default: the maximally entangled state).
    QuantumValue {
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long = "state")]
        state: Option<PathBuf>,
    },
    /// Local hidden variable bound with a witnessing strategy.
    Lhv {
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long = "brute-force")]
        brute_force: bool,
        #[arg(long = "allow-slow")]
        allow_slow: bool,
    },
    /// Noise threshold, closed form and numeric.
    Noise {
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long = "kind", value_enum)]
        kind: KindArg,
    },
    /// One row per dimension: quantum maximum, LHV bound, both thresholds.
    Scan {
        #[arg(long = "dims", value_parser = parse_dim_range)]
        dims: DimRange,
        #[arg(long = "format", value_enum, default_value = "json")]
        format: Format,
    },
    /// Finite-shot simulation of the experiment.
    Sample {
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long = "shots", value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long = "seed")]
        seed: u64,
        #[arg(long = "state")]
        state: Option<PathBuf>,
    },
    /// Top of the Bell-operator spectrum and entanglement of its eigenvector.
    Spectral {
        #[arg(long = "dim")]
        dim: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Uncolored,
    Separable,
}

impl From<KindArg> for NoiseKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Uncolored => NoiseKind::Uncolored,
            KindArg::Separable => NoiseKind::ClosestSeparable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimRange {
    pub start: usize,
    pub end: usize,
}

fn parse_dim_range(s: &str) -> Result<DimRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected START..END, got {s:?}"))?;
    let start: usize = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let end: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if start < 2 || end > SCAN_MAX_DIM || start > end {
        return Err(format!(
            "dims must satisfy 2 <= START <= END <= {SCAN_MAX_DIM}, got {start}..{end}"
        ));
    }
    Ok(DimRange { start, end })
}

fn check_dim(n: usize) -> Result<(), CliError> {
    if n < 2 {
        Err(CliError::Usage(format!(
            "--dim must be at least 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}

fn load_state(path: Option<&Path>, n: usize) -> Result<DensityMatrix, CliError> {
    match path {
        None => Ok(DensityMatrix::pure(&max_entangled_state(n)?)?),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            let file = StateFile::parse(&text)?;
            if file.local_dim != n {
                return Err(CliError::State(format!(
                    "state file local_dim {} does not match --dim {n}",
                    file.local_dim
                )));
            }
            file.to_density()
        }
    }
}

#[derive(Serialize)]
struct Witness {
    alpha: usize,
    alpha_prime: usize,
    click_mask: String,
}

impl From<&LhvBound> for Witness {
    fn from(b: &LhvBound) -> Self {
        Self {
            alpha: b.witness.alpha,
            alpha_prime: b.witness.alpha_prime,
            click_mask: b.witness.click_mask_hex(),
        }
    }
}

#[derive(Serialize)]
struct ScanRow {
    dim: usize,
    quantum_max: f64,
    lhv_bound: i64,
    lambda_mix: f64,
    lambda_sep: f64,
}

/// Executes a parsed command and returns the text for standard output.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Construct { dim, out } => {
            check_dim(dim)?;
            let doc = ConstructionDocument::build(dim)?;
            let text = to_json(&doc);
            fs::write(&out, format!("{text}\n")).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?;
            Ok(to_json(&json!({
                "dim": dim,
                "out": out.display().to_string(),
                "intermediate_states": doc.intermediate_states.len(),
                "normalization_constant": doc.normalization_constant,
            })))
        }
        Command::QuantumValue { dim, state } => {
            check_dim(dim)?;
            let rho = load_state(state.as_deref(), dim)?;
            let value = quantum_value(&rho, dim)?;
            Ok(to_json(&json!({
                "dim": dim,
                "value": value,
                "max_quantum": 2.0 * (dim as f64).sqrt(),
                "classical_bound": CLASSICAL_LIMIT,
            })))
        }
        Command::Lhv {
            dim,
            brute_force,
            allow_slow,
        } => {
            check_dim(dim)?;
            let greedy = lhv_bound_greedy(dim)?;
            if brute_force {
                let brute = lhv_bound_bruteforce_with(dim, allow_slow).map_err(|e| {
                    CliError::Usage(format!("{e}; pass --allow-slow to enumerate N = 5"))
                })?;
                Ok(to_json(&json!({
                    "dim": dim,
                    "bound": brute.bound,
                    "method": LhvMethod::BruteForce,
                    "witness": Witness::from(&brute),
                    "greedy_bound": greedy.bound,
                    "methods_agree": brute.bound == greedy.bound,
                })))
            } else {
                Ok(to_json(&json!({
                    "dim": dim,
                    "bound": greedy.bound,
                    "method": LhvMethod::Greedy,
                    "witness": Witness::from(&greedy),
                })))
            }
        }
        Command::Noise { dim, kind } => {
            check_dim(dim)?;
            let kind = NoiseKind::from(kind);
            let closed = threshold_closed_form(kind, dim)?;
            let numeric = threshold_numeric(kind, dim)?;
            Ok(to_json(&json!({
                "dim": dim,
                "kind": kind,
                "lambda_closed_form": closed,
                "lambda_numeric": numeric,
                "difference": (numeric - closed).abs(),
            })))
        }
        Command::Scan { dims, format } => {
            let rows = (dims.start..=dims.end)
                .map(|n| -> Result<ScanRow, CliError> {
                    let psi = DensityMatrix::pure(&max_entangled_state(n)?)?;
                    Ok(ScanRow {
                        dim: n,
                        quantum_max: quantum_value(&psi, n)?,
                        lhv_bound: lhv_bound_greedy(n)?.bound,
                        lambda_mix: threshold_closed_form(NoiseKind::Uncolored, n)?,
                        lambda_sep: threshold_closed_form(NoiseKind::ClosestSeparable, n)?,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(match format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut out = String::from("dim,quantum_max,lhv_bound,lambda_mix,lambda_sep");
                    for r in &rows {
                        out.push_str(&format!(
                            "\n{},{},{},{},{}",
                            r.dim, r.quantum_max, r.lhv_bound, r.lambda_mix, r.lambda_sep
                        ));
                    }
                    out
                }
            })
        }
        Command::Sample {
            dim,
            shots,
            seed,
            state,
        } => {
            check_dim(dim)?;
            let rho = load_state(state.as_deref(), dim)?;
            let result = montecarlo::run(&ExperimentPlan {
                dim,
                rho,
                shots_per_combination: shots,
                seed,
            })?;
            Ok(to_json(&result))
        }
        Command::Spectral { dim } => {
            check_dim(dim)?;
            let report = analyze(dim)?;
            let check = verify_max_entangled_optimality(dim)?;
            Ok(to_json(&json!({
                "dim": dim,
                "max_eigenvalue": report.max_eigenvalue,
                "gap": report.gap,
                "degenerate": report.is_degenerate(),
                "schmidt": report.schmidt,
                "entropy": report.entropy,
                "max_entangled_value": check.achieved,
                "max_entangled_is_optimal": check.is_optimal,
            })))
        }
    }
}
