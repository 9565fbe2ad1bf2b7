mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use afd_core::biasbench::{self, BiasConfig};
use afd_core::{best_first_search, cardinality_baseline_nodes, Dataset, Execution, SearchConfig};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::report::{DiscoveryReport, RunConfig};

/// Reliable approximate functional dependency discovery.
#[derive(Parser, Debug)]
#[command(name = "afd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find the top-k attribute sets determining a target column
    Discover {
        /// CSV file with a header row
        #[arg(long)]
        input: PathBuf,
        /// Name of the target column
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Approximation factor in (0, 1]; 1 gives the exact top-k
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Equal-frequency bins for numeric columns
        #[arg(long, default_value_t = 5)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Stop after this many seconds (default: unlimited)
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Estimator bias benchmark on sampled 3x3 pmfs, or the independence curve with --fig1
    BenchBias {
        #[arg(long, default_value_t = 5)]
        pmfs_per_regime: usize,
        /// Datasets per pmf (default 200), or trials per dimension with --fig1 (default 20)
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated sample sizes
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        sizes: Vec<usize>,
        /// Score nested sets of independent attributes instead
        #[arg(long)]
        fig1: bool,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        attrs: usize,
        #[arg(long, default_value_t = 4)]
        domain: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Node count and time estimate for a cardinality-limited exhaustive search
    BaselineEstimate {
        /// Number of input attributes
        #[arg(long)]
        d: usize,
        #[arg(long)]
        max_depth: usize,
        /// Measured seconds per node
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn discover(
    input: PathBuf,
    target: String,
    k: usize,
    alpha: f64,
    bins: usize,
    format: Format,
    budget_seconds: Option<f64>,
    seed: u64,
) -> Result<String> {
    let budget = match budget_seconds {
        Some(b) if !(b.is_finite() && b >= 0.0) => {
            bail!("--budget-seconds must be a non-negative number, got {b}")
        }
        Some(b) => Some(Duration::from_secs_f64(b)),
        None => None,
    };
    let dataset = Dataset::read_csv(&input, &target, bins)
        .with_context(|| format!("loading {}", input.display()))?;
    let config = SearchConfig {
        budget,
        ..SearchConfig::new(k, alpha)
    };
    let (result, stats) = best_first_search(&dataset, &config)?;
    let run = RunConfig {
        bins,
        seed,
        budget_seconds,
        parallel: config.execution.is_parallel(),
    };
    let report = DiscoveryReport::new(&dataset, &result, stats, run);
    match format {
        Format::Tsv => Ok(report.to_tsv()),
        Format::Json => to_json(&report),
    }
}

#[allow(clippy::too_many_arguments)]
fn bench_bias(
    pmfs_per_regime: usize,
    trials: Option<usize>,
    sizes: Vec<usize>,
    fig1: bool,
    n: usize,
    attrs: usize,
    domain: usize,
    format: Format,
    seed: u64,
) -> Result<String> {
    let exec = Execution::default();
    if fig1 {
        let trials = trials.unwrap_or(20);
        let curve = biasbench::dimensionality_curve(n, attrs, domain, trials, seed, exec)?;
        return match format {
            Format::Tsv => Ok(biasbench::curve_to_tsv(&curve)),
            Format::Json => to_json(&json!({
                "n": n,
                "attrs": attrs,
                "domain": domain,
                "trials": trials,
                "seed": seed,
                "curve": curve,
            })),
        };
    }
    if pmfs_per_regime == 0 {
        bail!("--pmfs-per-regime must be at least 1");
    }
    if sizes.is_empty() || sizes.contains(&0) {
        bail!("--sizes must list positive sample sizes");
    }
    let config = BiasConfig {
        pmfs_per_regime,
        trials: trials.unwrap_or(200),
        sizes,
        seed,
        execution: exec,
    };
    let reports = biasbench::bias_summary(&config)?;
    match format {
        Format::Tsv => Ok(biasbench::reports_to_tsv(&reports)),
        Format::Json => to_json(&json!({ "config": config, "reports": reports })),
    }
}

fn baseline_estimate(d: usize, max_depth: usize, t: f64, format: Format) -> Result<String> {
    if !(t.is_finite() && t > 0.0) {
        bail!("--t must be a positive number of seconds, got {t}");
    }
    let q = cardinality_baseline_nodes(d, max_depth)?;
    let q_text = q.to_string();
    let seconds = q_text.parse::<f64>()? * t;
    match format {
        Format::Tsv => Ok(format!(
            "d\tmax_depth\tt\tnodes\testimate_seconds\n{d}\t{max_depth}\t{t}\t{q_text}\t{seconds}\n"
        )),
        Format::Json => {
            let nodes = match q_text.parse::<u64>() {
                Ok(v) => json!(v),
                Err(_) => json!(q_text),
            };
            to_json(&json!({
                "d": d,
                "max_depth": max_depth,
                "t": t,
                "nodes": nodes,
                "estimate_seconds": seconds,
            }))
        }
    }
}

fn run() -> Result<()> {
    let (text, output) = match Cli::parse().command {
        Command::Discover {
            input,
            target,
            k,
            alpha,
            bins,
            format,
            output,
            budget_seconds,
            seed,
        } => (
            discover(input, target, k, alpha, bins, format, budget_seconds, seed)?,
            output,
        ),
        Command::BenchBias {
            pmfs_per_regime,
            trials,
            sizes,
            fig1,
            n,
            attrs,
            domain,
            format,
            output,
            seed,
        } => (
            bench_bias(pmfs_per_regime, trials, sizes, fig1, n, attrs, domain, format, seed)?,
            output,
        ),
        Command::BaselineEstimate {
            d,
            max_depth,
            t,
            format,
            output,
        } => (baseline_estimate(d, max_depth, t, format)?, output),
    };
    emit(&text, output.as_ref())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
