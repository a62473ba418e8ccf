//! Command-line interface: argument definitions and subcommand execution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ziptail_core::markov;
use ziptail_core::tail::{
    averaged_tail_index, deviation_bound, stability_scan, tail_index, tail_index_with_ci,
    DeviationBound, TailEstimate,
};

use crate::config::SimulateSpec;
use crate::io::{fmt_f64, read_integer_samples, write_lines};
use crate::scenario::{run_scenario, ScenarioConfig};
use crate::{AppError, Result};

/// Tail-index estimation for discrete heavy-tailed data.
#[derive(Debug, Parser)]
#[command(name = "ziptail", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the tail index from a file of integer observations.
    Estimate(EstimateArgs),
    /// Draw i.i.d. samples or simulate a Markov chain path.
    Simulate(SimulateArgs),
    /// Run a Monte-Carlo scenario described by a JSON config.
    Mc(McArgs),
}

/// Arguments of `ziptail estimate`.
///
/// Exactly one of `--k` and `--k-range` selects the levels. Estimates are
/// printed as CSV on stdout, one row per level.
#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// File with one positive integer observation per line.
    #[arg(long)]
    pub input: PathBuf,

    /// Level to estimate at.
    #[arg(long, required_unless_present = "k_range", conflicts_with = "k_range")]
    pub k: Option<u32>,

    /// Inclusive level range A B to scan.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub k_range: Option<Vec<u32>>,

    /// Window half-width of the averaged estimator (0 = plain).
    #[arg(long, conflicts_with_all = ["ci", "bound_delta"])]
    pub avg_m: Option<u32>,

    /// Studentized confidence level; scans default to 0.95.
    #[arg(long)]
    pub ci: Option<f64>,

    /// Confidence parameter of the finite-sample deviation bound.
    #[arg(long)]
    pub bound_delta: Option<f64>,

    /// Survival probability at level k+1 used by the bound instead of
    /// the plug-in estimate (for oracle studies).
    #[arg(long, requires = "bound_delta")]
    pub bound_tail_prob: Option<f64>,
}

/// Arguments of `ziptail simulate`.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON file describing a distribution or a chain.
    #[arg(long)]
    pub spec: PathBuf,

    /// Number of observations (distributions) or transitions (chains).
    #[arg(long)]
    pub n: usize,

    /// Generator seed, used as given.
    #[arg(long)]
    pub seed: u64,

    /// Output file: one observation or state per line.
    #[arg(long)]
    pub out: PathBuf,
}

/// Arguments of `ziptail mc`.
#[derive(Debug, Args)]
pub struct McArgs {
    /// JSON scenario configuration.
    #[arg(long)]
    pub config: PathBuf,

    /// Directory the artifacts and manifest are written into.
    #[arg(long)]
    pub out_dir: PathBuf,

    /// Worker threads for the replicates (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => run_estimate(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Mc(args) => run_mc(args),
    }
}

fn run_estimate(args: EstimateArgs) -> Result<()> {
    if let Some(level) = args.ci {
        if !(level > 0.0 && level < 1.0) {
            return Err(AppError::config(format!(
                "confidence level must lie in (0, 1), got {level}"
            )));
        }
    }
    if let Some(delta) = args.bound_delta {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(AppError::config(format!(
                "bound confidence parameter must lie in (0, 0.5), got {delta}"
            )));
        }
    }
    if let Some(p) = args.bound_tail_prob {
        if !(p > 0.0 && p <= 1.0) {
            return Err(AppError::config(format!(
                "bound tail probability must lie in (0, 1], got {p}"
            )));
        }
    }

    let batch = read_integer_samples(&args.input)?;
    let estimates: Vec<TailEstimate> = match (args.k, &args.k_range) {
        (Some(k), None) => {
            let est = match (args.avg_m, args.ci) {
                (Some(m), _) => averaged_tail_index(&batch, k, m).map_err(|e| {
                    AppError::config(format!("incompatible window: {e}"))
                })?,
                (None, Some(level)) => {
                    tail_index_with_ci(&batch, k, level).map_err(statistical)?
                }
                (None, None) => tail_index(&batch, k),
            };
            vec![est]
        }
        (None, Some(range)) => {
            let (lo, hi) = (range[0], range[1]);
            if lo > hi {
                return Err(AppError::config(format!(
                    "level range must be ascending, got {lo} {hi}"
                )));
            }
            match args.avg_m {
                Some(m) => (lo..=hi)
                    .map(|k| {
                        averaged_tail_index(&batch, k, m).map_err(|e| {
                            AppError::config(format!("incompatible window: {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => stability_scan(&batch, lo..=hi, args.ci.unwrap_or(0.95))
                    .map_err(statistical)?,
            }
        }
        _ => unreachable!("clap enforces exactly one level selector"),
    };

    let with_bound = args.bound_delta.is_some();
    let mut header = vec![
        "k",
        "m",
        "beta_hat",
        "ci_lo",
        "ci_hi",
        "p_hat_k",
        "p_hat_k1",
        "degenerate",
    ];
    if with_bound {
        header.extend(["bound", "bound_applicable"]);
    }
    let mut rows = Vec::with_capacity(estimates.len());
    for est in &estimates {
        let bound = match args.bound_delta {
            Some(delta) => {
                let tail_prob = args.bound_tail_prob.unwrap_or(est.survival_k1);
                Some(
                    deviation_bound(batch.len(), delta, tail_prob).map_err(statistical)?,
                )
            }
            None => None,
        };
        rows.push(estimate_row(est, args.avg_m.unwrap_or(0), bound.as_ref()));
    }
    print_csv(&header, &rows)
}

fn estimate_row(est: &TailEstimate, m: u32, bound: Option<&DeviationBound>) -> Vec<String> {
    let (ci_lo, ci_hi) = match est.ci {
        Some(ci) => (fmt_f64(ci.lo), fmt_f64(ci.hi)),
        None => (String::new(), String::new()),
    };
    let mut row = vec![
        est.k.to_string(),
        m.to_string(),
        fmt_f64(est.beta),
        ci_lo,
        ci_hi,
        fmt_f64(est.survival_k),
        fmt_f64(est.survival_k1),
        est.degenerate.to_string(),
    ];
    if let Some(b) = bound {
        row.push(fmt_f64(b.bound));
        row.push(b.applicable.to_string());
    }
    row
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    if args.n == 0 {
        return Err(AppError::config("sample size must be at least 1"));
    }
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| AppError::runtime(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec: SimulateSpec = serde_json::from_str(&text)
        .map_err(|e| AppError::config(format!("invalid spec {}: {e}", args.spec.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    match spec {
        SimulateSpec::Distribution(config) => {
            let sampler = config.build()?;
            let batch = sampler.sample(&mut rng, args.n)?;
            write_lines(&args.out, batch.values())
        }
        SimulateSpec::Chain(config) => {
            let chain = config.build()?;
            let traj = markov::simulate(&chain, args.n, &mut rng)
                .map_err(|e| AppError::runtime(format!("simulation failed: {e}")))?;
            write_lines(&args.out, traj.states())
        }
    }
}

fn run_mc(args: McArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| AppError::runtime(format!("cannot read {}: {e}", args.config.display())))?;
    let config: ScenarioConfig = serde_json::from_str(&text)
        .map_err(|e| AppError::config(format!("invalid config {}: {e}", args.config.display())))?;
    let manifest = match args.threads {
        None => run_scenario(&config, &args.out_dir)?,
        Some(0) => return Err(AppError::config("thread count must be at least 1")),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| AppError::config(format!("cannot build thread pool: {e}")))?;
            pool.install(|| run_scenario(&config, &args.out_dir))?
        }
    };
    println!(
        "{} artifacts in {} ({} failed replicates)",
        manifest.outputs.len(),
        args.out_dir.display(),
        manifest.failed_replicates.len()
    );
    Ok(())
}

/// Statistical failures at runtime map to the data-error exit code.
fn statistical(e: ziptail_core::Error) -> AppError {
    AppError::runtime(e.to_string())
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let stdout = std::io::stdout().lock();
    let mut writer = csv::Writer::from_writer(stdout);
    writer
        .write_record(header)
        .and_then(|()| rows.iter().try_for_each(|row| writer.write_record(row)))
        .map_err(|e| AppError::runtime(format!("cannot write to stdout: {e}")))?;
    writer.flush().map_err(|e| AppError::runtime(format!("cannot flush stdout: {e}")))
}
