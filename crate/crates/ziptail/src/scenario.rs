//! Config-driven Monte-Carlo scenarios: deterministic per-replicate
//! seeding, parallel execution, and CSV/JSON artifacts.
//!
//! A scenario takes a [`ScenarioConfig`], runs its replicates in parallel
//! (each on its own counter-derived seed), aggregates estimates into
//! means and empirical quantile bands, writes CSV artifacts into an
//! output directory, and records everything in a [`RunManifest`].
//! Aggregation is an ordered reduce keyed by replicate index, so the CSV
//! bodies are byte-identical regardless of worker-thread count.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ziptail_core::markov::{self, ChainSpec, Trajectory};
use ziptail_core::nummelin::{self, EpsilonScanPoint, GaussianWalkKernel, SmallSet};
use ziptail_core::tail::{
    averaged_tail_index, log_level_rule, max_admissible_level, stability_scan, tail_index,
    tail_index_with_ci, SampleBatch, TailEstimate,
};

use crate::config::{ChainConfig, DistributionConfig};
use crate::io::{fmt_f64, write_csv, write_json};
use crate::summary::{summarize, Summary};
use crate::{AppError, Result};

/// Band level for all aggregate quantile columns (2.5% / 97.5%).
const BAND_LEVEL: f64 = 0.95;

/// Bin count of the histogram artifacts.
const HISTOGRAM_BINS: usize = 50;

/// A distribution together with the label used in artifact file names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledDistribution {
    pub label: String,
    #[serde(flatten)]
    pub distribution: DistributionConfig,
}

/// A chain together with the label used in artifact file names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledChain {
    pub label: String,
    #[serde(flatten)]
    pub chain: ChainConfig,
}

/// Scenario-specific parameters, tagged by the scenario id.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum ScenarioParams {
    /// Level scan of the estimator on one i.i.d. law: per-level mean,
    /// quantile band, and averaged studentized interval endpoints.
    IidScan {
        distribution: DistributionConfig,
        /// Highest scanned level; default is the admissible range of a
        /// pilot batch drawn with the first replicate's seed.
        #[serde(default)]
        k_max: Option<u32>,
        /// Level of the studentized intervals attached per replicate.
        #[serde(default = "default_ci_level")]
        ci: f64,
    },
    /// Mean curve and quantile band of the plain estimator per level,
    /// one artifact per law, on a common level grid.
    BiasVariance { distributions: Vec<LabeledDistribution> },
    /// Log occupation growth along the path on a time grid, plus the
    /// log-occupation index per replicate.
    LoglogOccupation { chain: ChainConfig },
    /// Block and occupation estimators across replicates, with 50-bin
    /// histogram artifacts per chain.
    MarkovKde { chains: Vec<LabeledChain> },
    /// Split-chain pipeline on the Gaussian random walk: half-width
    /// selection, regeneration coins, block estimates.
    SplitChain {
        #[serde(default = "default_sigma")]
        sigma: f64,
        /// Candidate small-set half-widths for the selection sweep.
        #[serde(default = "default_epsilons")]
        epsilons: Vec<f64>,
    },
    /// Window-averaged estimates across window half-widths at one level.
    AveragedEstimator {
        distribution: DistributionConfig,
        /// Centre level; default `round(ln n)`.
        #[serde(default)]
        k: Option<u32>,
        /// Window half-widths to compare; 0 is the plain estimator.
        #[serde(default = "default_m_values")]
        m_values: Vec<u32>,
    },
    /// Renewal chain with integrable heavy-tailed inter-arrivals: the
    /// chain is positive recurrent while block durations keep a heavy
    /// tail of index `beta_prime`.
    PositiveRecurrent {
        beta_prime: f64,
        /// Scale of the constant slowly varying factor of the
        /// inter-arrival law.
        #[serde(default = "default_svf_scale")]
        c: f64,
    },
}

fn default_ci_level() -> f64 {
    0.95
}

fn default_sigma() -> f64 {
    1.0
}

fn default_epsilons() -> Vec<f64> {
    (1..=20).map(|j| j as f64 / 20.0).collect()
}

fn default_m_values() -> Vec<u32> {
    vec![0, 1, 2, 3]
}

fn default_svf_scale() -> f64 {
    1.0
}

impl ScenarioParams {
    /// The scenario id used in configs and manifests.
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioParams::IidScan { .. } => "iid_scan",
            ScenarioParams::BiasVariance { .. } => "bias_variance",
            ScenarioParams::LoglogOccupation { .. } => "loglog_occupation",
            ScenarioParams::MarkovKde { .. } => "markov_kde",
            ScenarioParams::SplitChain { .. } => "split_chain",
            ScenarioParams::AveragedEstimator { .. } => "averaged_estimator",
            ScenarioParams::PositiveRecurrent { .. } => "positive_recurrent",
        }
    }
}

/// A full experiment description: replication settings plus the
/// scenario-specific parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub replicates: usize,
    /// Sample size (i.i.d. scenarios) or trajectory length (chains).
    pub n: usize,
    /// Master seed; per-replicate seeds are derived deterministically.
    pub seed: u64,
    #[serde(flatten)]
    pub params: ScenarioParams,
}

impl ScenarioConfig {
    /// Validates replication settings and every referenced spec.
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(AppError::config("replicate count must be at least 1"));
        }
        if self.n < 2 {
            return Err(AppError::config(format!(
                "sample size must be at least 2, got {}",
                self.n
            )));
        }
        match &self.params {
            ScenarioParams::IidScan { distribution, ci, k_max: _ } => {
                distribution.build()?;
                check_band_level(*ci)
            }
            ScenarioParams::BiasVariance { distributions } => {
                if distributions.is_empty() {
                    return Err(AppError::config("at least one distribution is required"));
                }
                check_labels(distributions.iter().map(|d| d.label.as_str()))?;
                distributions.iter().try_for_each(|d| d.distribution.build().map(drop))
            }
            ScenarioParams::LoglogOccupation { chain } => {
                require_atom(&chain.build()?).map(drop)
            }
            ScenarioParams::MarkovKde { chains } => {
                if chains.is_empty() {
                    return Err(AppError::config("at least one chain is required"));
                }
                check_labels(chains.iter().map(|c| c.label.as_str()))?;
                chains.iter().try_for_each(|c| require_atom(&c.chain.build()?).map(drop))
            }
            ScenarioParams::SplitChain { sigma, epsilons } => {
                GaussianWalkKernel::new(*sigma)
                    .map_err(|e| AppError::config(format!("invalid kernel: {e}")))?;
                if epsilons.is_empty() {
                    return Err(AppError::config("at least one candidate half-width is required"));
                }
                if let Some(eps) = epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
                    return Err(AppError::config(format!(
                        "candidate half-widths must be positive, got {eps}"
                    )));
                }
                Ok(())
            }
            ScenarioParams::AveragedEstimator { distribution, k, m_values } => {
                distribution.build()?;
                if m_values.is_empty() {
                    return Err(AppError::config("at least one window half-width is required"));
                }
                let centre = k.unwrap_or_else(|| log_level_rule(self.n, 1.0));
                match m_values.iter().max() {
                    Some(&m) if m > centre => Err(AppError::config(format!(
                        "window half-width {m} exceeds the centre level {centre}"
                    ))),
                    _ => Ok(()),
                }
            }
            ScenarioParams::PositiveRecurrent { beta_prime, c } => {
                if !(*beta_prime > 1.0 && *beta_prime < 2.0) {
                    return Err(AppError::config(format!(
                        "inter-arrival tail index must lie in (1, 2), got {beta_prime}"
                    )));
                }
                inter_arrival_law(*beta_prime, *c).map(drop)
            }
        }
    }
}

/// Record of one completed run; reproduces the run when fed back in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    /// Echo of the configuration the run was started with.
    pub config: serde_json::Value,
    /// Version of the code that produced the artifacts.
    pub version: String,
    pub replicate_seeds: Vec<u64>,
    /// Artifact file names, relative to the output directory.
    pub outputs: Vec<String>,
    /// Human-readable records of aborted replicates.
    pub failed_replicates: Vec<String>,
    pub wall_clock_seconds: f64,
}

/// Deterministic seed of replicate `index` under a master seed.
///
/// Counter-mode derivation: the index selects an offset on the Weyl
/// sequence of the master seed, and a 64-bit finalizer decorrelates
/// neighbouring indices.
pub fn replicate_seed(master: u64, index: usize) -> u64 {
    let state = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    mix64(state)
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs a scenario and writes its artifacts plus `manifest.json` into
/// `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let started = Instant::now();
    let seeds: Vec<u64> =
        (0..config.replicates).map(|i| replicate_seed(config.seed, i)).collect();
    let (outputs, failed) = match &config.params {
        ScenarioParams::IidScan { distribution, k_max, ci } => {
            run_iid_scan(config.n, &seeds, distribution, *k_max, *ci, out_dir)?
        }
        ScenarioParams::BiasVariance { distributions } => {
            run_bias_variance(config.n, &seeds, distributions, out_dir)?
        }
        ScenarioParams::LoglogOccupation { chain } => {
            run_loglog_occupation(config.n, &seeds, chain, out_dir)?
        }
        ScenarioParams::MarkovKde { chains } => {
            run_markov_kde(config.n, &seeds, chains, out_dir)?
        }
        ScenarioParams::SplitChain { sigma, epsilons } => {
            run_split_chain(config.n, &seeds, *sigma, epsilons, out_dir)?
        }
        ScenarioParams::AveragedEstimator { distribution, k, m_values } => {
            run_averaged(config.n, &seeds, distribution, *k, m_values, out_dir)?
        }
        ScenarioParams::PositiveRecurrent { beta_prime, c } => {
            run_positive_recurrent(config.n, &seeds, *beta_prime, *c, out_dir)?
        }
    };
    let manifest = RunManifest {
        scenario: config.params.name().to_string(),
        config: serde_json::to_value(config)
            .map_err(|e| AppError::runtime(format!("cannot echo config: {e}")))?,
        version: env!("CARGO_PKG_VERSION").to_string(),
        replicate_seeds: seeds,
        outputs,
        failed_replicates: failed,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Successful replicate outputs keyed by replicate index, plus records
/// of the aborted ones.
struct Replicates<T> {
    ok: Vec<(usize, T)>,
    failures: Vec<String>,
}

/// Runs one job per seed in parallel and collects results in replicate
/// order. Failed replicates are logged and recorded; more than 10%
/// failures abort the run.
fn run_replicates<T: Send>(
    seeds: &[u64],
    job: impl Fn(usize, u64) -> Result<T> + Sync,
) -> Result<Replicates<T>> {
    let results: Vec<(usize, Result<T>)> =
        seeds.par_iter().enumerate().map(|(i, &seed)| (i, job(i, seed))).collect();
    let mut ok = Vec::with_capacity(seeds.len());
    let mut failures = Vec::new();
    for (index, result) in results {
        match result {
            Ok(value) => ok.push((index, value)),
            Err(e) => failures.push(format!("replicate {index}: {e}")),
        }
    }
    for line in &failures {
        eprintln!("warning: {line}");
    }
    if failures.len() * 10 > seeds.len() {
        return Err(AppError::runtime(format!(
            "{} of {} replicates failed (more than 10%); first failure: {}",
            failures.len(),
            seeds.len(),
            failures[0]
        )));
    }
    Ok(Replicates { ok, failures })
}

type ScenarioOutputs = (Vec<String>, Vec<String>);

fn replicate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn runtime_core(e: ziptail_core::Error) -> AppError {
    AppError::runtime(e.to_string())
}

fn check_band_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(AppError::config(format!("interval level must lie in (0, 1), got {level}")))
    }
}

fn check_labels<'a>(labels: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = Vec::new();
    for label in labels {
        let valid = !label.is_empty()
            && label
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-');
        if !valid {
            return Err(AppError::config(format!(
                "label {label:?} must be non-empty lower-case [a-z0-9_-]"
            )));
        }
        if seen.contains(&label) {
            return Err(AppError::config(format!("duplicate label {label:?}")));
        }
        seen.push(label);
    }
    Ok(())
}

fn require_atom(spec: &ChainSpec) -> Result<fn(f64) -> bool> {
    spec.regeneration_set().ok_or_else(|| {
        AppError::config(
            "this scenario needs a chain with an accessible atom; \
             use the split_chain scenario for kernels without one",
        )
    })
}

fn inter_arrival_law(beta_prime: f64, c: f64) -> Result<ziptail_core::dgp::HeavyTailSpec> {
    ziptail_core::dgp::HeavyTailSpec::new(
        beta_prime,
        ziptail_core::dgp::SlowlyVarying::Constant { c },
    )
    .map_err(|e| AppError::config(format!("invalid inter-arrival law: {e}")))
}

/// Summary of possibly-absent values: empty input yields empty cells.
fn summarize_defined(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        Ok(Summary { mean: f64::NAN, q_lo: f64::NAN, q_hi: f64::NAN, sd: f64::NAN })
    } else {
        summarize(values, BAND_LEVEL)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `bin_lo,bin_hi,count` rows of a fixed-width histogram over the value
/// range (widened by a hair when the range is a point).
fn histogram_rows(values: &[f64]) -> Vec<Vec<String>> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = (max - min).max(1e-9);
    let width = span / HISTOGRAM_BINS as f64;
    let mut counts = [0usize; HISTOGRAM_BINS];
    for &v in values {
        let bin = (((v - min) / width) as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            vec![
                fmt_f64(min + i as f64 * width),
                fmt_f64(min + (i + 1) as f64 * width),
                count.to_string(),
            ]
        })
        .collect()
}

/// Per-level aggregate rows over replicate estimate curves of equal
/// length: `k[,extra],mean,q_lo,q_hi,sd,degenerate_share`.
fn level_rows(
    curves: &[(usize, Vec<TailEstimate>)],
    levels: usize,
) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::with_capacity(levels);
    for j in 0..levels {
        let betas: Vec<f64> = curves.iter().map(|(_, c)| c[j].beta).collect();
        let s = summarize(&betas, BAND_LEVEL)?;
        let degenerate = curves.iter().filter(|(_, c)| c[j].degenerate).count() as f64
            / curves.len() as f64;
        rows.push(vec![
            c_level(&curves[0].1[j]),
            fmt_f64(s.mean),
            fmt_f64(s.q_lo),
            fmt_f64(s.q_hi),
            fmt_f64(s.sd),
            fmt_f64(degenerate),
        ]);
    }
    Ok(rows)
}

fn c_level(est: &TailEstimate) -> String {
    est.k.to_string()
}

fn run_iid_scan(
    n: usize,
    seeds: &[u64],
    distribution: &DistributionConfig,
    k_max: Option<u32>,
    ci: f64,
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let sampler = distribution.build()?;
    let cap = match k_max {
        Some(k) => k,
        None => {
            let mut rng = replicate_rng(seeds[0], 0);
            let pilot = sampler.sample(&mut rng, n)?;
            max_admissible_level(&pilot).ok_or_else(|| {
                AppError::runtime("pilot batch carries too little tail mass to pick a level range")
            })?
        }
    };
    let reps = run_replicates(seeds, |_, seed| {
        let mut rng = replicate_rng(seed, 0);
        let batch = sampler.sample(&mut rng, n)?;
        stability_scan(&batch, 0..=cap, ci).map_err(runtime_core)
    })?;

    let mut rows = Vec::with_capacity(cap as usize + 1);
    for j in 0..=cap as usize {
        let betas: Vec<f64> = reps.ok.iter().map(|(_, c)| c[j].beta).collect();
        let s = summarize(&betas, BAND_LEVEL)?;
        let degenerate = reps.ok.iter().filter(|(_, c)| c[j].degenerate).count() as f64
            / reps.ok.len() as f64;
        let lows: Vec<f64> =
            reps.ok.iter().filter_map(|(_, c)| c[j].ci.map(|ci| ci.lo)).collect();
        let highs: Vec<f64> =
            reps.ok.iter().filter_map(|(_, c)| c[j].ci.map(|ci| ci.hi)).collect();
        let (ci_lo, ci_hi) = if lows.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (mean(&lows), mean(&highs))
        };
        rows.push(vec![
            j.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.q_lo),
            fmt_f64(s.q_hi),
            fmt_f64(s.sd),
            fmt_f64(ci_lo),
            fmt_f64(ci_hi),
            fmt_f64(degenerate),
        ]);
    }
    write_csv(
        &out_dir.join("scan.csv"),
        &["k", "mean", "q_lo", "q_hi", "sd", "ci_lo", "ci_hi", "degenerate_share"],
        &rows,
    )?;
    Ok((vec!["scan.csv".into()], reps.failures))
}

fn run_bias_variance(
    n: usize,
    seeds: &[u64],
    distributions: &[LabeledDistribution],
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    // A common level grid keeps the curves comparable: the cap is the
    // smallest admissible range over pilot batches of every law.
    let mut cap = u32::MAX;
    for (index, labeled) in distributions.iter().enumerate() {
        let sampler = labeled.distribution.build()?;
        let mut rng = replicate_rng(seeds[0], index as u64);
        let pilot = sampler.sample(&mut rng, n)?;
        let level = max_admissible_level(&pilot).ok_or_else(|| {
            AppError::runtime(format!(
                "pilot batch of {:?} carries too little tail mass to pick a level range",
                labeled.label
            ))
        })?;
        cap = cap.min(level);
    }

    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    for (index, labeled) in distributions.iter().enumerate() {
        let sampler = labeled.distribution.build()?;
        let reps = run_replicates(seeds, |_, seed| {
            let mut rng = replicate_rng(seed, index as u64);
            let batch = sampler.sample(&mut rng, n)?;
            Ok((0..=cap).map(|k| tail_index(&batch, k)).collect::<Vec<_>>())
        })?;
        let rows = level_rows(&reps.ok, cap as usize + 1)?;
        let name = format!("bias_variance_{}.csv", labeled.label);
        write_csv(
            &out_dir.join(&name),
            &["k", "mean", "q_lo", "q_hi", "sd", "degenerate_share"],
            &rows,
        )?;
        outputs.push(name);
        failures.extend(
            reps.failures.into_iter().map(|f| format!("{}: {f}", labeled.label)),
        );
    }
    Ok((outputs, failures))
}

/// Occupation counts of `set` after `floor(n * t)` transitions, for an
/// ascending grid of times `t`.
fn occupation_counts(
    traj: &Trajectory,
    set: impl Fn(f64) -> bool,
    grid: &[f64],
) -> Vec<usize> {
    let n = traj.n();
    let cutoffs: Vec<usize> =
        grid.iter().map(|t| (n as f64 * t).floor() as usize).collect();
    let mut out = vec![0usize; cutoffs.len()];
    let mut count = 0usize;
    let mut next = 0usize;
    for (i, &x) in traj.states().iter().enumerate() {
        if i > 0 && set(x) {
            count += 1;
        }
        while next < cutoffs.len() && cutoffs[next] == i {
            out[next] = count;
            next += 1;
        }
    }
    debug_assert_eq!(next, cutoffs.len());
    out
}

fn run_loglog_occupation(
    n: usize,
    seeds: &[u64],
    chain: &ChainConfig,
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let spec = chain.build()?;
    let atom = require_atom(&spec)?;
    let grid: Vec<f64> = (2..=20).map(|j| j as f64 / 20.0).collect();

    let reps = run_replicates(seeds, |_, seed| {
        let mut rng = replicate_rng(seed, 0);
        let traj = markov::simulate(&spec, n, &mut rng).map_err(runtime_core)?;
        let counts = occupation_counts(&traj, atom, &grid);
        let beta_tilde = markov::occupation_index(&traj, atom).map_err(runtime_core)?;
        Ok((counts, beta_tilde))
    })?;

    let mut band_rows = Vec::with_capacity(grid.len());
    for (j, &t) in grid.iter().enumerate() {
        let logs: Vec<f64> = reps
            .ok
            .iter()
            .filter(|(_, (counts, _))| counts[j] >= 1)
            .map(|(_, (counts, _))| (counts[j] as f64).ln())
            .collect();
        let s = summarize_defined(&logs)?;
        let defined = logs.len() as f64 / reps.ok.len() as f64;
        band_rows.push(vec![
            fmt_f64(t),
            fmt_f64(s.mean),
            fmt_f64(s.q_lo),
            fmt_f64(s.q_hi),
            fmt_f64(s.sd),
            fmt_f64(defined),
        ]);
    }
    write_csv(
        &out_dir.join("occupation_band.csv"),
        &["t", "mean", "q_lo", "q_hi", "sd", "defined_share"],
        &band_rows,
    )?;

    let index_rows: Vec<Vec<String>> = reps
        .ok
        .iter()
        .map(|(i, (_, beta_tilde))| vec![i.to_string(), fmt_f64(*beta_tilde)])
        .collect();
    write_csv(
        &out_dir.join("occupation_index.csv"),
        &["replicate", "beta_tilde"],
        &index_rows,
    )?;

    let tildes: Vec<f64> = reps.ok.iter().map(|(_, (_, b))| *b).collect();
    let s = summarize(&tildes, BAND_LEVEL)?;
    write_csv(
        &out_dir.join("occupation_index_summary.csv"),
        &["mean", "q_lo", "q_hi", "sd"],
        &[vec![fmt_f64(s.mean), fmt_f64(s.q_lo), fmt_f64(s.q_hi), fmt_f64(s.sd)]],
    )?;

    Ok((
        vec![
            "occupation_band.csv".into(),
            "occupation_index.csv".into(),
            "occupation_index_summary.csv".into(),
        ],
        reps.failures,
    ))
}

struct BlockRecord {
    n_blocks: usize,
    k: u32,
    beta_hat: f64,
    degenerate: bool,
    beta_tilde: f64,
}

fn run_markov_kde(
    n: usize,
    seeds: &[u64],
    chains: &[LabeledChain],
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    for (index, labeled) in chains.iter().enumerate() {
        let spec = labeled.chain.build()?;
        let atom = require_atom(&spec)?;
        let reps = run_replicates(seeds, |_, seed| {
            let mut rng = replicate_rng(seed, index as u64);
            let blocks =
                markov::regeneration_blocks_streamed(&spec, n, &mut rng, atom)
                    .map_err(runtime_core)?;
            let est = markov::tail_index_from_blocks(&blocks, None).map_err(runtime_core)?;
            let hits = blocks.hit_times().len();
            Ok(BlockRecord {
                n_blocks: blocks.count(),
                k: est.k,
                beta_hat: est.beta,
                degenerate: est.degenerate,
                beta_tilde: (hits as f64).ln() / (n as f64).ln(),
            })
        })?;

        let estimate_rows: Vec<Vec<String>> = reps
            .ok
            .iter()
            .map(|(i, r)| {
                vec![
                    i.to_string(),
                    r.n_blocks.to_string(),
                    r.k.to_string(),
                    fmt_f64(r.beta_hat),
                    r.degenerate.to_string(),
                    fmt_f64(r.beta_tilde),
                ]
            })
            .collect();
        let estimates_name = format!("estimates_{}.csv", labeled.label);
        write_csv(
            &out_dir.join(&estimates_name),
            &["replicate", "n_blocks", "k", "beta_hat", "degenerate", "beta_tilde"],
            &estimate_rows,
        )?;

        let hats: Vec<f64> = reps.ok.iter().map(|(_, r)| r.beta_hat).collect();
        let tildes: Vec<f64> = reps.ok.iter().map(|(_, r)| r.beta_tilde).collect();
        let hist_block_name = format!("hist_block_{}.csv", labeled.label);
        let hist_occ_name = format!("hist_occupation_{}.csv", labeled.label);
        write_csv(
            &out_dir.join(&hist_block_name),
            &["bin_lo", "bin_hi", "count"],
            &histogram_rows(&hats),
        )?;
        write_csv(
            &out_dir.join(&hist_occ_name),
            &["bin_lo", "bin_hi", "count"],
            &histogram_rows(&tildes),
        )?;

        let s_hat = summarize(&hats, BAND_LEVEL)?;
        let s_tilde = summarize(&tildes, BAND_LEVEL)?;
        let summary_name = format!("summary_{}.csv", labeled.label);
        write_csv(
            &out_dir.join(&summary_name),
            &["estimator", "mean", "q_lo", "q_hi", "sd"],
            &[
                vec![
                    "beta_hat".into(),
                    fmt_f64(s_hat.mean),
                    fmt_f64(s_hat.q_lo),
                    fmt_f64(s_hat.q_hi),
                    fmt_f64(s_hat.sd),
                ],
                vec![
                    "beta_tilde".into(),
                    fmt_f64(s_tilde.mean),
                    fmt_f64(s_tilde.q_lo),
                    fmt_f64(s_tilde.q_hi),
                    fmt_f64(s_tilde.sd),
                ],
            ],
        )?;

        outputs.extend([estimates_name, hist_block_name, hist_occ_name, summary_name]);
        failures.extend(
            reps.failures.into_iter().map(|f| format!("{}: {f}", labeled.label)),
        );
    }
    Ok((outputs, failures))
}

struct SplitRecord {
    center: f64,
    epsilon: f64,
    delta: f64,
    expected_blocks: f64,
    n_blocks: usize,
    k: u32,
    beta_hat: f64,
    scan: Vec<EpsilonScanPoint>,
    /// `(start, duration)` pairs, kept for the first replicate only.
    blocks: Option<Vec<(usize, u64)>>,
}

fn run_split_chain(
    n: usize,
    seeds: &[u64],
    sigma: f64,
    epsilons: &[f64],
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let spec = ChainSpec::GaussianWalk { sigma };
    let kernel =
        GaussianWalkKernel::new(sigma).map_err(|e| AppError::config(format!("invalid kernel: {e}")))?;

    let reps = run_replicates(seeds, |index, seed| {
        let mut rng = replicate_rng(seed, 0);
        let traj = markov::simulate(&spec, n, &mut rng).map_err(runtime_core)?;
        // Data-driven small-set centre: the median of the visited states.
        let mut visited = traj.states()[1..].to_vec();
        visited.sort_unstable_by(f64::total_cmp);
        let center = median_sorted(&visited);
        let scan =
            nummelin::scan_epsilon(&kernel, &traj, center, epsilons).map_err(runtime_core)?;
        let best = scan
            .iter()
            .max_by(|a, b| a.expected_blocks.total_cmp(&b.expected_blocks))
            .expect("candidate list is validated non-empty")
            .clone();
        if best.expected_blocks <= 0.0 {
            return Err(AppError::runtime(
                "no candidate half-width produces any expected regeneration",
            ));
        }
        let set = SmallSet::new(center, best.epsilon).map_err(runtime_core)?;
        let blocks =
            nummelin::split_chain_blocks(&kernel, &traj, &set, &mut rng).map_err(runtime_core)?;
        let est = markov::tail_index_from_blocks(&blocks, None).map_err(runtime_core)?;
        let kept = (index == 0).then(|| {
            blocks
                .hit_times()
                .iter()
                .zip(blocks.durations())
                .map(|(&start, &duration)| (start, duration))
                .collect()
        });
        Ok(SplitRecord {
            center,
            epsilon: best.epsilon,
            delta: best.delta,
            expected_blocks: best.expected_blocks,
            n_blocks: blocks.count(),
            k: est.k,
            beta_hat: est.beta,
            scan,
            blocks: kept,
        })
    })?;

    let estimate_rows: Vec<Vec<String>> = reps
        .ok
        .iter()
        .map(|(i, r)| {
            vec![
                i.to_string(),
                fmt_f64(r.center),
                fmt_f64(r.epsilon),
                fmt_f64(r.delta),
                fmt_f64(r.expected_blocks),
                r.n_blocks.to_string(),
                r.k.to_string(),
                fmt_f64(r.beta_hat),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("estimates.csv"),
        &["replicate", "center", "epsilon", "delta", "expected_blocks", "n_blocks", "k", "beta_hat"],
        &estimate_rows,
    )?;

    let scan_rows: Vec<Vec<String>> = reps
        .ok
        .iter()
        .flat_map(|(i, r)| {
            r.scan.iter().map(move |p| {
                vec![
                    i.to_string(),
                    fmt_f64(p.epsilon),
                    fmt_f64(p.delta),
                    fmt_f64(p.expected_blocks),
                ]
            })
        })
        .collect();
    write_csv(
        &out_dir.join("epsilon_scan.csv"),
        &["replicate", "epsilon", "delta", "expected_blocks"],
        &scan_rows,
    )?;

    let mut outputs = vec!["estimates.csv".to_string(), "epsilon_scan.csv".to_string()];
    if let Some((_, first)) = reps.ok.first() {
        if let Some(blocks) = &first.blocks {
            let block_rows: Vec<Vec<String>> = blocks
                .iter()
                .enumerate()
                .map(|(j, (start, duration))| {
                    vec![j.to_string(), start.to_string(), duration.to_string()]
                })
                .collect();
            write_csv(
                &out_dir.join("blocks.csv"),
                &["block", "start", "duration"],
                &block_rows,
            )?;
            outputs.push("blocks.csv".into());
        }
    }

    let hats: Vec<f64> = reps.ok.iter().map(|(_, r)| r.beta_hat).collect();
    let counts: Vec<f64> = reps.ok.iter().map(|(_, r)| r.n_blocks as f64).collect();
    let s_hat = summarize(&hats, BAND_LEVEL)?;
    let s_count = summarize(&counts, BAND_LEVEL)?;
    write_csv(
        &out_dir.join("summary.csv"),
        &["quantity", "mean", "q_lo", "q_hi", "sd"],
        &[
            vec![
                "beta_hat".into(),
                fmt_f64(s_hat.mean),
                fmt_f64(s_hat.q_lo),
                fmt_f64(s_hat.q_hi),
                fmt_f64(s_hat.sd),
            ],
            vec![
                "n_blocks".into(),
                fmt_f64(s_count.mean),
                fmt_f64(s_count.q_lo),
                fmt_f64(s_count.q_hi),
                fmt_f64(s_count.sd),
            ],
        ],
    )?;
    outputs.push("summary.csv".into());
    Ok((outputs, reps.failures))
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn run_averaged(
    n: usize,
    seeds: &[u64],
    distribution: &DistributionConfig,
    k: Option<u32>,
    m_values: &[u32],
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let sampler = distribution.build()?;
    let centre = k.unwrap_or_else(|| log_level_rule(n, 1.0));
    let reps = run_replicates(seeds, |_, seed| {
        let mut rng = replicate_rng(seed, 0);
        let batch = sampler.sample(&mut rng, n)?;
        m_values
            .iter()
            .map(|&m| averaged_tail_index(&batch, centre, m).map_err(runtime_core))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::with_capacity(m_values.len());
    for (j, &m) in m_values.iter().enumerate() {
        let betas: Vec<f64> = reps.ok.iter().map(|(_, c)| c[j].beta).collect();
        let s = summarize(&betas, BAND_LEVEL)?;
        let degenerate = reps.ok.iter().filter(|(_, c)| c[j].degenerate).count() as f64
            / reps.ok.len() as f64;
        rows.push(vec![
            centre.to_string(),
            m.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.q_lo),
            fmt_f64(s.q_hi),
            fmt_f64(s.sd),
            fmt_f64(degenerate),
        ]);
    }
    write_csv(
        &out_dir.join("averaged.csv"),
        &["k", "m", "mean", "q_lo", "q_hi", "sd", "degenerate_share"],
        &rows,
    )?;
    Ok((vec!["averaged.csv".into()], reps.failures))
}

struct RecurrentRecord {
    n_blocks: usize,
    k: u32,
    beta_hat: f64,
    ci_lo: f64,
    ci_hi: f64,
    proxy: f64,
    covered: bool,
}

fn run_positive_recurrent(
    n: usize,
    seeds: &[u64],
    beta_prime: f64,
    c: f64,
    out_dir: &Path,
) -> Result<ScenarioOutputs> {
    let eta = inter_arrival_law(beta_prime, c)?;
    let spec = ChainSpec::Renewal { eta: eta.clone() };
    let atom = require_atom(&spec)?;
    // The consistency range of the level scale shrinks to (0, 1/beta');
    // half of the range keeps the level well supported.
    let scale = 0.5 / beta_prime;

    let reps = run_replicates(seeds, |_, seed| {
        let mut rng = replicate_rng(seed, 0);
        let blocks = markov::regeneration_blocks_streamed(&spec, n, &mut rng, atom)
            .map_err(runtime_core)?;
        if blocks.count() < 2 {
            return Err(AppError::runtime(format!(
                "only {} complete regeneration blocks",
                blocks.count()
            )));
        }
        let batch = SampleBatch::new(blocks.durations().to_vec()).map_err(runtime_core)?;
        let k = log_level_rule(blocks.count(), scale);
        let est = tail_index_with_ci(&batch, k, BAND_LEVEL).map_err(runtime_core)?;
        let ci = est.ci.expect("interval was requested");
        let proxy = eta.survival_log_ratio(k).map_err(runtime_core)?;
        Ok(RecurrentRecord {
            n_blocks: blocks.count(),
            k,
            beta_hat: est.beta,
            ci_lo: ci.lo,
            ci_hi: ci.hi,
            proxy,
            covered: ci.lo <= proxy && proxy <= ci.hi,
        })
    })?;

    let estimate_rows: Vec<Vec<String>> = reps
        .ok
        .iter()
        .map(|(i, r)| {
            vec![
                i.to_string(),
                r.n_blocks.to_string(),
                r.k.to_string(),
                fmt_f64(r.beta_hat),
                fmt_f64(r.ci_lo),
                fmt_f64(r.ci_hi),
                fmt_f64(r.proxy),
                r.covered.to_string(),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("estimates.csv"),
        &["replicate", "n_blocks", "k", "beta_hat", "ci_lo", "ci_hi", "proxy_beta_k", "covered"],
        &estimate_rows,
    )?;

    let hats: Vec<f64> = reps.ok.iter().map(|(_, r)| r.beta_hat).collect();
    let s = summarize(&hats, BAND_LEVEL)?;
    let blocks_mean = mean(&reps.ok.iter().map(|(_, r)| r.n_blocks as f64).collect::<Vec<_>>());
    let coverage = reps.ok.iter().filter(|(_, r)| r.covered).count() as f64
        / reps.ok.len() as f64;
    write_csv(
        &out_dir.join("summary.csv"),
        &["mean", "q_lo", "q_hi", "sd", "mean_blocks", "ci_coverage"],
        &[vec![
            fmt_f64(s.mean),
            fmt_f64(s.q_lo),
            fmt_f64(s.q_hi),
            fmt_f64(s.sd),
            fmt_f64(blocks_mean),
            fmt_f64(coverage),
        ]],
    )?;
    Ok((vec!["estimates.csv".into(), "summary.csv".into()], reps.failures))
}
