//! Regenerative Markov chain simulation and occupation-time statistics.
//!
//! For an atomic Harris chain, the durations between successive visits to
//! the atom are i.i.d., and for `beta`-null-recurrent chains their common
//! law is heavy tailed with tail index `beta` in `(0, 1)`. Feeding those
//! durations to the survival-ratio estimator therefore recovers `beta`
//! from a single trajectory. This module provides:
//!
//! - a small family of chain simulators ([`ChainSpec`]): symmetric random
//!   walks, Bessel-type walks with tunable recurrence, a renewal chain
//!   whose return times are exactly the innovations, a threshold
//!   autoregression, and a Gaussian-increment walk;
//! - regeneration-block extraction from a trajectory or in streaming
//!   fashion while simulating;
//! - the plug-in tail-index estimator on block durations;
//! - occupation times, the log-occupation index `ln S_n(B) / ln n`, the
//!   scaled occupation process, and Mittag-Leffler moments for its limit.

// Supplies f64 math in no_std builds. When std ends up in the crate graph
// (tests, std-enabled dependents) the inherent methods shadow the trait and
// the import sits idle, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dgp::HeavyTailSpec;
use crate::special::ln_gamma;
use crate::tail::{log_level_rule, tail_index, SampleBatch, TailEstimate};
use crate::{Error, Result};

/// Perturbation `h(k)` applied to the Bessel walk's up-probability.
#[derive(Debug, Clone, PartialEq)]
pub enum BesselDrift {
    /// No perturbation.
    Zero,
    /// `h(k) = scale / (k * ln(k + 1))`, a `o(1/k)` perturbation that
    /// leaves the recurrence exponent untouched.
    LogDamped { scale: f64 },
}

impl BesselDrift {
    fn value(&self, k: u64) -> f64 {
        match *self {
            BesselDrift::Zero => 0.0,
            BesselDrift::LogDamped { scale } => {
                let k = k as f64;
                scale / (k * (k + 1.0).ln())
            }
        }
    }
}

/// Specification of a simulatable Markov chain.
///
/// All chains are real-valued; the integer-valued ones keep exact integer
/// states in `f64`. Starting states: the walks start at 0 (their atom),
/// the renewal chain at 0.5 (inside its atom `[0, 1]`), the threshold
/// autoregression at 0.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainSpec {
    /// Simple symmetric random walk on the integers, `beta = 1/2`.
    /// With `reflected`, state 0 moves to 1 deterministically.
    Ssrw { reflected: bool },
    /// Bessel-type reflected walk: from `k >= 1` the walk moves up with
    /// probability `(1 + h(k) - delta / (2k)) / 2`, from 0 it moves to 1.
    /// Null recurrent with `beta = (1 + delta) / 2` for `delta` in `[0, 1)`;
    /// `delta = 0` with zero drift is exactly the reflected walk.
    Bessel { delta: f64, drift: BesselDrift },
    /// Renewal chain: above 1 the state decrements by 1; from `[0, 1]` it
    /// jumps to a fresh innovation `eta`. Return times to `[0, 1]` equal
    /// the innovations exactly, so the duration tail index is `eta`'s.
    Renewal { eta: HeavyTailSpec },
    /// Threshold autoregression `X' = alpha1 * X + eps` below the
    /// threshold and `X' = X + eps` above it, `eps ~ N(0, sigma^2)`.
    /// Null recurrent with `beta = 1/2`; has no accessible atom, which is
    /// what the split-chain construction is for.
    Tar { alpha1: f64, threshold: f64, sigma: f64 },
    /// Random walk with `N(0, sigma^2)` increments, `beta = 1/2`. No
    /// accessible atom; the usual subject of the split-chain construction.
    GaussianWalk { sigma: f64 },
}

impl ChainSpec {
    /// Parameter validation shared by all simulation entry points.
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: alloc::string::String| Err(Error::InvalidSpec(reason));
        match self {
            ChainSpec::Ssrw { .. } => Ok(()),
            ChainSpec::Bessel { delta, drift } => {
                if !(*delta >= 0.0 && *delta < 1.0) {
                    return bad(format!("Bessel delta must lie in [0, 1), got {delta}"));
                }
                if let BesselDrift::LogDamped { scale } = drift {
                    if !(*scale >= 0.0 && scale.is_finite()) {
                        return bad(format!("drift scale must be non-negative, got {scale}"));
                    }
                }
                Ok(())
            }
            ChainSpec::Renewal { .. } => Ok(()),
            ChainSpec::Tar { alpha1, threshold, sigma } => {
                if !alpha1.is_finite() || alpha1.abs() >= 1.0 {
                    return bad(format!("TAR coefficient must satisfy |alpha1| < 1, got {alpha1}"));
                }
                if !threshold.is_finite() {
                    return bad(format!("TAR threshold must be finite, got {threshold}"));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return bad(format!("noise scale must be positive, got {sigma}"));
                }
                Ok(())
            }
            ChainSpec::GaussianWalk { sigma } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return bad(format!("noise scale must be positive, got {sigma}"));
                }
                Ok(())
            }
        }
    }

    /// The state the chain starts from.
    pub fn initial_state(&self) -> f64 {
        match self {
            ChainSpec::Renewal { .. } => 0.5,
            _ => 0.0,
        }
    }

    /// The chain's regeneration set, when it has an accessible atom.
    pub fn regeneration_set(&self) -> Option<fn(f64) -> bool> {
        match self {
            ChainSpec::Ssrw { .. } | ChainSpec::Bessel { .. } => Some(|x| x == 0.0),
            ChainSpec::Renewal { .. } => Some(|x| (0.0..=1.0).contains(&x)),
            ChainSpec::Tar { .. } | ChainSpec::GaussianWalk { .. } => None,
        }
    }

    /// Tail index of the return-time distribution implied by the
    /// specification.
    pub fn nominal_tail_index(&self) -> f64 {
        match self {
            ChainSpec::Ssrw { .. } => 0.5,
            ChainSpec::Bessel { delta, .. } => (1.0 + delta) / 2.0,
            ChainSpec::Renewal { eta } => eta.beta(),
            ChainSpec::Tar { .. } | ChainSpec::GaussianWalk { .. } => 0.5,
        }
    }

    fn step<R: Rng + ?Sized>(&self, state: f64, rng: &mut R) -> Result<f64> {
        match self {
            ChainSpec::Ssrw { reflected } => {
                if *reflected && state == 0.0 {
                    return Ok(1.0);
                }
                let up = rng.random::<f64>() < 0.5;
                Ok(if up { state + 1.0 } else { state - 1.0 })
            }
            ChainSpec::Bessel { delta, drift } => {
                if state == 0.0 {
                    return Ok(1.0);
                }
                let k = state.round() as u64;
                let p_up = 0.5 * (1.0 + drift.value(k) - delta / (2.0 * k as f64));
                if !(p_up > 0.0 && p_up < 1.0) {
                    return Err(Error::InvalidTransitionProbability {
                        state: k as i64,
                        probability: p_up,
                    });
                }
                let up = rng.random::<f64>() < p_up;
                Ok(if up { state + 1.0 } else { state - 1.0 })
            }
            ChainSpec::Renewal { eta } => {
                if state > 1.0 {
                    Ok(state - 1.0)
                } else {
                    Ok(eta.sample_one(rng)? as f64)
                }
            }
            ChainSpec::Tar { alpha1, threshold, sigma } => {
                let noise: f64 = StandardNormal.sample(rng);
                Ok(tar_step(state, *alpha1, *threshold, sigma * noise))
            }
            ChainSpec::GaussianWalk { sigma } => {
                let noise: f64 = StandardNormal.sample(rng);
                Ok(state + sigma * noise)
            }
        }
    }
}

/// One threshold-autoregression transition, with the noise already drawn.
fn tar_step(x: f64, alpha1: f64, threshold: f64, noise: f64) -> f64 {
    let base = if x <= threshold { alpha1 * x } else { x };
    base + noise
}

/// Drives the chain for `n` steps, handing `(i, X_i)` for `i = 0..=n` to
/// the visitor. Streaming counterpart of [`simulate`] for trajectories too
/// long to materialize.
pub fn visit_states<R: Rng + ?Sized>(
    spec: &ChainSpec,
    n: usize,
    rng: &mut R,
    mut visit: impl FnMut(usize, f64),
) -> Result<()> {
    spec.validate()?;
    let mut state = spec.initial_state();
    visit(0, state);
    for i in 1..=n {
        state = spec.step(state, rng)?;
        visit(i, state);
    }
    Ok(())
}

/// A simulated path `X_0, ..., X_n` (length `n + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<f64>,
}

impl Trajectory {
    /// Wraps an explicit state sequence; at least the starting state is
    /// required.
    pub fn from_states(states: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidSpec("a trajectory needs at least one state".into()));
        }
        Ok(Trajectory { states })
    }

    /// Number of transitions, i.e. the `n` in `X_0, ..., X_n`.
    pub fn n(&self) -> usize {
        self.states.len() - 1
    }

    /// All states including the starting one.
    pub fn states(&self) -> &[f64] {
        &self.states
    }
}

/// Simulates `n` transitions and materializes the full path.
pub fn simulate<R: Rng + ?Sized>(spec: &ChainSpec, n: usize, rng: &mut R) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(n + 1);
    visit_states(spec, n, rng, |_, x| states.push(x))?;
    Ok(Trajectory { states })
}

/// Visit times of a regeneration set and the durations between them.
///
/// Hits are indices `i >= 1` with `X_i` in the set; the starting state is
/// never counted. Durations are differences of consecutive hit times, so
/// the delay before the first hit is excluded. `count()` — the number of
/// complete blocks — is the effective sample size for estimation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegenerationBlocks {
    hit_times: Vec<usize>,
    durations: Vec<u64>,
}

impl RegenerationBlocks {
    pub(crate) fn from_hit_times(hit_times: Vec<usize>) -> Self {
        let durations = hit_times.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
        RegenerationBlocks { hit_times, durations }
    }

    /// Indices `i >= 1` at which the trajectory sat in the set.
    pub fn hit_times(&self) -> &[usize] {
        &self.hit_times
    }

    /// Durations of the complete blocks, in order.
    pub fn durations(&self) -> &[u64] {
        &self.durations
    }

    /// Number of complete blocks.
    pub fn count(&self) -> usize {
        self.durations.len()
    }
}

#[derive(Default)]
struct BlockAccumulator {
    hit_times: Vec<usize>,
    durations: Vec<u64>,
}

impl BlockAccumulator {
    fn observe(&mut self, i: usize, in_set: bool) {
        if i == 0 || !in_set {
            return;
        }
        if let Some(&last) = self.hit_times.last() {
            self.durations.push((i - last) as u64);
        }
        self.hit_times.push(i);
    }

    fn finish(self) -> RegenerationBlocks {
        RegenerationBlocks { hit_times: self.hit_times, durations: self.durations }
    }
}

/// Extracts regeneration blocks from a materialized trajectory.
pub fn regeneration_blocks(traj: &Trajectory, atom: impl Fn(f64) -> bool) -> RegenerationBlocks {
    let mut acc = BlockAccumulator::default();
    for (i, &x) in traj.states().iter().enumerate() {
        acc.observe(i, atom(x));
    }
    acc.finish()
}

/// Simulates the chain and extracts regeneration blocks without keeping
/// the path in memory.
pub fn regeneration_blocks_streamed<R: Rng + ?Sized>(
    spec: &ChainSpec,
    n: usize,
    rng: &mut R,
    atom: impl Fn(f64) -> bool,
) -> Result<RegenerationBlocks> {
    let mut acc = BlockAccumulator::default();
    visit_states(spec, n, rng, |i, x| acc.observe(i, atom(x)))?;
    Ok(acc.finish())
}

/// Survival-ratio estimate of the tail index from block durations.
///
/// Treats the durations as a sample batch of size `N = count()` and
/// estimates at level `k`, defaulting to `round(ln N)`. At least two
/// complete blocks are required. The estimate's `n` field records the
/// number of blocks, not the trajectory length.
pub fn tail_index_from_blocks(
    blocks: &RegenerationBlocks,
    k: Option<u32>,
) -> Result<TailEstimate> {
    if blocks.count() < 2 {
        return Err(Error::InsufficientRegenerations { hits: blocks.hit_times.len() });
    }
    let batch = SampleBatch::new(blocks.durations.clone())?;
    let k = k.unwrap_or_else(|| log_level_rule(blocks.count(), 1.0));
    Ok(tail_index(&batch, k))
}

/// Tail-index estimate of a chain's return-time distribution, from a
/// trajectory and its regeneration set.
pub fn regeneration_tail_index(
    traj: &Trajectory,
    atom: impl Fn(f64) -> bool,
    k: Option<u32>,
) -> Result<TailEstimate> {
    tail_index_from_blocks(&regeneration_blocks(traj, atom), k)
}

/// Occupation time `#{ 1 <= i <= n : X_i in B }`.
pub fn occupation_time(traj: &Trajectory, set: impl Fn(f64) -> bool) -> usize {
    traj.states()[1..].iter().filter(|&&x| set(x)).count()
}

/// Log-occupation index `ln S_n(B) / ln n`.
///
/// For a `beta`-null-recurrent chain and a set of finite invariant measure
/// this converges to `beta`; it needs no regeneration structure at all.
/// Requires `n >= 2` and at least one visit.
pub fn occupation_index(traj: &Trajectory, set: impl Fn(f64) -> bool) -> Result<f64> {
    let n = traj.n();
    if n < 2 {
        return Err(Error::InvalidSpec(format!(
            "log-occupation index needs n >= 2 transitions, got {n}"
        )));
    }
    let occ = occupation_time(traj, set);
    if occ == 0 {
        return Err(Error::SetNeverVisited);
    }
    Ok((occ as f64).ln() / (n as f64).ln())
}

/// Scaled occupation process `S_floor(nt)(B) / (n^beta * l_value)` at the
/// given grid of times `t` in `[0, 1]`.
///
/// `l_value` is the caller's stand-in for the slowly varying factor of the
/// occupation growth (1 when unknown); `beta` may be known or estimated.
pub fn occupation_process(
    traj: &Trajectory,
    set: impl Fn(f64) -> bool,
    grid: &[f64],
    beta: f64,
    l_value: f64,
) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidSpec(format!("scaling exponent must be positive, got {beta}")));
    }
    if !(l_value > 0.0 && l_value.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "slowly varying value must be positive, got {l_value}"
        )));
    }
    let n = traj.n();
    for &t in grid {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidSpec(format!("grid time {t} outside [0, 1]")));
        }
    }

    // Prefix occupation counts at the requested cutoffs, one pass.
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    let mut out = alloc::vec![0.0; grid.len()];
    let scale = (n as f64).powf(beta) * l_value;
    let mut count = 0usize;
    let mut next = 0usize;
    for (i, &x) in traj.states().iter().enumerate() {
        if i > 0 && set(x) {
            count += 1;
        }
        while next < order.len() && (n as f64 * grid[order[next]]).floor() as usize <= i {
            out[order[next]] = count as f64 / scale;
            next += 1;
        }
        if next == order.len() {
            break;
        }
    }
    // Cutoffs at exactly n are flushed after the loop completes.
    while next < order.len() {
        out[order[next]] = count as f64 / scale;
        next += 1;
    }
    Ok(out)
}

/// `m`-th moment of the Mittag-Leffler distribution with index `beta`:
/// `m! / Gamma(1 + m * beta)`.
///
/// These are the moments of the limit law of normalized occupation times
/// of `beta`-null-recurrent chains, `0 < beta < 1`.
pub fn mittag_leffler_moment(beta: f64, m: u32) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "Mittag-Leffler index must lie in (0, 1), got {beta}"
        )));
    }
    let m = m as f64;
    Ok((ln_gamma(m + 1.0) - ln_gamma(1.0 + m * beta)).exp())
}
