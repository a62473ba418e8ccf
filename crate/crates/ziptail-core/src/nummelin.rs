//! Split-chain construction for chains without an accessible atom.
//!
//! Continuous-state chains such as Gaussian random walks never revisit a
//! point, so the regeneration machinery of [`crate::markov`] does not
//! apply directly. The classical remedy is Nummelin splitting: pick a
//! small interval `V = [x0 - eps, x0 + eps]` on which the transition
//! density satisfies the minorization `p(x, y) >= delta * psi(y)` for all
//! `x, y` in `V`, with `psi` the uniform density on `V` and
//! `delta = 2 * eps * inf_{V x V} p`. Whenever the chain makes a
//! transition inside `V x V`, an auxiliary Bernoulli coin with parameter
//! `delta * psi(y) / p(x, y)` decides whether the chain regenerated; the
//! coin-flip times split the trajectory into independent blocks whose
//! durations feed the usual tail-index estimator.
//!
//! The module provides the minorization bookkeeping ([`SmallSet`],
//! [`minorization_constant`]), the conditional expected block count given
//! a trajectory ([`expected_blocks`]), randomized block extraction
//! ([`split_chain_blocks`]), and a scan over candidate interval widths
//! that maximizes the expected block count ([`select_epsilon`]).

// Supplies f64 math in no_std builds. When std ends up in the crate graph
// (tests, std-enabled dependents) the inherent methods shadow the trait and
// the import sits idle, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::markov::{tail_index_from_blocks, RegenerationBlocks, Trajectory};
use crate::tail::TailEstimate;
use crate::{Error, Result};

/// `1 / sqrt(2 * pi)`, the Gaussian density normalization.
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Number of grid points per axis used by the default infimum search.
const INF_GRID: usize = 64;

/// A transition density `p(x, y)` with respect to Lebesgue measure.
pub trait TransitionDensity {
    /// Density of a transition from `x` to `y`.
    fn density(&self, x: f64, y: f64) -> f64;

    /// Infimum of the density over `V x V` for the given small set.
    ///
    /// The default scans a 64 x 64 grid including the endpoints, which is
    /// exact for densities whose minimum over the square sits in a
    /// corner (any density decreasing in `|y - x|`). Kernels with an
    /// analytic infimum should override this.
    fn inf_over_square(&self, set: &SmallSet) -> f64 {
        let lower = set.lower();
        let width = set.width();
        let step = width / (INF_GRID - 1) as f64;
        let mut inf = f64::INFINITY;
        for i in 0..INF_GRID {
            let x = lower + step * i as f64;
            for j in 0..INF_GRID {
                let y = lower + step * j as f64;
                let p = self.density(x, y);
                if p < inf {
                    inf = p;
                }
            }
        }
        inf
    }
}

/// Random-walk kernel with centred Gaussian increments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianWalkKernel {
    sigma: f64,
}

impl GaussianWalkKernel {
    /// Creates the kernel for increments `N(0, sigma^2)`.
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "noise scale must be positive, got {sigma}"
            )));
        }
        Ok(GaussianWalkKernel { sigma })
    }
}

impl TransitionDensity for GaussianWalkKernel {
    fn density(&self, x: f64, y: f64) -> f64 {
        let z = (y - x) / self.sigma;
        FRAC_1_SQRT_2PI / self.sigma * (-0.5 * z * z).exp()
    }

    // The density depends on |y - x| alone and decreases in it, so the
    // infimum over the square sits at the opposite corners.
    fn inf_over_square(&self, set: &SmallSet) -> f64 {
        self.density(set.lower(), set.upper())
    }
}

/// Adapter turning a plain closure into a [`TransitionDensity`], using
/// the default grid search for infima.
pub struct FnKernel<F: Fn(f64, f64) -> f64>(pub F);

impl<F: Fn(f64, f64) -> f64> TransitionDensity for FnKernel<F> {
    fn density(&self, x: f64, y: f64) -> f64 {
        (self.0)(x, y)
    }
}

/// The interval `[center - epsilon, center + epsilon]` used as the
/// splitting set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallSet {
    center: f64,
    epsilon: f64,
}

impl SmallSet {
    /// Creates the interval; the half-width must be positive and finite.
    pub fn new(center: f64, epsilon: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidSpec(format!("set centre must be finite, got {center}")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "set half-width must be positive, got {epsilon}"
            )));
        }
        Ok(SmallSet { center, epsilon })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lower(&self) -> f64 {
        self.center - self.epsilon
    }

    pub fn upper(&self) -> f64 {
        self.center + self.epsilon
    }

    /// Interval length `2 * epsilon`.
    pub fn width(&self) -> f64 {
        2.0 * self.epsilon
    }

    /// Density of the uniform reference measure `psi` on the set.
    pub fn psi_density(&self) -> f64 {
        1.0 / self.width()
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lower()..=self.upper()).contains(&x)
    }
}

/// The minorization constant `delta = 2 * epsilon * inf_{V x V} p`.
///
/// Fails when the infimum vanishes (no minorization by a uniform density
/// is possible) or exceeds what a probability kernel admits.
pub fn minorization_constant<K: TransitionDensity + ?Sized>(
    kernel: &K,
    set: &SmallSet,
) -> Result<f64> {
    let inf = kernel.inf_over_square(set);
    if !inf.is_finite() || inf <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "transition density infimum {inf} over the set square admits no minorization"
        )));
    }
    let delta = set.width() * inf;
    if delta > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "minorization constant {delta} exceeds 1; the kernel is not a transition density"
        )));
    }
    Ok(delta)
}

/// Bernoulli parameter of the regeneration coin for the transition
/// `x -> y` observed at time `index`.
///
/// Zero when the pair leaves `V x V`; otherwise `inf_{V x V} p / p(x, y)`,
/// which the minorization keeps in `(0, 1]`. A vanishing density on an
/// observed pair, or a parameter above 1 (an infimum overestimated by the
/// grid search), is reported as an error rather than clamped.
fn regeneration_probability<K: TransitionDensity + ?Sized>(
    kernel: &K,
    set: &SmallSet,
    inf: f64,
    x: f64,
    y: f64,
    index: usize,
) -> Result<f64> {
    if !set.contains(x) || !set.contains(y) {
        return Ok(0.0);
    }
    let p = kernel.density(x, y);
    if p.is_nan() || p <= 0.0 {
        return Err(Error::KernelVanishes { index });
    }
    let parameter = inf / p;
    if parameter > 1.0 + 1e-9 {
        return Err(Error::MinorizationViolated { index, parameter });
    }
    Ok(parameter.min(1.0))
}

/// Conditional expected number of regenerations given the trajectory:
/// the sum of the coin parameters over all transitions inside `V x V`.
///
/// Unlike [`split_chain_blocks`] this is deterministic, which makes it
/// the natural objective for tuning the set width. A set the trajectory
/// never pairs into yields 0; a vanishing infimum also yields 0, since
/// the corresponding split chain never regenerates.
pub fn expected_blocks<K: TransitionDensity + ?Sized>(
    kernel: &K,
    traj: &Trajectory,
    set: &SmallSet,
) -> Result<f64> {
    let inf = kernel.inf_over_square(set);
    if !inf.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "transition density infimum {inf} over the set square admits no minorization"
        )));
    }
    if inf <= 0.0 {
        return Ok(0.0);
    }
    let states = traj.states();
    let mut total = 0.0;
    for (i, pair) in states.windows(2).enumerate() {
        total += regeneration_probability(kernel, set, inf, pair[0], pair[1], i + 1)?;
    }
    Ok(total)
}

/// Runs the auxiliary regeneration coins along a trajectory and returns
/// the resulting blocks.
///
/// A regeneration at time `i + 1` means the transition `X_i -> X_{i+1}`
/// drew a success; block durations between successive regenerations are
/// i.i.d. heavy tailed with the chain's recurrence index. Randomness is
/// consumed only on transitions inside `V x V`, one draw each.
pub fn split_chain_blocks<K: TransitionDensity + ?Sized, R: Rng + ?Sized>(
    kernel: &K,
    traj: &Trajectory,
    set: &SmallSet,
    rng: &mut R,
) -> Result<RegenerationBlocks> {
    // Fail fast when no minorization exists at this width.
    let delta = minorization_constant(kernel, set)?;
    let inf = delta / set.width();
    let mut hit_times = Vec::new();
    for (i, pair) in traj.states().windows(2).enumerate() {
        let parameter = regeneration_probability(kernel, set, inf, pair[0], pair[1], i + 1)?;
        if parameter > 0.0 && rng.random::<f64>() < parameter {
            hit_times.push(i + 1);
        }
    }
    Ok(RegenerationBlocks::from_hit_times(hit_times))
}

/// Tail-index estimate of the recurrence time distribution via the split
/// chain: coins, blocks, then the survival-ratio estimator on durations.
pub fn split_chain_tail_index<K: TransitionDensity + ?Sized, R: Rng + ?Sized>(
    kernel: &K,
    traj: &Trajectory,
    set: &SmallSet,
    rng: &mut R,
    k: Option<u32>,
) -> Result<TailEstimate> {
    let blocks = split_chain_blocks(kernel, traj, set, rng)?;
    tail_index_from_blocks(&blocks, k)
}

/// One candidate width in an [`scan_epsilon`] sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonScanPoint {
    pub epsilon: f64,
    /// Minorization constant at this width, 0 when none exists.
    pub delta: f64,
    /// Conditional expected number of regenerations.
    pub expected_blocks: f64,
}

/// Evaluates candidate half-widths around a fixed centre.
///
/// Widths whose infimum vanishes are recorded with `delta = 0` and zero
/// expected blocks instead of failing, so a sweep can span past the
/// usable range.
pub fn scan_epsilon<K: TransitionDensity + ?Sized>(
    kernel: &K,
    traj: &Trajectory,
    center: f64,
    epsilons: &[f64],
) -> Result<Vec<EpsilonScanPoint>> {
    if epsilons.is_empty() {
        return Err(Error::InvalidSpec("no candidate half-widths given".into()));
    }
    let mut points = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let set = SmallSet::new(center, epsilon)?;
        let inf = kernel.inf_over_square(&set);
        if !inf.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "transition density infimum {inf} at half-width {epsilon}"
            )));
        }
        if inf <= 0.0 {
            points.push(EpsilonScanPoint { epsilon, delta: 0.0, expected_blocks: 0.0 });
            continue;
        }
        let delta = minorization_constant(kernel, &set)?;
        let expected = expected_blocks(kernel, traj, &set)?;
        points.push(EpsilonScanPoint { epsilon, delta, expected_blocks: expected });
    }
    Ok(points)
}

/// Picks the candidate half-width with the largest conditional expected
/// block count. Fails when no candidate produces any expected
/// regeneration at all.
pub fn select_epsilon<K: TransitionDensity + ?Sized>(
    kernel: &K,
    traj: &Trajectory,
    center: f64,
    epsilons: &[f64],
) -> Result<EpsilonScanPoint> {
    let points = scan_epsilon(kernel, traj, center, epsilons)?;
    let best = points
        .into_iter()
        .max_by(|a, b| a.expected_blocks.total_cmp(&b.expected_blocks))
        .expect("scan_epsilon rejects empty candidate lists");
    if best.expected_blocks <= 0.0 {
        return Err(Error::SmallSetNeverVisited);
    }
    Ok(best)
}
