//! Tail-index estimation from the ratio of empirical log-survival
//! probabilities.
//!
//! For a positive integer sample `S_1, ..., S_n` define the empirical
//! survival probability at level `l` as
//!
//! ```text
//! p_hat(l) = #{ i : S_i > e^l } / n
//! ```
//!
//! When the underlying survival function is `P(S > x) = x^(-beta) * L(x)`
//! with `L` slowly varying, the difference `ln p_hat(k) - ln p_hat(k+1)`
//! concentrates around `beta` for levels `k` of order `ln n`. This module
//! provides that estimator together with a finite-sample deviation bound,
//! studentized confidence intervals, window averaging, and level scans.
//!
//! Thresholds are the integer cutoffs `floor(e^l)`, so that the exceedance
//! test `S > e^l` reduces to an exact integer comparison.

// Supplies f64 math in no_std builds. When std ends up in the crate graph
// (tests, std-enabled dependents) the inherent methods shadow the trait and
// the import sits idle, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;


use crate::special::inverse_normal_cdf;
use crate::{Error, Result};

/// Largest level `l` for which `floor(e^l)` still fits in a `u64`.
///
/// Levels above this carry no representable sample mass: every stored
/// value compares below their threshold, so their survival probability is
/// identically zero.
pub const MAX_LEVEL: u32 = 44;

/// Widest level range a single scan may cover.
const MAX_SCAN_SPAN: u32 = 10_000;

/// Integer threshold `floor(e^level)`, or `None` when it exceeds `u64`.
///
/// All exceedance counts in this crate are taken against these thresholds,
/// so empirical and population survival probabilities discretize the same
/// way.
pub fn level_threshold(level: u32) -> Option<u64> {
    if level > MAX_LEVEL {
        return None;
    }
    Some((level as f64).exp().floor() as u64)
}

/// A batch of positive integer observations.
///
/// Construction validates that the batch is non-empty and every value is
/// at least 1; downstream estimators rely on both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBatch {
    values: Vec<u64>,
}

impl SampleBatch {
    /// Wraps a vector of observations, rejecting empty input and zeros.
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = values.iter().position(|&v| v == 0) {
            return Err(Error::InvalidValue { index });
        }
        Ok(SampleBatch { values })
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: emptiness is rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The observations, in insertion order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// Empirical survival probabilities on a contiguous grid of levels.
///
/// The grid is clamped at [`MAX_LEVEL`]; querying a level beyond it (or
/// outside the requested range) returns `None`, which callers should read
/// as "identically zero mass".
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    first_level: u32,
    probs: Vec<f64>,
    n: usize,
}

impl SurvivalCurve {
    /// First level of the grid.
    pub fn first_level(&self) -> u32 {
        self.first_level
    }

    /// Sample size the curve was computed from.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    /// Survival probability at `level`, if it lies on the grid.
    pub fn prob(&self, level: u32) -> Option<f64> {
        let offset = level.checked_sub(self.first_level)? as usize;
        self.probs.get(offset).copied()
    }

    /// Survival probability at `level`, defaulting off-grid levels to 0.
    pub fn prob_or_zero(&self, level: u32) -> f64 {
        self.prob(level).unwrap_or(0.0)
    }

    /// Iterates over `(level, probability)` pairs in increasing level order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.first_level + i as u32, p))
    }
}

/// Empirical survival probabilities `p_hat(l)` for every level in `levels`.
///
/// Streams over the batch once: each observation is located among the
/// (strictly increasing) thresholds by binary search, and per-level counts
/// are recovered by a suffix sum. Cost is `O(n log m + m)` for `m` levels.
pub fn empirical_survival(batch: &SampleBatch, levels: RangeInclusive<u32>) -> SurvivalCurve {
    let first = *levels.start();
    let n = batch.len();
    if levels.is_empty() || first > MAX_LEVEL {
        return SurvivalCurve { first_level: first, probs: Vec::new(), n };
    }
    let last = (*levels.end()).min(MAX_LEVEL);
    let m = (last - first + 1) as usize;
    let thresholds: Vec<u64> = (first..=last).map(|l| level_threshold(l).unwrap()).collect();

    // hist[j] = number of values exceeding exactly the first j thresholds.
    let mut hist = vec![0usize; m + 1];
    for &v in batch.values() {
        let exceeded = thresholds.partition_point(|&t| t < v);
        hist[exceeded] += 1;
    }

    // Suffix sums turn "exceeds exactly j" into "exceeds at least j + 1".
    let mut probs = vec![0.0; m];
    let mut running = 0usize;
    for j in (0..m).rev() {
        running += hist[j + 1];
        probs[j] = running as f64 / n as f64;
    }
    SurvivalCurve { first_level: first, probs, n }
}

/// Two-sided confidence interval for the tail index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    /// Lower endpoint, clamped below at 0.
    pub lo: f64,
    /// Upper endpoint.
    pub hi: f64,
    /// Nominal coverage level in `(0, 1)`.
    pub level: f64,
}

/// Output of the survival-ratio estimator at a single level.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Estimated tail index `ln p_hat(k) - ln p_hat(k+1)`, or 0 when the
    /// upper level carries no sample mass.
    pub beta: f64,
    /// Level the estimate was taken at.
    pub k: u32,
    /// Number of observations behind the estimate.
    pub n: usize,
    /// Empirical survival probability at level `k`.
    pub survival_k: f64,
    /// Empirical survival probability at level `k + 1`.
    pub survival_k1: f64,
    /// True when `p_hat(k+1) = 0` forced the zero convention.
    pub degenerate: bool,
    /// Studentized confidence interval, when one was requested.
    pub ci: Option<ConfidenceInterval>,
}

fn estimate_from_probs(k: u32, n: usize, p_k: f64, p_k1: f64) -> TailEstimate {
    let degenerate = p_k1 <= 0.0;
    let beta = if degenerate { 0.0 } else { p_k.ln() - p_k1.ln() };
    TailEstimate {
        beta,
        k,
        n,
        survival_k: p_k,
        survival_k1: p_k1,
        degenerate,
        ci: None,
    }
}

/// Survival-ratio estimate of the tail index at level `k`.
///
/// Returns `ln p_hat(k) - ln p_hat(k+1)`. When no observation exceeds
/// `e^(k+1)` the estimate is 0 and the `degenerate` flag is set; this is a
/// reportable outcome, not an error.
pub fn tail_index(batch: &SampleBatch, k: u32) -> TailEstimate {
    let hi = k.saturating_add(1);
    let curve = empirical_survival(batch, k..=hi);
    estimate_from_probs(k, batch.len(), curve.prob_or_zero(k), curve.prob_or_zero(hi))
}

/// Window-averaged survival-ratio estimate at level `k`.
///
/// Averages the single-level estimates over `k - m ..= k + m`; requires
/// `k >= m` so the window stays on non-negative levels. The reported
/// survival probabilities are those of the centre level, and the
/// degenerate flag is set when any window member is degenerate (each such
/// member contributes 0 to the average). With `m = 0` the output is
/// identical to [`tail_index`].
pub fn averaged_tail_index(batch: &SampleBatch, k: u32, m: u32) -> Result<TailEstimate> {
    if k < m {
        return Err(Error::WindowExceedsLevel { k, m });
    }
    let lo = k - m;
    let top = k.saturating_add(m);
    let curve = empirical_survival(batch, lo..=top.saturating_add(1));
    let mut sum = 0.0;
    // Window members past MAX_LEVEL never see sample mass.
    let mut degenerate = top > MAX_LEVEL;
    for j in lo..=top.min(MAX_LEVEL) {
        let inner = estimate_from_probs(
            j,
            batch.len(),
            curve.prob_or_zero(j),
            curve.prob_or_zero(j + 1),
        );
        sum += inner.beta;
        degenerate |= inner.degenerate;
    }
    let window = 2.0 * m as f64 + 1.0;
    Ok(TailEstimate {
        beta: sum / window,
        k,
        n: batch.len(),
        survival_k: curve.prob_or_zero(k),
        survival_k1: curve.prob_or_zero(k.saturating_add(1)),
        degenerate,
        ci: None,
    })
}

/// Finite-sample deviation bound for the survival-ratio estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationBound {
    /// Confidence parameter the bound was computed for.
    pub delta: f64,
    /// Sample-complexity rate `ln(2/delta) / n`.
    pub u_n: f64,
    /// Half-width `6 * sqrt(u_n / p_k1)` of the sampling-noise band.
    pub bound: f64,
    /// Whether the precondition `p_k1 >= 16 * u_n` held.
    pub applicable: bool,
}

/// Deviation bound on the sampling noise of the estimator.
///
/// With probability at least `1 - 2 * delta`, the estimator at level `k`
/// deviates from its population counterpart by at most `bound`, provided
/// the survival probability `tail_prob` at level `k + 1` satisfies
/// `tail_prob >= 16 * u_n` (reported through `applicable`). The bound is
/// still computed when the precondition fails, so callers can inspect it.
///
/// `tail_prob` may be the true survival probability (synthetic studies) or
/// the plug-in estimate `p_hat(k+1)`.
pub fn deviation_bound(n: usize, delta: f64, tail_prob: f64) -> Result<DeviationBound> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidDelta { delta });
    }
    if !(tail_prob > 0.0 && tail_prob <= 1.0) {
        return Err(Error::InvalidTailProbability { p: tail_prob });
    }
    let u_n = (2.0 / delta).ln() / n as f64;
    Ok(DeviationBound {
        delta,
        u_n,
        bound: 6.0 * (u_n / tail_prob).sqrt(),
        applicable: tail_prob >= 16.0 * u_n,
    })
}

/// Half-width of the studentized confidence interval.
///
/// The studentized statistic `sqrt(n * p_hat(k)) * (estimate - target) /
/// sqrt(e^estimate - 1)` is asymptotically standard normal, which gives
/// the half-width `z * sqrt((e^estimate - 1) / (n * p_hat(k)))` with `z`
/// the `(1 + level) / 2` normal quantile.
pub fn studentized_half_width(beta: f64, n: usize, survival_k: f64, level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfidenceLevel { level });
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(survival_k > 0.0 && survival_k <= 1.0) {
        return Err(Error::InvalidTailProbability { p: survival_k });
    }
    let z = inverse_normal_cdf(0.5 * (1.0 + level));
    Ok(z * (beta.exp_m1() / (n as f64 * survival_k)).sqrt())
}

fn attach_ci(est: &mut TailEstimate, level: f64) -> Result<()> {
    let half = studentized_half_width(est.beta, est.n, est.survival_k, level)?;
    est.ci = Some(ConfidenceInterval {
        lo: (est.beta - half).max(0.0),
        hi: est.beta + half,
        level,
    });
    Ok(())
}

/// Survival-ratio estimate with a studentized confidence interval.
///
/// Errors with [`Error::NoTailMass`] when `p_hat(k) = 0`: without sample
/// mass at the lower level no interval can be studentized. A degenerate
/// estimate (mass at `k` but not `k + 1`) yields the point interval
/// `[0, 0]`, since the plug-in variance `e^0 - 1` vanishes. The lower
/// endpoint is clamped at 0.
pub fn tail_index_with_ci(batch: &SampleBatch, k: u32, level: f64) -> Result<TailEstimate> {
    let mut est = tail_index(batch, k);
    if est.survival_k <= 0.0 {
        return Err(Error::NoTailMass { k });
    }
    attach_ci(&mut est, level)?;
    Ok(est)
}

/// Level of logarithmic order: `round(a * ln n)`.
///
/// For consistency of the estimator the scale `a` should lie in
/// `(0, 1/beta)`; the rule itself just rounds. Non-positive products
/// clamp to level 0.
pub fn log_level_rule(n: usize, a: f64) -> u32 {
    if n < 2 {
        return 0;
    }
    let k = (a * (n as f64).ln()).round();
    if k <= 0.0 {
        0
    } else if k >= u32::MAX as f64 {
        u32::MAX
    } else {
        k as u32
    }
}

/// Largest level `k` whose estimate still rests on at least five
/// exceedances above `e^(k+1)`, or `None` when even level 0 does not.
///
/// Scans over `0..=max_admissible_level` keep every estimate supported by
/// a minimum of tail mass; degenerate levels are thereby excluded.
pub fn max_admissible_level(batch: &SampleBatch) -> Option<u32> {
    let curve = empirical_survival(batch, 0..=MAX_LEVEL);
    let min_prob = 5.0 / batch.len() as f64;
    let mut best: Option<u32> = None;
    for k in 0..MAX_LEVEL {
        match curve.prob(k + 1) {
            Some(p) if p >= min_prob => best = Some(k),
            _ => break,
        }
    }
    best
}

/// Survival-ratio estimates with confidence intervals over a level range.
///
/// Emits one estimate per level in `levels`. Intervals are attached
/// wherever `p_hat(k) > 0`; levels with `p_hat(k+1) = 0` are reported with
/// the degenerate flag rather than dropped, so scan output always covers
/// the full requested range.
pub fn stability_scan(
    batch: &SampleBatch,
    levels: RangeInclusive<u32>,
    ci_level: f64,
) -> Result<Vec<TailEstimate>> {
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Error::InvalidConfidenceLevel { level: ci_level });
    }
    let lo = *levels.start();
    let hi = *levels.end();
    if lo > hi {
        return Ok(Vec::new());
    }
    if hi - lo > MAX_SCAN_SPAN {
        return Err(Error::InvalidSpec(alloc::format!(
            "scan range {lo}..={hi} exceeds the {MAX_SCAN_SPAN}-level limit"
        )));
    }
    let curve = empirical_survival(batch, lo..=hi.saturating_add(1));
    let n = batch.len();
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for k in lo..=hi {
        let p_k = curve.prob_or_zero(k);
        let p_k1 = curve.prob_or_zero(k.saturating_add(1));
        let mut est = estimate_from_probs(k, n, p_k, p_k1);
        if p_k > 0.0 {
            attach_ci(&mut est, ci_level)?;
        }
        out.push(est);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn batch(values: &[u64]) -> SampleBatch {
        SampleBatch::new(values.to_vec()).unwrap()
    }

    #[test]
    fn thresholds_are_floored_exponentials() {
        assert_eq!(level_threshold(0), Some(1));
        assert_eq!(level_threshold(1), Some(2));
        assert_eq!(level_threshold(2), Some(7));
        assert_eq!(level_threshold(3), Some(20));
        assert_eq!(level_threshold(10), Some(22_026));
        let t44 = level_threshold(44).unwrap();
        assert_relative_eq!(t44 as f64, 44f64.exp(), max_relative = 1e-12);
        assert_eq!(level_threshold(45), None);
    }

    #[test]
    fn batch_rejects_empty_and_zero() {
        assert_eq!(SampleBatch::new(vec![]), Err(Error::EmptySample));
        assert_eq!(
            SampleBatch::new(vec![3, 0, 1]),
            Err(Error::InvalidValue { index: 1 })
        );
    }

    #[test]
    fn survival_curve_small_batch() {
        // Values {1, 2, 3, 10, 100}: 4 of 5 exceed e^0 = 1, 3 of 5 exceed
        // floor(e^1) = 2.
        let b = batch(&[1, 2, 3, 10, 100]);
        let curve = empirical_survival(&b, 0..=5);
        assert_relative_eq!(curve.prob(0).unwrap(), 0.8);
        assert_relative_eq!(curve.prob(1).unwrap(), 0.6);
        assert_relative_eq!(curve.prob(2).unwrap(), 0.4); // > 7: {10, 100}
        assert_relative_eq!(curve.prob(3).unwrap(), 0.2); // > 20: {100}
        assert_relative_eq!(curve.prob(4).unwrap(), 0.2); // > 54: {100}
        assert_relative_eq!(curve.prob(5).unwrap(), 0.0); // > 148: none
    }

    #[test]
    fn survival_grid_clamps_at_max_level() {
        let b = batch(&[u64::MAX]);
        let curve = empirical_survival(&b, 44..=46);
        assert_relative_eq!(curve.prob(44).unwrap(), 1.0);
        assert_eq!(curve.prob(45), None);
        assert_relative_eq!(curve.prob_or_zero(45), 0.0);
    }

    #[test]
    fn tail_index_small_batch() {
        let est = tail_index(&batch(&[1, 2, 3, 10, 100]), 0);
        // ln(0.8) - ln(0.6) = ln(4/3)
        assert_relative_eq!(est.beta, (4.0f64 / 3.0).ln(), epsilon = 1e-15);
        assert!(!est.degenerate);
        assert_eq!(est.n, 5);
    }

    #[test]
    fn tail_index_zero_when_both_levels_saturated() {
        // All values exceed e^(k+1): both probabilities are 1, the
        // estimate is an honest 0, not degenerate.
        let est = tail_index(&batch(&[10, 20]), 0);
        assert_eq!(est.beta, 0.0);
        assert!(!est.degenerate);
        assert_relative_eq!(est.survival_k, 1.0);
        assert_relative_eq!(est.survival_k1, 1.0);
    }

    #[test]
    fn tail_index_degenerate_when_upper_level_empty() {
        // No value exceeds floor(e^2) = 7.
        let est = tail_index(&batch(&[1, 2, 5]), 1);
        assert_eq!(est.beta, 0.0);
        assert!(est.degenerate);
    }

    #[test]
    fn averaged_with_zero_window_is_identical() {
        let b = batch(&[1, 2, 3, 10, 100, 7, 19, 21, 55]);
        for k in 1..=4 {
            let single = tail_index(&b, k);
            let averaged = averaged_tail_index(&b, k, 0).unwrap();
            assert_eq!(single, averaged);
        }
    }

    #[test]
    fn averaged_matches_direct_enumeration() {
        let b = batch(&[1, 2, 3, 10, 100]);
        // Probabilities at levels 0..=3 are 0.8, 0.6, 0.4, 0.2, so the
        // three window members are ln(4/3), ln(3/2), ln(2).
        let expected = ((4.0f64 / 3.0).ln() + 1.5f64.ln() + 2.0f64.ln()) / 3.0;
        let est = averaged_tail_index(&b, 1, 1).unwrap();
        assert_relative_eq!(est.beta, expected, epsilon = 1e-15);
        assert!(!est.degenerate);
        assert_relative_eq!(est.survival_k, 0.6);
        assert_relative_eq!(est.survival_k1, 0.4);
    }

    #[test]
    fn averaged_degenerate_window_member_sets_flag() {
        // p_hat(3) = 0 makes the j = 2 member degenerate.
        let b = batch(&[1, 2, 3, 10]);
        let est = averaged_tail_index(&b, 1, 1).unwrap();
        assert!(est.degenerate);
    }

    #[test]
    fn averaged_window_must_fit() {
        let b = batch(&[1, 2, 3]);
        assert_eq!(
            averaged_tail_index(&b, 1, 2),
            Err(Error::WindowExceedsLevel { k: 1, m: 2 })
        );
        assert_eq!(
            averaged_tail_index(&b, 2, 5),
            Err(Error::WindowExceedsLevel { k: 2, m: 5 })
        );
        // k = m is the boundary: the window bottoms out at level 0.
        assert!(averaged_tail_index(&b, 2, 2).is_ok());
    }

    #[test]
    fn deviation_bound_reference_values() {
        let b = deviation_bound(10_000, 0.05, 0.1).unwrap();
        assert_relative_eq!(b.u_n, 40f64.ln() / 1e4, epsilon = 1e-15);
        assert_relative_eq!(b.bound, 0.364_42, epsilon = 5e-6);
        assert!(b.applicable);

        // Shrinking the tail probability below 16 * u_n flips the flag but
        // the bound is still reported.
        let tight = deviation_bound(10_000, 0.05, 4e-3).unwrap();
        assert!(!tight.applicable);
        assert!(tight.bound > 0.0);
    }

    #[test]
    fn deviation_bound_halves_when_n_quadruples() {
        let b1 = deviation_bound(5_000, 0.01, 0.2).unwrap();
        let b4 = deviation_bound(20_000, 0.01, 0.2).unwrap();
        assert_eq!(b4.bound, b1.bound / 2.0);
        assert_eq!(b4.u_n, b1.u_n / 4.0);
    }

    #[test]
    fn deviation_bound_rejects_bad_parameters() {
        assert_eq!(
            deviation_bound(100, 0.6, 0.1),
            Err(Error::InvalidDelta { delta: 0.6 })
        );
        assert_eq!(
            deviation_bound(100, 0.0, 0.1),
            Err(Error::InvalidDelta { delta: 0.0 })
        );
        assert_eq!(
            deviation_bound(100, 0.05, 0.0),
            Err(Error::InvalidTailProbability { p: 0.0 })
        );
        assert_eq!(deviation_bound(0, 0.05, 0.1), Err(Error::EmptySample));
    }

    #[test]
    fn studentized_half_width_reference_value() {
        let half = studentized_half_width(0.5, 10_000, 0.1, 0.95).unwrap();
        assert_relative_eq!(half, 0.049_921, epsilon = 5e-6);
    }

    #[test]
    fn studentized_ci_clamps_at_zero_and_collapses_when_degenerate() {
        // Tiny batch, beta_hat = ln 2 with a half-width near 1.39: the
        // interval would dip below zero without clamping.
        let est = tail_index_with_ci(&batch(&[1, 2, 3]), 0, 0.95).unwrap();
        let ci = est.ci.unwrap();
        assert_eq!(ci.lo, 0.0);
        assert!(ci.hi > est.beta);

        // Mass at k but not k + 1: degenerate estimate, point interval.
        let est = tail_index_with_ci(&batch(&[1, 2, 5]), 1, 0.95).unwrap();
        assert!(est.degenerate);
        let ci = est.ci.unwrap();
        assert_eq!((ci.lo, ci.hi), (0.0, 0.0));
    }

    #[test]
    fn studentized_ci_errors_without_tail_mass() {
        assert_eq!(
            tail_index_with_ci(&batch(&[1, 2]), 3, 0.95),
            Err(Error::NoTailMass { k: 3 })
        );
        assert_eq!(
            tail_index_with_ci(&batch(&[1, 2, 3]), 0, 1.5),
            Err(Error::InvalidConfidenceLevel { level: 1.5 })
        );
    }

    #[test]
    fn tiny_confidence_level_collapses_interval() {
        let est = tail_index_with_ci(&batch(&[1, 2, 3, 10, 100]), 0, 1e-12).unwrap();
        let ci = est.ci.unwrap();
        assert!(ci.hi - ci.lo < 1e-10);
    }

    #[test]
    fn log_level_rule_reference_values() {
        assert_eq!(log_level_rule(1_000_000, 1.0), 14); // ln 1e6 = 13.8155
        assert_eq!(log_level_rule(22_026, 0.5), 5); // n = round(e^10)
        assert_eq!(log_level_rule(1, 1.0), 0);
        assert_eq!(log_level_rule(100, -1.0), 0);
    }

    #[test]
    fn log_level_rule_roughly_doubles_when_n_squares() {
        for &n in &[100usize, 1_000, 10_000, 100_000] {
            let k = log_level_rule(n, 0.8);
            let k2 = log_level_rule(n * n, 0.8);
            assert!(k2 >= 2 * k - 1 && k2 <= 2 * k + 1, "n = {n}: {k} vs {k2}");
        }
    }

    #[test]
    fn admissible_level_requires_five_exceedances() {
        // Ten values above floor(e^1) = 2 but only four above
        // floor(e^2) = 7: level 0 is admissible, level 1 is not.
        let mut values = vec![3u64; 6];
        values.extend([8, 9, 10, 11]);
        let b = SampleBatch::new(values).unwrap();
        assert_eq!(max_admissible_level(&b), Some(0));

        // Nothing above 2 at all.
        assert_eq!(max_admissible_level(&batch(&[1, 1, 2])), None);
    }

    #[test]
    fn stability_scan_covers_range_and_flags_degenerates() {
        let b = batch(&[1, 2, 3, 10, 100]);
        let scan = stability_scan(&b, 0..=6, 0.95).unwrap();
        assert_eq!(scan.len(), 7);
        assert_eq!(scan[0].k, 0);
        assert_eq!(scan[6].k, 6);
        // Levels 0..=3 have mass above k + 1; level 4 (threshold 148) does
        // not, so from there the scan is degenerate but still present.
        for est in &scan[..4] {
            assert!(!est.degenerate);
            assert!(est.ci.is_some());
        }
        for est in &scan[4..] {
            assert!(est.degenerate);
        }
        // p_hat(k) = 0 from level 5 on: no interval can be attached.
        assert!(scan[5].ci.is_none());
        assert!(scan[6].ci.is_none());
    }

    #[test]
    fn stability_scan_beyond_data_is_all_degenerate() {
        let b = batch(&[1, 2, 3]);
        let scan = stability_scan(&b, 10..=12, 0.95).unwrap();
        assert!(scan.iter().all(|e| e.degenerate && e.beta == 0.0));
    }
}
