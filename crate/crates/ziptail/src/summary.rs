//! Replicate aggregation: mean, spread, and empirical quantile bands.

use serde::Serialize;

use crate::{AppError, Result};

/// Aggregate of one estimator across replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Empirical quantile at `(1 - level) / 2`.
    pub q_lo: f64,
    /// Empirical quantile at `(1 + level) / 2`.
    pub q_hi: f64,
    /// Sample standard deviation (0 for a single value).
    pub sd: f64,
}

/// Mean, central `level` quantile band, and standard deviation.
///
/// Quantiles use linear interpolation between order statistics (the
/// common "type 7" rule), so a single replicate reproduces itself in
/// every column.
pub fn summarize(values: &[f64], level: f64) -> Result<Summary> {
    if values.is_empty() {
        return Err(AppError::runtime("cannot summarize an empty sequence"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(AppError::config(format!(
            "quantile band level must lie in (0, 1), got {level}"
        )));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n < 2 {
        0.0
    } else {
        let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
        (ss / (n - 1) as f64).sqrt()
    };
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(Summary {
        mean,
        q_lo: quantile_sorted(&sorted, (1.0 - level) / 2.0),
        q_hi: quantile_sorted(&sorted, (1.0 + level) / 2.0),
        sd,
    })
}

/// Type-7 empirical quantile of an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0 && (0.0..=1.0).contains(&q));
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}
