//! Exact samplers for discrete heavy-tailed distributions.
//!
//! A generalized Zipf law on the positive integers is specified through
//! its survival function
//!
//! ```text
//! P(S > n) = min(1, n^(-beta) * L(n)),          n = 1, 2, ...
//! ```
//!
//! with tail index `beta > 0` and a slowly varying factor `L` drawn from a
//! small family of closed forms. Sampling is by inverse transform on the
//! survival function, so the law of the output matches the specification
//! exactly — there is no asymptotic approximation anywhere. Zeta (Zipf)
//! variates with unbounded support are generated separately via
//! rejection-inversion.

// Supplies f64 math in no_std builds. When std ends up in the crate graph
// (tests, std-enabled dependents) the inherent methods shadow the trait and
// the import sits idle, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::Distribution;

use crate::tail::{level_threshold, SampleBatch};
use crate::{Error, Result};

/// Largest value inverse-transform sampling will return.
const VALUE_CAP: u64 = (1 << 63) - 1;

/// Slowly varying factors `L(x)` available to [`HeavyTailSpec`].
///
/// All variants are shifted or scaled so they are defined (and positive)
/// from `x = 1` on.
#[derive(Debug, Clone, PartialEq)]
pub enum SlowlyVarying {
    /// `L(x) = c`.
    Constant { c: f64 },
    /// `L(x) = c * ln(e * x)`, i.e. a logarithm shifted to equal `c` at 1.
    Log { c: f64 },
    /// `L(x) = c / ln(e * x)`.
    InvLog { c: f64 },
    /// Second-order regular variation with remainder exponent `rho < 0`:
    /// `L(x) = 1 - (c / |rho|) * u * x^rho`.
    Sr2 { c: f64, rho: f64, u: f64 },
    /// `L(x) = e^(c0) * (1 + x^(-lambda))`, asymptotically constant with
    /// approach rate `lambda > 0`.
    AsympConst { c0: f64, lambda: f64 },
}

impl SlowlyVarying {
    /// Evaluates `L(x)` for `x >= 1`.
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            SlowlyVarying::Constant { c } => c,
            SlowlyVarying::Log { c } => c * (1.0 + x.ln()),
            SlowlyVarying::InvLog { c } => c / (1.0 + x.ln()),
            SlowlyVarying::Sr2 { c, rho, u } => 1.0 - c / rho.abs() * u * x.powf(rho),
            SlowlyVarying::AsympConst { c0, lambda } => c0.exp() * (1.0 + x.powf(-lambda)),
        }
    }

    fn validate_parameters(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidSpec(format!("{reason}: {self:?}")));
        match *self {
            SlowlyVarying::Constant { c } | SlowlyVarying::Log { c } | SlowlyVarying::InvLog { c } => {
                if !(c > 0.0 && c.is_finite()) {
                    return bad("scale must be positive and finite");
                }
            }
            SlowlyVarying::Sr2 { c, rho, u } => {
                if !(c >= 0.0 && c.is_finite() && u >= 0.0 && u.is_finite()) {
                    return bad("remainder scale must be non-negative and finite");
                }
                if !(rho < 0.0 && rho.is_finite()) {
                    return bad("remainder exponent must be negative");
                }
            }
            SlowlyVarying::AsympConst { c0, lambda } => {
                if !c0.is_finite() {
                    return bad("log-level must be finite");
                }
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return bad("approach rate must be positive");
                }
            }
        }
        Ok(())
    }
}

/// A validated heavy-tailed distribution on the positive integers.
///
/// Construction checks the parameters and scans the induced survival map
/// for monotonicity and range violations, so that every instance reaching
/// the samplers describes an honest probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyTailSpec {
    beta: f64,
    svf: SlowlyVarying,
}

impl HeavyTailSpec {
    /// Validates and wraps a tail index and slowly varying factor.
    ///
    /// The survival map `n -> min(1, n^(-beta) * L(n))` is evaluated on
    /// every integer up to 256 (where shifted logarithms can misbehave)
    /// and at doubling points with neighbours out to `10^7`; any increase
    /// or departure from `[0, 1]` rejects the specification.
    pub fn new(beta: f64, svf: SlowlyVarying) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "tail index must be positive and finite, got {beta}"
            )));
        }
        svf.validate_parameters()?;
        let spec = HeavyTailSpec { beta, svf };

        let mut checkpoints: Vec<u64> = (1..=256).collect();
        let mut d = 512u64;
        while d <= 16_777_216 {
            checkpoints.extend([d - 1, d, d + 1]);
            d *= 2;
        }
        checkpoints.extend([9_999_999, 10_000_000]);
        checkpoints.sort_unstable();

        let mut prev = 1.0f64;
        for (i, &m) in checkpoints.iter().enumerate() {
            let s = spec.survival(m);
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidSpec(format!(
                    "survival leaves [0, 1] at n = {m}: {s}"
                )));
            }
            if i > 0 && s > prev + 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "survival increases near n = {m}: {prev} -> {s}"
                )));
            }
            prev = s;
        }
        Ok(spec)
    }

    /// The tail index `beta`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The slowly varying factor.
    pub fn svf(&self) -> &SlowlyVarying {
        &self.svf
    }

    /// Survival probability `P(S > n) = min(1, n^(-beta) * L(n))`.
    ///
    /// `survival(0)` is 1 by convention.
    pub fn survival(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let x = n as f64;
        (x.powf(-self.beta) * self.svf.value(x)).min(1.0)
    }

    /// Population counterpart of the survival-ratio estimator at level `k`:
    /// `ln P(S > floor(e^k)) - ln P(S > floor(e^(k+1)))`.
    ///
    /// Converges to `beta` as `k` grows; the gap is the slowly-varying
    /// bias plus the effect of integer thresholds. Levels whose threshold
    /// exceeds `u64` are rejected.
    pub fn survival_log_ratio(&self, k: u32) -> Result<f64> {
        let t_k = level_threshold(k).ok_or(Error::LevelOverflow { k })?;
        let t_k1 = level_threshold(k + 1).ok_or(Error::LevelOverflow { k: k + 1 })?;
        Ok(self.survival(t_k).ln() - self.survival(t_k1).ln())
    }

    /// Smallest `n >= 1` with `survival(n) < u`, the inverse-transform
    /// sample at uniform variate `u` in `(0, 1]`.
    ///
    /// Exponential doubling brackets the crossing, then binary search pins
    /// it down; the output `S` always satisfies
    /// `survival(S) < u <= survival(S - 1)`. Searches that run past
    /// `2^63 - 1` report [`Error::SampleRangeExceeded`].
    pub fn invert(&self, u: f64) -> Result<u64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::InvalidTailProbability { p: u });
        }
        if self.survival(1) < u {
            return Ok(1);
        }
        // Invariant: survival(lo) >= u; search for hi with survival(hi) < u.
        let mut lo = 1u64;
        let mut hi;
        loop {
            hi = lo.saturating_mul(2).min(VALUE_CAP);
            if self.survival(hi) < u {
                break;
            }
            if hi == VALUE_CAP {
                return Err(Error::SampleRangeExceeded);
            }
            lo = hi;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) < u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Draws one value, exactly distributed according to the spec.
    ///
    /// For the pure power law (`Constant` with `c = 1`) the inverse
    /// transform has the closed form `ceil(u^(-1/beta))`; every other
    /// variant goes through the generic search in [`HeavyTailSpec::invert`].
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        // 1 - U maps the generator's [0, 1) to the (0, 1] inversion needs.
        let u = 1.0 - rng.random::<f64>();
        if let SlowlyVarying::Constant { c } = self.svf {
            if c == 1.0 {
                let raw = u.powf(-1.0 / self.beta);
                // Snap to the integer when the power lands on one up to
                // rounding error, so u = survival(m) yields m, not m + 1.
                let nearest = raw.round();
                let x = if (raw - nearest).abs() <= raw * 1e-12 {
                    nearest
                } else {
                    raw.ceil()
                };
                if x >= VALUE_CAP as f64 {
                    return Err(Error::SampleRangeExceeded);
                }
                return Ok(x as u64);
            }
        }
        self.invert(u)
    }

    /// Draws a batch of `count` values.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<SampleBatch> {
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            values.push(self.sample_one(rng)?);
        }
        SampleBatch::new(values)
    }
}

/// Leading second-order bias of the estimator under an [`SlowlyVarying::Sr2`]
/// factor, at level `k = a * ln n`:
///
/// ```text
/// -c * |rho|^(-1) * n^(-a * |rho|) * u * (1 - e^(-|rho|))
/// ```
///
/// Useful for checking how fast the slowly-varying bias decays along the
/// logarithmic level rule. `rho` is the (negative) remainder exponent.
pub fn second_order_bias(c: f64, rho: f64, u: f64, a: f64, n: usize) -> f64 {
    let r = rho.abs();
    -c / r * (n as f64).powf(-a * r) * u * (-(-r).exp_m1())
}

/// A zeta (discrete Pareto/Zipf with unbounded support) distribution with
/// probability mass function proportional to `j^(-s)`, `j = 1, 2, ...`.
///
/// Its survival function is regularly varying with tail index `s - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaSpec {
    s: f64,
}

impl ZetaSpec {
    /// Validates the mass exponent; `s > 1` is required for summability.
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 1.0 && s.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "zeta exponent must exceed 1, got {s}"
            )));
        }
        Ok(ZetaSpec { s })
    }

    /// The mass exponent `s`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Tail index of the induced survival function, `s - 1`.
    pub fn tail_index(&self) -> f64 {
        self.s - 1.0
    }

    /// Draws one zeta variate by rejection-inversion.
    ///
    /// Values beyond `u64` saturate; at the levels the estimators can
    /// resolve this is invisible, since no threshold reaches that high.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let dist = rand_distr::Zeta::new(self.s).expect("validated at construction");
        loop {
            let v: f64 = dist.sample(rng);
            if v.is_finite() {
                return (v as u64).max(1);
            }
        }
    }

    /// Draws a batch of `count` zeta variates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<SampleBatch> {
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            values.push(self.sample_one(rng));
        }
        SampleBatch::new(values)
    }
}
