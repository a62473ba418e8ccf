//! JSON-facing configuration types and their conversions into validated
//! core objects.
//!
//! Every enum is tagged by a `kind` field, so a sampling spec reads like
//! `{"kind": "heavy_tail", "beta": 0.5, "svf": {"kind": "constant", "c": 1.0}}`
//! and a chain like `{"kind": "bessel", "delta": 0.2}`. Conversion
//! delegates all numeric validation to the core constructors and maps
//! their rejections to configuration errors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use ziptail_core::dgp::{HeavyTailSpec, SlowlyVarying, ZetaSpec};
use ziptail_core::markov::{BesselDrift, ChainSpec};
use ziptail_core::tail::SampleBatch;

use crate::{AppError, Result};

/// Slowly varying factor of a heavy-tailed survival function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SvfConfig {
    Constant { c: f64 },
    Log { c: f64 },
    InvLog { c: f64 },
    Sr2 { c: f64, rho: f64, u: f64 },
    AsympConst { c0: f64, lambda: f64 },
}

impl From<SvfConfig> for SlowlyVarying {
    fn from(cfg: SvfConfig) -> Self {
        match cfg {
            SvfConfig::Constant { c } => SlowlyVarying::Constant { c },
            SvfConfig::Log { c } => SlowlyVarying::Log { c },
            SvfConfig::InvLog { c } => SlowlyVarying::InvLog { c },
            SvfConfig::Sr2 { c, rho, u } => SlowlyVarying::Sr2 { c, rho, u },
            SvfConfig::AsympConst { c0, lambda } => SlowlyVarying::AsympConst { c0, lambda },
        }
    }
}

/// A distribution to draw i.i.d. integer samples from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionConfig {
    /// Survival `min(1, n^(-beta) * L(n))` with exact inverse-transform
    /// sampling.
    HeavyTail { beta: f64, svf: SvfConfig },
    /// Zeta (Zipf) law with mass proportional to `n^(-s)`.
    Zeta { s: f64 },
}

/// A validated sampler built from a [`DistributionConfig`].
#[derive(Debug, Clone)]
pub enum Sampler {
    HeavyTail(HeavyTailSpec),
    Zeta(ZetaSpec),
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<SampleBatch> {
        match self {
            Sampler::HeavyTail(spec) => spec
                .sample(rng, count)
                .map_err(|e| AppError::runtime(format!("sampling failed: {e}"))),
            Sampler::Zeta(spec) => spec
                .sample(rng, count)
                .map_err(|e| AppError::runtime(format!("sampling failed: {e}"))),
        }
    }
}

impl DistributionConfig {
    pub fn build(&self) -> Result<Sampler> {
        match self.clone() {
            DistributionConfig::HeavyTail { beta, svf } => HeavyTailSpec::new(beta, svf.into())
                .map(Sampler::HeavyTail)
                .map_err(|e| AppError::config(format!("invalid distribution: {e}"))),
            DistributionConfig::Zeta { s } => ZetaSpec::new(s)
                .map(Sampler::Zeta)
                .map_err(|e| AppError::config(format!("invalid distribution: {e}"))),
        }
    }
}

/// State-dependent drift of the Bessel-like walk.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftConfig {
    #[default]
    Zero,
    LogDamped { scale: f64 },
}

impl From<DriftConfig> for BesselDrift {
    fn from(cfg: DriftConfig) -> Self {
        match cfg {
            DriftConfig::Zero => BesselDrift::Zero,
            DriftConfig::LogDamped { scale } => BesselDrift::LogDamped { scale },
        }
    }
}

/// A Markov chain to simulate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainConfig {
    Ssrw {
        #[serde(default)]
        reflected: bool,
    },
    Bessel {
        delta: f64,
        #[serde(default)]
        drift: DriftConfig,
    },
    Renewal {
        beta: f64,
        svf: SvfConfig,
    },
    Tar {
        alpha1: f64,
        threshold: f64,
        sigma: f64,
    },
    GaussianWalk {
        sigma: f64,
    },
}

impl ChainConfig {
    pub fn build(&self) -> Result<ChainSpec> {
        let spec = match self.clone() {
            ChainConfig::Ssrw { reflected } => ChainSpec::Ssrw { reflected },
            ChainConfig::Bessel { delta, drift } => ChainSpec::Bessel {
                delta,
                drift: drift.into(),
            },
            ChainConfig::Renewal { beta, svf } => {
                let eta = HeavyTailSpec::new(beta, svf.into())
                    .map_err(|e| AppError::config(format!("invalid renewal durations: {e}")))?;
                ChainSpec::Renewal { eta }
            }
            ChainConfig::Tar { alpha1, threshold, sigma } => {
                ChainSpec::Tar { alpha1, threshold, sigma }
            }
            ChainConfig::GaussianWalk { sigma } => ChainSpec::GaussianWalk { sigma },
        };
        spec.validate()
            .map_err(|e| AppError::config(format!("invalid chain: {e}")))?;
        Ok(spec)
    }
}

/// Specification accepted by `ziptail simulate`: either an i.i.d. sampler
/// (written as integer lines) or a chain (written as one state per line).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SimulateSpec {
    Distribution(DistributionConfig),
    Chain(ChainConfig),
}
