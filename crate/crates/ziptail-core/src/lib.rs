//! Estimation of the tail index of discrete heavy-tailed distributions.
//!
//! The survival function of a generalized Zipf law satisfies
//! `P(S > n) = n^(-beta) * L(n)` with `beta > 0` and `L` slowly varying.
//! This crate estimates `beta` from the ratio of empirical log-survival
//! probabilities at exponentially spaced thresholds `e^k`, and ships the
//! machinery needed to study that estimator end to end:
//!
//! - [`tail`]: the estimator itself, finite-sample deviation bounds,
//!   studentized confidence intervals, window averaging, and level scans;
//! - [`dgp`]: exact samplers for discrete power laws with configurable
//!   slowly varying factors, plus zeta (Zipf) variate generation;
//! - [`markov`]: regenerative Markov chain simulators, regeneration-block
//!   extraction, and occupation-time statistics for null-recurrent chains;
//! - [`nummelin`]: split-chain construction that manufactures regeneration
//!   times for Harris chains without an accessible atom;
//! - [`special`]: the few special functions the above need.
//!
//! The crate is `no_std` (with `alloc`) so the estimators can run in
//! embedded or wasm contexts; IO, file formats, and the experiment harness
//! live in the companion `ziptail` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dgp;
mod error;
pub mod markov;
pub mod nummelin;
pub mod special;
pub mod tail;
#[cfg(test)]
pub(crate) mod testrng;

pub use error::Error;

/// Convenient result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
