use core::fmt;

/// Errors reported by estimation, sampling, and chain construction.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A sample batch contained no values.
    EmptySample,
    /// A sample batch contained a value below 1.
    InvalidValue { index: usize },
    /// Averaging window `m` does not fit below the centre level `k`.
    WindowExceedsLevel { k: u32, m: u32 },
    /// Confidence parameter outside `(0, 1/2)`.
    InvalidDelta { delta: f64 },
    /// Confidence level outside `(0, 1)`.
    InvalidConfidenceLevel { level: f64 },
    /// Tail probability argument outside `(0, 1]`.
    InvalidTailProbability { p: f64 },
    /// No sample value exceeds the threshold `e^k`.
    NoTailMass { k: u32 },
    /// The threshold `e^k` exceeds the representable value range.
    LevelOverflow { k: u32 },
    /// A distribution or chain specification failed validation.
    InvalidSpec(alloc::string::String),
    /// Inverse-transform sampling walked past the supported value range.
    SampleRangeExceeded,
    /// Fewer than two visits to the regeneration set were observed.
    InsufficientRegenerations { hits: usize },
    /// The occupation set was never visited by the trajectory.
    SetNeverVisited,
    /// No candidate width produced a visit to the small set.
    SmallSetNeverVisited,
    /// The transition density vanished on a small-set pair.
    KernelVanishes { index: usize },
    /// A split-chain Bernoulli parameter exceeded 1.
    MinorizationViolated { index: usize, parameter: f64 },
    /// A random-walk transition probability left `[0, 1]`.
    InvalidTransitionProbability { state: i64, probability: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySample => write!(f, "empty sample"),
            Error::InvalidValue { index } => {
                write!(f, "sample value at position {index} is below 1")
            }
            Error::WindowExceedsLevel { k, m } => {
                write!(f, "window exceeds level: averaging window m = {m} needs k >= m, got k = {k}")
            }
            Error::InvalidDelta { delta } => {
                write!(f, "confidence parameter delta = {delta} must lie in (0, 1/2)")
            }
            Error::InvalidConfidenceLevel { level } => {
                write!(f, "confidence level {level} must lie in (0, 1)")
            }
            Error::InvalidTailProbability { p } => {
                write!(f, "tail probability {p} must lie in (0, 1]")
            }
            Error::NoTailMass { k } => write!(f, "no tail mass at level {k}"),
            Error::LevelOverflow { k } => {
                write!(f, "threshold e^{k} exceeds the representable value range")
            }
            Error::InvalidSpec(reason) => write!(f, "invalid specification: {reason}"),
            Error::SampleRangeExceeded => {
                write!(f, "sampled value exceeds the supported range")
            }
            Error::InsufficientRegenerations { hits } => {
                write!(f, "insufficient regenerations: {hits} visit(s) to the regeneration set")
            }
            Error::SetNeverVisited => write!(f, "set never visited"),
            Error::SmallSetNeverVisited => write!(f, "small set never visited"),
            Error::KernelVanishes { index } => {
                write!(f, "kernel vanishes on small set at step {index}")
            }
            Error::MinorizationViolated { index, parameter } => {
                write!(
                    f,
                    "minorization violated at step {index}: Bernoulli parameter {parameter} > 1"
                )
            }
            Error::InvalidTransitionProbability { state, probability } => {
                write!(f, "invalid transition probability {probability} at state {state}")
            }
        }
    }
}

impl core::error::Error for Error {}
