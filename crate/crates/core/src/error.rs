use thiserror::Error;

/// Errors reported by the samplers, the merge step and the statistics helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "invalid weight {weight} at stream position {index}: weights must be positive and finite"
    )]
    InvalidWeight { index: u64, weight: f64 },

    #[error("sample size must be at least 1")]
    ZeroSampleSize,

    #[error("no items observed")]
    NoItems,

    #[error("stream {index} is empty")]
    EmptyStream { index: usize },

    #[error("probability {0} is outside (0, 1]")]
    InvalidProbability(f64),

    #[error("slot count {k} is outside [1, {m}]")]
    SlotCountOutOfRange { k: usize, m: usize },

    #[error("cannot draw {n} slots without replacement from a reservoir of {m}")]
    SubsampleTooLarge { n: usize, m: usize },

    #[error("stream {index} carries a reservoir of {found} slots, expected {expected}")]
    ReservoirSizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("no stream summaries to merge")]
    NoSummaries,

    #[error("stream weight {weight} at position {index} must be positive and finite")]
    InvalidStreamWeight { index: usize, weight: f64 },

    #[error("{found} stream seeds supplied for {expected} streams")]
    SeedCount { expected: usize, found: usize },

    #[error("item index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate test: {bins} bin(s) left after pooling")]
    DegenerateTest { bins: usize },

    #[error("histogram lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
