//! Timing harness comparing the samplers against each other and against a
//! non-streaming baseline.
//!
//! Inputs are materialised before the clock starts, so only sampling is
//! timed. Each cell of a scenario is repeated and summarised by its median
//! and interquartile range. Absolute numbers depend on the machine; only the
//! ordering between algorithms is meaningful.

mod baseline;
mod scenario;

pub use baseline::inverse_cdf_sample;
pub use scenario::{
    run_bench, time_once, write_csv, BenchAlgorithm, BenchError, BenchRow, BenchScenario, Timing,
};

use std::fmt;
use std::str::FromStr;

/// Shape of the weights along the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightStructure {
    /// Every weight is 1.
    Constant,
    /// Linear ramp `(i + 1) / n`: later items are heavier.
    Increasing,
    /// The increasing ramp reversed.
    Decreasing,
}

impl WeightStructure {
    pub fn name(self) -> &'static str {
        match self {
            WeightStructure::Constant => "constant",
            WeightStructure::Increasing => "increasing",
            WeightStructure::Decreasing => "decreasing",
        }
    }
}

impl fmt::Display for WeightStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightStructure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constant" => Ok(WeightStructure::Constant),
            "increasing" => Ok(WeightStructure::Increasing),
            "decreasing" => Ok(WeightStructure::Decreasing),
            other => Err(format!("unknown weight structure `{other}`")),
        }
    }
}

/// Deterministic weights for a population of `n` items.
pub fn gen_weights(n: usize, structure: WeightStructure) -> Vec<f64> {
    let scale = 1.0 / n as f64;
    match structure {
        WeightStructure::Constant => vec![1.0; n],
        WeightStructure::Increasing => (1..=n).map(|i| i as f64 * scale).collect(),
        WeightStructure::Decreasing => (1..=n).rev().map(|i| i as f64 * scale).collect(),
    }
}

/// `(index, weight)` pairs for a generated population.
pub fn population(n: usize, structure: WeightStructure) -> Vec<(usize, f64)> {
    gen_weights(n, structure).into_iter().enumerate().collect()
}
