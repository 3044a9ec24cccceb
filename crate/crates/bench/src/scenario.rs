use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;
use wrswr::{
    two_pass_sample, BasicSampler, HeapSampler, ParallelSampler, RandomSource, Sampler, SeedPlan,
    SkipSampler,
};

use crate::{population, WeightStructure};

/// Minimum repetitions per cell.
pub const MIN_REPETITIONS: usize = 5;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("sample size {m} exceeds population size {n}")]
    SampleTooLarge { m: usize, n: usize },
    #[error("sample and population sizes must be positive")]
    Empty,
    #[error("at least {MIN_REPETITIONS} repetitions are required, got {0}")]
    TooFewRepetitions(usize),
    #[error(transparent)]
    Sampling(#[from] wrswr::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchAlgorithm {
    Basic,
    Heap,
    Skip,
    /// Cumulative array plus one binary search per draw.
    InverseCdf,
    ParallelSkip,
    TwoPass,
}

impl BenchAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            BenchAlgorithm::Basic => "basic",
            BenchAlgorithm::Heap => "heap",
            BenchAlgorithm::Skip => "skip",
            BenchAlgorithm::InverseCdf => "inverse-cdf",
            BenchAlgorithm::ParallelSkip => "parallel-skip",
            BenchAlgorithm::TwoPass => "two-pass",
        }
    }

    fn threads(self) -> usize {
        match self {
            BenchAlgorithm::ParallelSkip | BenchAlgorithm::TwoPass => hardware_threads(),
            _ => 1,
        }
    }
}

impl fmt::Display for BenchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(BenchAlgorithm::Basic),
            "heap" => Ok(BenchAlgorithm::Heap),
            "skip" => Ok(BenchAlgorithm::Skip),
            "inverse-cdf" => Ok(BenchAlgorithm::InverseCdf),
            "parallel-skip" => Ok(BenchAlgorithm::ParallelSkip),
            "two-pass" => Ok(BenchAlgorithm::TwoPass),
            other => Err(format!("unknown benchmark algorithm `{other}`")),
        }
    }
}

fn hardware_threads() -> usize {
    thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchScenario {
    pub n: usize,
    pub sample_sizes: Vec<usize>,
    pub weights: WeightStructure,
    pub algorithms: Vec<BenchAlgorithm>,
    pub repetitions: usize,
    pub seed: u64,
}

impl BenchScenario {
    /// Sample sizes `round(ratio * n)` (at least 1) for each ratio.
    pub fn ratio_sweep(
        n: usize,
        ratios: &[f64],
        weights: WeightStructure,
        algorithms: Vec<BenchAlgorithm>,
        repetitions: usize,
        seed: u64,
    ) -> Self {
        let sample_sizes = ratios
            .iter()
            .map(|r| ((r * n as f64).round() as usize).max(1))
            .collect();
        Self {
            n,
            sample_sizes,
            weights,
            algorithms,
            repetitions,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n == 0 || self.sample_sizes.contains(&0) {
            return Err(BenchError::Empty);
        }
        if self.repetitions < MIN_REPETITIONS {
            return Err(BenchError::TooFewRepetitions(self.repetitions));
        }
        if let Some(&m) = self.sample_sizes.iter().find(|&&m| m > self.n) {
            return Err(BenchError::SampleTooLarge { m, n: self.n });
        }
        Ok(())
    }
}

/// One CSV row: a single (algorithm, sample size) cell of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub ratio: f64,
    pub weights: &'static str,
    pub algorithm: &'static str,
    pub threads: usize,
    pub repetitions: usize,
    pub median_ns: u128,
    pub q1_ns: u128,
    pub q3_ns: u128,
    pub iqr_ns: u128,
    pub seed: u64,
}

/// Median and quartiles of a set of run times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timing {
    pub median: Duration,
    pub q1: Duration,
    pub q3: Duration,
}

impl Timing {
    pub fn from_runs(mut runs: Vec<Duration>) -> Self {
        assert!(!runs.is_empty());
        runs.sort();
        let at = |q: f64| runs[((runs.len() - 1) as f64 * q).round() as usize];
        Self {
            median: at(0.5),
            q1: at(0.25),
            q3: at(0.75),
        }
    }
}

/// Times one run of `algorithm` drawing `m` items from `items`.
pub fn time_once(
    algorithm: BenchAlgorithm,
    items: &[(usize, f64)],
    m: usize,
    seed: u64,
) -> Result<Duration, BenchError> {
    let rng = RandomSource::new(seed);
    let start = Instant::now();
    match algorithm {
        BenchAlgorithm::Basic => {
            let mut s = BasicSampler::new(m, rng)?;
            s.observe_slice(items)?;
            black_box(s.finish()?);
        }
        BenchAlgorithm::Heap => {
            let mut s = HeapSampler::new(m, rng)?;
            s.observe_slice(items)?;
            black_box(s.finish()?);
        }
        BenchAlgorithm::Skip => {
            let mut s = SkipSampler::new(m, rng)?;
            s.observe_slice(items)?;
            black_box(s.finish()?);
        }
        BenchAlgorithm::InverseCdf => {
            let mut rng = rng;
            black_box(crate::inverse_cdf_sample(items, m, &mut rng));
        }
        BenchAlgorithm::ParallelSkip => {
            let streams: Vec<_> = chunks(items).map(|c| c.iter().copied()).collect();
            black_box(ParallelSampler::new(m, SeedPlan::Master(seed))?.run(streams)?);
        }
        BenchAlgorithm::TwoPass => {
            let slices: Vec<&[(usize, f64)]> = chunks(items).collect();
            let mut rng = rng;
            black_box(two_pass_sample(&slices, m, &mut rng)?);
        }
    }
    Ok(start.elapsed())
}

/// Splits the population into one contiguous chunk per hardware thread.
fn chunks(items: &[(usize, f64)]) -> impl Iterator<Item = &[(usize, f64)]> {
    let size = items.len().div_ceil(hardware_threads()).max(1);
    items.chunks(size)
}

/// Runs every (sample size, algorithm) cell of the scenario.
pub fn run_bench(scenario: &BenchScenario) -> Result<Vec<BenchRow>, BenchError> {
    scenario.validate()?;
    let items = population(scenario.n, scenario.weights);
    let mut rows = Vec::new();
    for &m in &scenario.sample_sizes {
        // Algorithms alternate within each repetition so slow drift in the
        // machine's speed affects all of them alike.
        let mut runs = vec![Vec::with_capacity(scenario.repetitions); scenario.algorithms.len()];
        for rep in 0..scenario.repetitions {
            let seed = scenario.seed.wrapping_add(rep as u64);
            for (a, &algorithm) in scenario.algorithms.iter().enumerate() {
                runs[a].push(time_once(algorithm, &items, m, seed)?);
            }
        }
        for (&algorithm, runs) in scenario.algorithms.iter().zip(runs) {
            let t = Timing::from_runs(runs);
            rows.push(BenchRow {
                n: scenario.n,
                m,
                ratio: m as f64 / scenario.n as f64,
                weights: scenario.weights.name(),
                algorithm: algorithm.name(),
                threads: algorithm.threads(),
                repetitions: scenario.repetitions,
                median_ns: t.median.as_nanos(),
                q1_ns: t.q1.as_nanos(),
                q3_ns: t.q3.as_nanos(),
                iqr_ns: (t.q3 - t.q1).as_nanos(),
                seed: scenario.seed,
            });
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with a header naming every column.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    if rows.is_empty() {
        writer.write_record(CSV_HEADER)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub(crate) const CSV_HEADER: [&str; 12] = [
    "n",
    "m",
    "ratio",
    "weights",
    "algorithm",
    "threads",
    "repetitions",
    "median_ns",
    "q1_ns",
    "q3_ns",
    "iqr_ns",
    "seed",
];
