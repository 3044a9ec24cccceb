//! Single-pass weighted random sampling with replacement.
//!
//! A sampler consumes a stream of `(payload, weight)` pairs of unknown length
//! and keeps `m` slots such that, at any point, each slot independently holds
//! item `i` with probability `w_i / W`, where `W` is the total weight seen.
//!
//! Three interchangeable samplers implement [`Sampler`]:
//!
//! * [`BasicSampler`] runs one Bernoulli trial per slot per item. Simple and slow.
//! * [`HeapSampler`] (A-ExpJ-WR) keeps one replacement threshold per slot in a
//!   min-heap.
//! * [`SkipSampler`] (WRSWR-SKIP) draws the total weight at which the next
//!   substitution happens and skips straight to it.
//!
//! [`ParallelSampler`] and [`merge_reduce`] combine per-stream samples into
//! one, and [`two_pass_sample`] handles materialised data. The [`oracle`]
//! module holds the exact laws and test statistics the test suites use.
//!
//! ```
//! use wrswr::{RandomSource, Sampler, SkipSampler};
//!
//! let mut sampler = SkipSampler::new(3, RandomSource::new(7)).unwrap();
//! for (i, w) in [1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
//!     sampler.observe(i, w).unwrap();
//! }
//! let sample = sampler.finish().unwrap();
//! assert_eq!(sample.capacity(), 3);
//! ```

mod basic;
mod error;
mod heap;
mod merge;
mod random;
mod reservoir;
mod sampler;
mod scan;
mod skip;
mod warmup;
mod weight;

pub mod oracle;
pub mod variates;

use std::fmt;
use std::str::FromStr;

pub use basic::BasicSampler;
pub use error::{Error, Result};
pub use heap::{slot_priority, HeapSampler};
pub use merge::{
    merge_reduce, multinomial_split, parallel_sample, subsample_wor, two_pass_sample, MergePlan,
    ParallelSampler, SeedPlan, StreamSummary,
};
pub use random::{mix_seed, RandomSource};
pub use reservoir::{replace_k_slots, Reservoir, SlotSelector};
pub use sampler::{Sampler, SamplerConfig};
pub use skip::{skip_threshold, threshold_from_uniform, SkipSampler};
pub use variates::truncated_binomial;
pub use warmup::{warmup_convert, WarmupBuffer};
pub use weight::{total_weight, RunningTotal, WeightedItem, ZeroWeights};

/// The single-stream samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Basic,
    Heap,
    Skip,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Basic, Algorithm::Heap, Algorithm::Skip];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Heap => "heap",
            Algorithm::Skip => "skip",
        }
    }

    /// Builds a sampler of this kind.
    pub fn sampler<T: Clone>(
        self,
        m: usize,
        rng: RandomSource,
        config: SamplerConfig,
    ) -> Result<AnySampler<T>> {
        Ok(match self {
            Algorithm::Basic => AnySampler::Basic(BasicSampler::with_config(m, rng, config)?),
            Algorithm::Heap => AnySampler::Heap(HeapSampler::with_config(m, rng, config)?),
            Algorithm::Skip => AnySampler::Skip(SkipSampler::with_config(m, rng, config)?),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Algorithm::Basic),
            "heap" => Ok(Algorithm::Heap),
            "skip" => Ok(Algorithm::Skip),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// One of the three samplers, chosen at run time.
#[derive(Debug, Clone)]
pub enum AnySampler<T> {
    Basic(BasicSampler<T>),
    Heap(HeapSampler<T>),
    Skip(SkipSampler<T>),
}

impl<T: Clone> Sampler<T> for AnySampler<T> {
    #[inline]
    fn observe(&mut self, payload: T, weight: f64) -> Result<usize> {
        match self {
            AnySampler::Basic(s) => s.observe(payload, weight),
            AnySampler::Heap(s) => s.observe(payload, weight),
            AnySampler::Skip(s) => s.observe(payload, weight),
        }
    }

    fn observe_slice(&mut self, items: &[(T, f64)]) -> Result<()> {
        match self {
            AnySampler::Basic(s) => s.observe_slice(items),
            AnySampler::Heap(s) => s.observe_slice(items),
            AnySampler::Skip(s) => s.observe_slice(items),
        }
    }

    fn total(&self) -> RunningTotal {
        match self {
            AnySampler::Basic(s) => s.total(),
            AnySampler::Heap(s) => s.total(),
            AnySampler::Skip(s) => s.total(),
        }
    }

    fn capacity(&self) -> usize {
        match self {
            AnySampler::Basic(s) => s.capacity(),
            AnySampler::Heap(s) => s.capacity(),
            AnySampler::Skip(s) => s.capacity(),
        }
    }

    fn finish(self) -> Result<Reservoir<T>> {
        match self {
            AnySampler::Basic(s) => s.finish(),
            AnySampler::Heap(s) => s.finish(),
            AnySampler::Skip(s) => s.finish(),
        }
    }
}

/// Runs one sampler of the given kind over `items` with default options.
pub fn sample<T, I>(algorithm: Algorithm, m: usize, seed: u64, items: I) -> Result<Reservoir<T>>
where
    T: Clone,
    I: IntoIterator<Item = (T, f64)>,
{
    let mut sampler = algorithm.sampler(m, RandomSource::new(seed), SamplerConfig::default())?;
    sampler.extend(items)?;
    sampler.finish()
}
