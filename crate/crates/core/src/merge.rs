//! Combining per-stream samples into one sample over the union of streams.
//!
//! Each stream is sampled independently to size `m` and reports its total
//! weight `W_i`. The reducer splits the `m` output slots across streams with
//! a multinomial draw on `W_i / W`, then takes that many slots from each
//! stream's reservoir without replacement. Every item then appears
//! `Binomial(m, w / W)` times in the result, as if the streams had been
//! concatenated and sampled in one pass.
//!
//! The reduce step is `O(m)`. It is meant to run once after the streams end,
//! not after every item.

use std::num::NonZeroUsize;
use std::thread;

use crate::error::{Error, Result};
use crate::random::{mix_seed, RandomSource};
use crate::reservoir::{Reservoir, SlotSelector};
use crate::sampler::{Sampler, SamplerConfig};
use crate::skip::SkipSampler;
use crate::variates::{binomial, proportional_draws_by};
use crate::weight::{is_valid_weight, RunningTotal};

/// What one stream hands to the reducer.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamSummary<T> {
    pub reservoir: Reservoir<T>,
    pub total_weight: f64,
    pub item_count: u64,
}

impl<T> StreamSummary<T> {
    pub fn new(reservoir: Reservoir<T>, total_weight: f64, item_count: u64) -> Self {
        Self {
            reservoir,
            total_weight,
            item_count,
        }
    }
}

/// Number of output slots taken from each stream. Sums to `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePlan {
    counts: Vec<usize>,
}

impl MergePlan {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Splits `m` into `[n_1, .., n_k]` drawn from `Multinomial(m; W_i / W)`.
///
/// Uses the conditional method: `n_i ~ Binomial(m - n_1 - .. - n_{i-1},
/// W_i / (W_i + .. + W_k))`, with the last stream taking the remainder.
pub fn multinomial_split(m: usize, weights: &[f64], rng: &mut RandomSource) -> Result<MergePlan> {
    if weights.is_empty() {
        return Err(Error::NoSummaries);
    }
    if let Some((index, &weight)) = weights
        .iter()
        .enumerate()
        .find(|(_, &w)| !is_valid_weight(w))
    {
        return Err(Error::InvalidStreamWeight { index, weight });
    }
    // Suffix sums so each conditional probability is a ratio of exact-ish totals.
    let mut suffix = vec![0.0; weights.len()];
    let mut acc = RunningTotal::new();
    for i in (0..weights.len()).rev() {
        acc.add_unchecked(weights[i]);
        suffix[i] = acc.value();
    }

    let mut counts = Vec::with_capacity(weights.len());
    let mut left = m;
    for i in 0..weights.len() - 1 {
        let n = binomial(left, weights[i] / suffix[i], rng);
        counts.push(n);
        left -= n;
    }
    counts.push(left);
    Ok(MergePlan { counts })
}

/// Picks `n` of the reservoir's slots uniformly without replacement.
///
/// Slots are chosen by index, so repeated payloads count as distinct slots.
pub fn subsample_wor<T: Clone>(
    reservoir: &Reservoir<T>,
    n: usize,
    rng: &mut RandomSource,
) -> Result<Vec<T>> {
    let mut selector = SlotSelector::new(reservoir.capacity());
    subsample_with(reservoir.as_slice(), n, &mut selector, rng)
}

fn subsample_with<T: Clone>(
    slots: &[T],
    n: usize,
    selector: &mut SlotSelector,
    rng: &mut RandomSource,
) -> Result<Vec<T>> {
    Ok(selector
        .choose(n, rng)?
        .iter()
        .map(|&i| slots[i].clone())
        .collect())
}

/// Reduces per-stream samples of size `m` into one sample of size `m`.
///
/// Output slots are grouped by stream in input order; callers should not
/// read meaning into slot positions.
pub fn merge_reduce<T: Clone>(
    summaries: &[StreamSummary<T>],
    m: usize,
    rng: &mut RandomSource,
) -> Result<Reservoir<T>> {
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    if summaries.is_empty() {
        return Err(Error::NoSummaries);
    }
    for (index, s) in summaries.iter().enumerate() {
        if s.reservoir.capacity() != m {
            return Err(Error::ReservoirSizeMismatch {
                index,
                expected: m,
                found: s.reservoir.capacity(),
            });
        }
    }
    let weights: Vec<f64> = summaries.iter().map(|s| s.total_weight).collect();
    let plan = multinomial_split(m, &weights, rng)?;

    let mut selector = SlotSelector::new(m);
    let mut out = Vec::with_capacity(m);
    for (summary, &n) in summaries.iter().zip(plan.counts()) {
        out.extend(subsample_with(
            summary.reservoir.as_slice(),
            n,
            &mut selector,
            rng,
        )?);
    }
    Ok(Reservoir::from_slots(out))
}

/// Where the per-stream and reducer seeds come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedPlan {
    /// Stream `i` uses `mix(master ^ mix(i + 1))`; the reducer uses `mix(master)`.
    Master(u64),
    Explicit {
        streams: Vec<u64>,
        reduce: u64,
    },
}

impl SeedPlan {
    pub fn stream_seed(&self, index: usize) -> Option<u64> {
        match self {
            SeedPlan::Master(master) => Some(mix_seed(master ^ mix_seed(index as u64 + 1))),
            SeedPlan::Explicit { streams, .. } => streams.get(index).copied(),
        }
    }

    pub fn reduce_seed(&self) -> u64 {
        match self {
            SeedPlan::Master(master) => mix_seed(*master),
            SeedPlan::Explicit { reduce, .. } => *reduce,
        }
    }

    fn check(&self, streams: usize) -> Result<()> {
        match self {
            SeedPlan::Explicit { streams: seeds, .. } if seeds.len() < streams => {
                Err(Error::SeedCount {
                    expected: streams,
                    found: seeds.len(),
                })
            }
            _ => Ok(()),
        }
    }
}

/// Runs `f` over `items` on up to `available_parallelism` scoped threads and
/// returns the results in input order.
fn map_parallel<X, R, F>(items: Vec<X>, f: F) -> Vec<R>
where
    X: Send,
    R: Send,
    F: Fn(usize, X) -> R + Sync,
{
    let count = items.len();
    let workers = thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
        .min(count);
    if workers <= 1 {
        return items
            .into_iter()
            .enumerate()
            .map(|(i, x)| f(i, x))
            .collect();
    }

    let mut buckets: Vec<Vec<(usize, X)>> = (0..workers).map(|_| Vec::new()).collect();
    for (i, x) in items.into_iter().enumerate() {
        buckets[i % workers].push((i, x));
    }
    let f = &f;
    let mut results: Vec<Option<R>> = (0..count).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = buckets
            .into_iter()
            .map(|bucket| {
                scope.spawn(move || {
                    bucket
                        .into_iter()
                        .map(|(i, x)| (i, f(i, x)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, r) in handle.join().expect("sampler thread panicked") {
                results[i] = Some(r);
            }
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every index filled"))
        .collect()
}

/// Single-pass sampling over several streams at once: one skip sampler per
/// stream, then [`merge_reduce`].
#[derive(Debug, Clone)]
pub struct ParallelSampler {
    m: usize,
    seeds: SeedPlan,
    config: SamplerConfig,
}

impl ParallelSampler {
    pub fn new(m: usize, seeds: SeedPlan) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(Self {
            m,
            seeds,
            config: SamplerConfig::default(),
        })
    }

    pub fn with_config(mut self, config: SamplerConfig) -> Self {
        self.config = config;
        self
    }

    /// Samples each stream to a [`StreamSummary`] without reducing.
    pub fn summarize<T, I, E>(&self, streams: Vec<I>) -> Result<Vec<StreamSummary<T>>, E>
    where
        T: Clone + Send,
        I: IntoIterator<Item = Result<(T, f64), E>> + Send,
        E: From<Error> + Send,
    {
        if streams.is_empty() {
            return Err(Error::NoSummaries.into());
        }
        self.seeds.check(streams.len())?;
        map_parallel(streams, |index, stream| {
            let seed = self.seeds.stream_seed(index).expect("seed count checked");
            let mut sampler =
                SkipSampler::with_config(self.m, RandomSource::new(seed), self.config)?;
            for item in stream {
                let (payload, weight) = item?;
                sampler.observe(payload, weight)?;
            }
            if sampler.total().count() == 0 {
                return Err(Error::EmptyStream { index }.into());
            }
            Ok(sampler.into_summary()?)
        })
        .into_iter()
        .collect()
    }

    /// Samples streams whose items may fail to load. The first error in
    /// stream order is returned.
    pub fn try_run<T, I, E>(&self, streams: Vec<I>) -> Result<Reservoir<T>, E>
    where
        T: Clone + Send,
        I: IntoIterator<Item = Result<(T, f64), E>> + Send,
        E: From<Error> + Send,
    {
        let summaries = self.summarize(streams)?;
        let mut rng = RandomSource::new(self.seeds.reduce_seed());
        Ok(merge_reduce(&summaries, self.m, &mut rng)?)
    }

    pub fn run<T, I>(&self, streams: Vec<I>) -> Result<Reservoir<T>>
    where
        T: Clone + Send,
        I: IntoIterator<Item = (T, f64)> + Send,
    {
        self.try_run(streams.into_iter().map(AlwaysOk).collect())
    }
}

/// Adapts an infallible stream to the fallible interface, lazily so the
/// stream is still iterated on its worker thread.
struct AlwaysOk<I>(I);

impl<T, I: IntoIterator<Item = (T, f64)>> IntoIterator for AlwaysOk<I> {
    type Item = Result<(T, f64)>;
    type IntoIter = std::iter::Map<I::IntoIter, fn((T, f64)) -> Result<(T, f64)>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter().map(Ok)
    }
}

/// One skip sampler per stream, then [`merge_reduce`]. See [`ParallelSampler`]
/// for configuration and fallible streams.
pub fn parallel_sample<T, I>(streams: Vec<I>, m: usize, seeds: SeedPlan) -> Result<Reservoir<T>>
where
    T: Clone + Send,
    I: IntoIterator<Item = (T, f64)> + Send,
{
    ParallelSampler::new(m, seeds)?.run(streams)
}

/// Two-pass sampling over materialised slices.
///
/// The first pass computes each slice's total weight, a multinomial split
/// assigns quotas, and the second pass draws each slice's quota with
/// replacement in proportion to the item weights. Both passes run one slice
/// per thread.
pub fn two_pass_sample<T, S>(slices: &[S], m: usize, rng: &mut RandomSource) -> Result<Reservoir<T>>
where
    T: Clone + Send + Sync,
    S: AsRef<[(T, f64)]> + Sync,
{
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    if slices.is_empty() {
        return Err(Error::NoSummaries);
    }
    let parts: Vec<&[(T, f64)]> = slices.iter().map(AsRef::as_ref).collect();

    let totals = map_parallel(parts.clone(), |index, slice| {
        if slice.is_empty() {
            return Err(Error::EmptyStream { index });
        }
        let mut total = RunningTotal::new();
        for (i, (_, w)) in slice.iter().enumerate() {
            total.accumulate(*w, i as u64)?;
        }
        Ok(total.value())
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let plan = multinomial_split(m, &totals, rng)?;
    let jobs: Vec<_> = parts
        .into_iter()
        .zip(plan.counts().iter().copied())
        .zip(totals)
        .map(|((slice, n), total)| (slice, n, total, rng.next_seed()))
        .collect();

    let draws = map_parallel(jobs, |_, (slice, n, total, seed)| {
        let mut rng = RandomSource::new(seed);
        proportional_draws_by(slice.len(), |i| slice[i].1, total, n, &mut rng)
            .into_iter()
            .map(|i| slice[i].0.clone())
            .collect::<Vec<T>>()
    });
    Ok(Reservoir::from_slots(draws.into_iter().flatten().collect()))
}
