use crate::error::{Error, Result};
use crate::merge::StreamSummary;
use crate::reservoir::Reservoir;
use crate::weight::{is_valid_weight, RunningTotal, ZeroWeights};

/// Options shared by the streaming samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Buffer the first `m` items and convert them in one step instead of
    /// running the substitution loop over them. Ignored by [`BasicSampler`].
    ///
    /// [`BasicSampler`]: crate::BasicSampler
    pub warmup: bool,
    pub zero_weights: ZeroWeights,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            warmup: true,
            zero_weights: ZeroWeights::Reject,
        }
    }
}

impl SamplerConfig {
    pub fn without_warmup() -> Self {
        Self {
            warmup: false,
            ..Self::default()
        }
    }
}

/// A single-pass weighted sampler with replacement.
///
/// Samplers are single-threaded but `Send` whenever the payload is, so one
/// can be built on one thread and driven on another.
pub trait Sampler<T> {
    /// Consumes one stream item. Returns the number of reservoir slots
    /// written while processing it.
    fn observe(&mut self, payload: T, weight: f64) -> Result<usize>;

    /// Weight and count of the items consumed so far.
    fn total(&self) -> RunningTotal;

    /// The sample size `m`.
    fn capacity(&self) -> usize;

    /// Returns the sample. Fails with [`Error::NoItems`] on an empty stream.
    fn finish(self) -> Result<Reservoir<T>>;

    fn extend<I>(&mut self, items: I) -> Result<()>
    where
        I: IntoIterator<Item = (T, f64)>,
        Self: Sized,
    {
        for (payload, weight) in items {
            self.observe(payload, weight)?;
        }
        Ok(())
    }

    /// Consumes a slice of items. Equivalent in law to calling
    /// [`observe`](Self::observe) on each, and deterministic for a given
    /// seed, but the skip and heap samplers sum slices in blocks, so the
    /// rounding of the running total can differ from item-by-item feeding.
    fn observe_slice(&mut self, items: &[(T, f64)]) -> Result<()>
    where
        T: Clone,
    {
        for (payload, weight) in items {
            self.observe(payload.clone(), *weight)?;
        }
        Ok(())
    }

    /// Finishes the sampler and packages the sample with its stream totals
    /// for [`merge_reduce`](crate::merge_reduce).
    fn into_summary(self) -> Result<StreamSummary<T>>
    where
        Self: Sized,
    {
        let total = self.total();
        let reservoir = self.finish()?;
        Ok(StreamSummary::new(reservoir, total.value(), total.count()))
    }
}

/// Decides whether an offered weight is consumed, dropped, or rejected.
#[inline]
pub(crate) fn admit(weight: f64, position: u64, policy: ZeroWeights) -> Result<bool> {
    if is_valid_weight(weight) {
        Ok(true)
    } else if weight == 0.0 && policy == ZeroWeights::Skip {
        Ok(false)
    } else {
        Err(Error::InvalidWeight {
            index: position,
            weight,
        })
    }
}
