//! Weighted items and the compensated running total shared by every sampler.

use crate::error::{Error, Result};

/// A payload paired with a strictly positive, finite weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedItem<T> {
    pub payload: T,
    pub weight: f64,
}

impl<T> WeightedItem<T> {
    pub fn new(payload: T, weight: f64) -> Result<Self> {
        check_weight(weight, 0)?;
        Ok(Self { payload, weight })
    }
}

impl<T> From<WeightedItem<T>> for (T, f64) {
    fn from(item: WeightedItem<T>) -> Self {
        (item.payload, item.weight)
    }
}

#[inline]
pub(crate) fn is_valid_weight(weight: f64) -> bool {
    weight > 0.0 && weight.is_finite()
}

#[inline]
pub(crate) fn check_weight(weight: f64, index: u64) -> Result<()> {
    if is_valid_weight(weight) {
        Ok(())
    } else {
        Err(Error::InvalidWeight { index, weight })
    }
}

/// What a sampler does with an item whose weight is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroWeights {
    /// Zero weights are a validation error like any other non-positive weight.
    #[default]
    Reject,
    /// Zero-weight items are dropped without touching the sampler state.
    /// Negative, NaN and infinite weights are still rejected.
    Skip,
}

/// Cumulative weight of the items consumed so far.
///
/// Uses Neumaier's compensated summation so that long streams of tiny
/// weights do not drift away from the exact total. Only one floating-point
/// addition sits on the loop-carried path, so the compensation is nearly free
/// in the per-item hot loops.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningTotal {
    sum: f64,
    compensation: f64,
    count: u64,
}

impl RunningTotal {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
            count: 0,
        }
    }

    /// Adds one weight. `index` is only used to label the error.
    #[inline]
    pub fn accumulate(&mut self, weight: f64, index: u64) -> Result<()> {
        check_weight(weight, index)?;
        self.add_unchecked(weight);
        Ok(())
    }

    #[inline]
    pub(crate) fn add_unchecked(&mut self, weight: f64) {
        let t = self.sum + weight;
        if self.sum.abs() >= weight.abs() {
            self.compensation += (self.sum - t) + weight;
        } else {
            self.compensation += (weight - t) + self.sum;
        }
        self.sum = t;
        self.count += 1;
    }

    /// Adds a partial sum of `count` already validated weights as one term.
    #[inline]
    pub(crate) fn absorb(&mut self, partial: f64, count: u64) {
        if count > 0 {
            self.add_unchecked(partial);
            self.count += count - 1;
        }
    }

    /// The corrected total weight.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Number of items consumed.
    #[inline]
    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Compensated sum of a slice of weights, validating each one.
pub fn total_weight(weights: &[f64]) -> Result<f64> {
    let mut total = RunningTotal::new();
    for (i, &w) in weights.iter().enumerate() {
        total.accumulate(w, i as u64)?;
    }
    Ok(total.value())
}
