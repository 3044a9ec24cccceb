//! The reference sampler: one Bernoulli trial per slot per item.
//!
//! Every slot is an independent single-item weighted sampler. When item `n`
//! arrives the total is updated first, then each slot is replaced with
//! probability `w_n / W_n`. Telescoping the keep probabilities shows that a
//! slot holds item `i` with probability `w_i / W` at the end of the stream.
//! This is `O(n m)` and only meant as a baseline.

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::reservoir::Reservoir;
use crate::sampler::{admit, Sampler, SamplerConfig};
use crate::weight::{RunningTotal, ZeroWeights};

#[derive(Debug, Clone)]
pub struct BasicSampler<T> {
    m: usize,
    slots: Vec<T>,
    total: RunningTotal,
    rng: RandomSource,
    zero_weights: ZeroWeights,
    position: u64,
}

impl<T: Clone> BasicSampler<T> {
    pub fn new(m: usize, rng: RandomSource) -> Result<Self> {
        Self::with_config(m, rng, SamplerConfig::default())
    }

    /// Only `zero_weights` is honoured; this sampler has no warm-up phase.
    pub fn with_config(m: usize, rng: RandomSource, config: SamplerConfig) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(Self {
            m,
            slots: Vec::with_capacity(m),
            total: RunningTotal::new(),
            rng,
            zero_weights: config.zero_weights,
            position: 0,
        })
    }

    /// Current slots, empty before the first item.
    pub fn slots(&self) -> &[T] {
        &self.slots
    }
}

impl<T: Clone> Sampler<T> for BasicSampler<T> {
    fn observe(&mut self, payload: T, weight: f64) -> Result<usize> {
        let position = self.position;
        self.position += 1;
        if !admit(weight, position, self.zero_weights)? {
            return Ok(0);
        }
        self.total.add_unchecked(weight);

        if self.slots.is_empty() {
            self.slots.resize(self.m, payload);
            return Ok(self.m);
        }

        let p = weight / self.total.value();
        let mut replaced = 0;
        for slot in self.slots.iter_mut() {
            if self.rng.uniform_open() < p {
                *slot = payload.clone();
                replaced += 1;
            }
        }
        Ok(replaced)
    }

    fn total(&self) -> RunningTotal {
        self.total
    }

    fn capacity(&self) -> usize {
        self.m
    }

    fn finish(self) -> Result<Reservoir<T>> {
        if self.slots.is_empty() {
            return Err(Error::NoItems);
        }
        Ok(Reservoir::from_slots(self.slots))
    }
}
