//! WRSWR-SKIP: jump over rejected items with a closed-form threshold.
//!
//! After a substitution at total `W_n`, the chance that none of the next `t`
//! items touches any of the `m` slots is `(W_n / W_{n+t})^m`. Drawing the
//! threshold `W_n / q^(1/m)` once and accumulating weights until the total
//! reaches it lands on the next accepted item directly. The accepted item
//! then overwrites `k` random slots with `k ~ Binomial(m, w / W)` conditioned
//! on `k > 0`. Between acceptances only a running sum and one comparison are
//! needed per item.
//!
//! The threshold is drawn as `W exp(e / m)` with `e` standard exponential,
//! which is the same law as `q = exp(-e)`.

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::reservoir::{replace_k_slots, Reservoir, SlotSelector};
use crate::sampler::{admit, Sampler, SamplerConfig};
use crate::scan::{scan, Stop, FOLD_EVERY};
use crate::variates::truncated_binomial;
use crate::warmup::{warmup_convert, WarmupBuffer};
use crate::weight::RunningTotal;

/// `total / q^(1/m)` for a given uniform `q` in (0, 1).
#[inline]
pub fn threshold_from_uniform(total: f64, m: usize, q: f64) -> f64 {
    total / q.powf(1.0 / m as f64)
}

/// `threshold - total` for the threshold drawn from `q = exp(-e)`, computed
/// without cancellation.
#[inline]
fn gap_from_exponential(total: f64, m: usize, e: f64) -> f64 {
    total * (e / m as f64).exp_m1()
}

/// Draws the total weight at which the next substitution happens.
#[inline]
pub fn skip_threshold(total: f64, m: usize, rng: &mut RandomSource) -> f64 {
    total + gap_from_exponential(total, m, rng.exponential())
}

#[derive(Debug, Clone)]
pub struct SkipSampler<T> {
    m: usize,
    config: SamplerConfig,
    rng: RandomSource,
    warmup: Option<WarmupBuffer<T>>,
    slots: Vec<T>,
    selector: SlotSelector,
    total: RunningTotal,
    threshold: f64,
    // Weight seen since `total` was last updated, and the distance from
    // `total` to `threshold` it is compared against.
    pending: f64,
    pending_count: u64,
    gap: f64,
    position: u64,
}

impl<T: Clone> SkipSampler<T> {
    pub fn new(m: usize, rng: RandomSource) -> Result<Self> {
        Self::with_config(m, rng, SamplerConfig::default())
    }

    pub fn with_config(m: usize, rng: RandomSource, config: SamplerConfig) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(Self {
            m,
            config,
            rng,
            warmup: config.warmup.then(|| WarmupBuffer::new(m)),
            slots: Vec::with_capacity(m),
            selector: SlotSelector::new(m),
            total: RunningTotal::new(),
            threshold: 0.0,
            pending: 0.0,
            pending_count: 0,
            gap: 0.0,
            position: 0,
        })
    }

    /// Current slots; empty until the first item (or the end of warm-up).
    pub fn slots(&self) -> &[T] {
        &self.slots
    }

    /// The pending skip target, once sampling has started.
    pub fn threshold(&self) -> Option<f64> {
        (!self.slots.is_empty()).then_some(self.threshold)
    }

    /// Replaces the pending skip target. Used to replay a trace with known
    /// uniforms.
    pub fn set_threshold(&mut self, threshold: f64) {
        self.threshold = threshold;
        self.regap();
    }

    fn fold(&mut self) {
        self.total.absorb(self.pending, self.pending_count);
        self.pending = 0.0;
        self.pending_count = 0;
    }

    fn regap(&mut self) {
        self.fold();
        self.gap = self.threshold - self.total.value();
    }

    fn draw_threshold(&mut self, total: f64) {
        self.gap = gap_from_exponential(total, self.m, self.rng.exponential());
        self.threshold = total + self.gap;
    }

    fn end_warmup(&mut self) {
        if let Some(buffer) = self.warmup.take() {
            if let Some((reservoir, total)) = warmup_convert(buffer, self.m, &mut self.rng) {
                self.slots = reservoir.into_vec();
                self.total = total;
                self.draw_threshold(total.value());
            }
        }
    }

    #[inline]
    fn running(&self) -> bool {
        self.warmup.is_none() && !self.slots.is_empty()
    }

    /// Called once `pending` has reached `gap`; the item is already counted.
    #[cold]
    fn cross(&mut self, payload: T, weight: f64) -> Result<usize> {
        self.fold();
        let total = self.total.value();
        if total < self.threshold {
            // Rounding in the pending sum; the compensated total decides.
            self.gap = self.threshold - total;
            return Ok(0);
        }
        self.accept(payload, weight, total)
    }

    fn accept(&mut self, payload: T, weight: f64, total: f64) -> Result<usize> {
        let k = if self.slots.is_empty() {
            // The first item takes every slot.
            self.slots.resize(self.m, payload);
            self.m
        } else {
            let p = (weight / total).clamp(f64::MIN_POSITIVE, 1.0);
            let k = truncated_binomial(self.m, p, &mut self.rng)?;
            replace_k_slots(
                &mut self.slots,
                k,
                &payload,
                &mut self.selector,
                &mut self.rng,
            )?;
            k
        };
        self.draw_threshold(total);
        Ok(k)
    }
}

impl<T: Clone> Sampler<T> for SkipSampler<T> {
    #[inline]
    fn observe(&mut self, payload: T, weight: f64) -> Result<usize> {
        let position = self.position;
        self.position += 1;
        if !admit(weight, position, self.config.zero_weights)? {
            return Ok(0);
        }

        if self.running() {
            self.pending += weight;
            self.pending_count += 1;
            if self.pending >= self.gap {
                return self.cross(payload, weight);
            }
            if self.pending_count >= FOLD_EVERY {
                self.regap();
            }
            return Ok(0);
        }

        if let Some(buffer) = self.warmup.as_mut() {
            buffer.push(payload, weight);
            if buffer.is_full() {
                self.end_warmup();
                return Ok(self.m);
            }
            return Ok(0);
        }

        self.total.add_unchecked(weight);
        let total = self.total.value();
        self.accept(payload, weight, total)
    }

    fn observe_slice(&mut self, items: &[(T, f64)]) -> Result<()> {
        let mut i = 0;
        while i < items.len() {
            if !self.running() {
                self.observe(items[i].0.clone(), items[i].1)?;
                i += 1;
                continue;
            }
            let end = items.len().min(i + FOLD_EVERY as usize);
            let (done, stop) = scan::<_, true>(&items[i..end], &mut self.pending, self.gap);
            self.pending_count += done as u64;
            self.position += done as u64;
            i += done;
            match stop {
                Stop::End => self.regap(),
                Stop::Crossed => {
                    let (payload, weight) = &items[i - 1];
                    self.cross(payload.clone(), *weight)?;
                }
                Stop::Irregular => {
                    self.observe(items[i].0.clone(), items[i].1)?;
                    i += 1;
                }
            }
        }
        Ok(())
    }

    fn total(&self) -> RunningTotal {
        match &self.warmup {
            Some(buffer) => buffer.total(),
            None => {
                let mut total = self.total;
                total.absorb(self.pending, self.pending_count);
                total
            }
        }
    }

    fn capacity(&self) -> usize {
        self.m
    }

    fn finish(mut self) -> Result<Reservoir<T>> {
        self.end_warmup();
        if self.slots.is_empty() {
            return Err(Error::NoItems);
        }
        Ok(Reservoir::from_slots(self.slots))
    }
}
