//! A-ExpJ-WR: `m` single-item weighted samplers tracked in one min-heap.
//!
//! Slot `i` keeps its current item until the running total reaches a
//! threshold `W / q_i` drawn when the item was placed. All thresholds live in
//! a min-priority queue, so an arriving item only has to look at the
//! smallest one; each eviction costs `O(log m)`.

use std::cmp::Ordering;
use std::collections::binary_heap::BinaryHeap;

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::reservoir::Reservoir;
use crate::sampler::{admit, Sampler, SamplerConfig};
use crate::scan::{scan, Stop, FOLD_EVERY};
use crate::warmup::{warmup_convert, WarmupBuffer};
use crate::weight::RunningTotal;

/// `total / q`, clamped to the largest finite value if it overflows.
#[inline]
pub fn slot_priority(total: f64, q: f64) -> f64 {
    let p = total / q;
    if p.is_finite() {
        p
    } else {
        f64::MAX
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    priority: f64,
    slot: usize,
}

// Reversed so that `BinaryHeap` pops the smallest priority.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.priority.total_cmp(&self.priority)
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

#[derive(Debug, Clone)]
pub struct HeapSampler<T> {
    m: usize,
    config: SamplerConfig,
    rng: RandomSource,
    warmup: Option<WarmupBuffer<T>>,
    slots: Vec<T>,
    queue: BinaryHeap<Entry>,
    total: RunningTotal,
    // Weight seen since `total` was last updated, and the distance from
    // `total` to the smallest priority it is compared against.
    pending: f64,
    pending_count: u64,
    gap: f64,
    position: u64,
}

impl<T: Clone> HeapSampler<T> {
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
            queue: BinaryHeap::with_capacity(m),
            total: RunningTotal::new(),
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

    /// Number of entries in the priority queue.
    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn min_priority(&self) -> Option<f64> {
        self.queue.peek().map(|e| e.priority)
    }

    /// Gives every slot a fresh threshold above the current total.
    fn reset_priorities(&mut self) {
        let total = self.total.value();
        self.queue.clear();
        for slot in 0..self.m {
            let priority = slot_priority(total, self.rng.uniform_open());
            self.queue.push(Entry { priority, slot });
        }
        self.regap();
    }

    fn fold(&mut self) {
        self.total.absorb(self.pending, self.pending_count);
        self.pending = 0.0;
        self.pending_count = 0;
    }

    fn regap(&mut self) {
        self.fold();
        let min = self.queue.peek().map_or(f64::INFINITY, |e| e.priority);
        self.gap = min - self.total.value();
    }

    #[inline]
    fn running(&self) -> bool {
        self.warmup.is_none() && !self.slots.is_empty()
    }

    /// Called once `pending` has exceeded `gap`; the item is already counted.
    #[cold]
    fn cross(&mut self, payload: &T) -> usize {
        self.fold();
        let replaced = self.evict(payload);
        self.regap();
        replaced
    }

    fn end_warmup(&mut self) {
        if let Some(buffer) = self.warmup.take() {
            if let Some((reservoir, total)) = warmup_convert(buffer, self.m, &mut self.rng) {
                self.slots = reservoir.into_vec();
                self.total = total;
                self.reset_priorities();
            }
        }
    }

    /// Evicts every entry whose threshold is below the current total.
    fn evict(&mut self, payload: &T) -> usize {
        let total = self.total.value();
        let mut replaced = 0;
        while let Some(mut top) = self.queue.peek_mut() {
            if top.priority >= total {
                break;
            }
            self.slots[top.slot] = payload.clone();
            top.priority = slot_priority(total, self.rng.uniform_open());
            replaced += 1;
        }
        replaced
    }
}

impl<T: Clone> Sampler<T> for HeapSampler<T> {
    fn observe(&mut self, payload: T, weight: f64) -> Result<usize> {
        let position = self.position;
        self.position += 1;
        if !admit(weight, position, self.config.zero_weights)? {
            return Ok(0);
        }

        if self.running() {
            self.pending += weight;
            self.pending_count += 1;
            if self.pending > self.gap {
                return Ok(self.cross(&payload));
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

        // First item without warm-up.
        self.total.add_unchecked(weight);
        self.slots.resize(self.m, payload);
        self.reset_priorities();
        Ok(self.m)
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
            let (done, stop) = scan::<_, false>(&items[i..end], &mut self.pending, self.gap);
            self.pending_count += done as u64;
            self.position += done as u64;
            i += done;
            match stop {
                Stop::End => self.regap(),
                Stop::Crossed => {
                    self.cross(&items[i - 1].0);
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
