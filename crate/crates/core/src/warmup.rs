//! Start-of-stream buffering shared by the heap and skip samplers.
//!
//! Early in a stream almost every item triggers substitutions. Instead the
//! first `m` items are kept verbatim with their weights and then turned into
//! a with-replacement sample directly.

use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::random::RandomSource;
use crate::reservoir::Reservoir;
use crate::weight::RunningTotal;

/// The first `m` stream positions, payloads and weights as they arrived.
#[derive(Debug, Clone)]
pub struct WarmupBuffer<T> {
    payloads: Vec<T>,
    weights: Vec<f64>,
    total: RunningTotal,
    capacity: usize,
}

impl<T> WarmupBuffer<T> {
    pub fn new(m: usize) -> Self {
        Self {
            payloads: Vec::with_capacity(m),
            weights: Vec::with_capacity(m),
            total: RunningTotal::new(),
            capacity: m,
        }
    }

    /// Appends an already validated item.
    pub(crate) fn push(&mut self, payload: T, weight: f64) {
        debug_assert!(!self.is_full());
        self.payloads.push(payload);
        self.weights.push(weight);
        self.total.add_unchecked(weight);
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.payloads.len() >= self.capacity
    }

    pub fn total(&self) -> RunningTotal {
        self.total
    }
}

/// Converts a buffer into `m` slots, each holding buffered item `i`
/// independently with probability `w_i / sum(w)`.
///
/// A buffer with fewer than `m` items (a stream that ended early) is
/// converted the same way over the items it holds. Returns `None` for an
/// empty buffer.
pub fn warmup_convert<T: Clone>(
    buffer: WarmupBuffer<T>,
    m: usize,
    rng: &mut RandomSource,
) -> Option<(Reservoir<T>, RunningTotal)> {
    if buffer.is_empty() || m == 0 {
        return None;
    }
    let slots = if buffer.len() == 1 {
        vec![buffer.payloads[0].clone(); m]
    } else {
        // Weights were validated on the way in.
        let alias = WeightedAliasIndex::new(buffer.weights).expect("valid weights");
        (0..m)
            .map(|_| buffer.payloads[alias.sample(rng)].clone())
            .collect()
    };
    Some((Reservoir::from_slots(slots), buffer.total))
}
