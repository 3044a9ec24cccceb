use crate::error::{Error, Result};
use crate::random::RandomSource;

/// A with-replacement sample: `m` slots, duplicates allowed.
///
/// Slot order carries no meaning and is not uniformly random.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reservoir<T> {
    slots: Vec<T>,
}

impl<T> Reservoir<T> {
    pub(crate) fn from_slots(slots: Vec<T>) -> Self {
        debug_assert!(!slots.is_empty());
        Self { slots }
    }

    /// Number of slots, `m`.
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.slots
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.slots.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.slots
    }
}

impl<T> AsRef<[T]> for Reservoir<T> {
    fn as_ref(&self) -> &[T] {
        &self.slots
    }
}

impl<T> IntoIterator for Reservoir<T> {
    type Item = T;
    type IntoIter = std::vec::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.slots.into_iter()
    }
}

impl<'a, T> IntoIterator for &'a Reservoir<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.slots.iter()
    }
}

/// Chooses uniformly random subsets of slot indices with a partial
/// Fisher-Yates pass over a persistent permutation.
///
/// Any permutation is a valid starting point, so the array is never reset and
/// each call costs O(k).
#[derive(Debug, Clone)]
pub struct SlotSelector {
    order: Vec<usize>,
}

impl SlotSelector {
    pub fn new(m: usize) -> Self {
        Self {
            order: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `k` distinct indices, uniform over all `C(m, k)` subsets.
    pub fn choose(&mut self, k: usize, rng: &mut RandomSource) -> Result<&[usize]> {
        let m = self.order.len();
        if k > m {
            return Err(Error::SubsampleTooLarge { n: k, m });
        }
        for i in 0..k {
            let j = i + rng.index(m - i);
            self.order.swap(i, j);
        }
        Ok(&self.order[..k])
    }
}

/// Overwrites `k` distinct, uniformly chosen slots with `payload`.
pub fn replace_k_slots<T: Clone>(
    slots: &mut [T],
    k: usize,
    payload: &T,
    selector: &mut SlotSelector,
    rng: &mut RandomSource,
) -> Result<()> {
    let m = slots.len();
    if k == 0 || k > m {
        return Err(Error::SlotCountOutOfRange { k, m });
    }
    debug_assert_eq!(selector.len(), m);
    if k == 1 {
        // One Fisher-Yates step from any order is a uniform slot.
        slots[rng.index(m)] = payload.clone();
        return Ok(());
    }
    for &slot in selector.choose(k, rng)? {
        slots[slot] = payload.clone();
    }
    Ok(())
}
