//! Block-wise search for the item at which a running sum crosses a gap.
//!
//! The skip and heap samplers spend almost all of their time adding weights
//! and comparing against the next substitution point. Summing blocks of
//! eight weights as a tree keeps only one addition per block on the
//! loop-carried path; a block is walked item by item only when it may
//! contain the crossing.

use crate::weight::is_valid_weight;

const BLOCK: usize = 8;
const MAX_BITS: u64 = f64::MAX.to_bits();

/// How many items may be summed outside the compensated total before it is
/// brought up to date.
pub(crate) const FOLD_EVERY: u64 = 4096;

/// Why a scan stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    /// Every item was absorbed without crossing.
    End,
    /// The last absorbed item made the sum cross the gap.
    Crossed,
    /// The next item has a weight that needs the per-item path (invalid or
    /// zero); it was not absorbed.
    Irregular,
}

#[inline]
fn crossed<const INCLUSIVE: bool>(sum: f64, gap: f64) -> bool {
    if INCLUSIVE {
        sum >= gap
    } else {
        sum > gap
    }
}

/// Adds weights from `items` to `pending` until it crosses `gap` (reaching it
/// when `INCLUSIVE`, exceeding it otherwise). Returns how many items were
/// absorbed and why the scan stopped.
#[inline]
pub(crate) fn scan<T, const INCLUSIVE: bool>(
    items: &[(T, f64)],
    pending: &mut f64,
    gap: f64,
) -> (usize, Stop) {
    let mut done = 0;
    let mut blocks = items.chunks_exact(BLOCK);
    for block in &mut blocks {
        let w: [f64; BLOCK] = std::array::from_fn(|i| block[i].1);
        // Positive finite doubles have bit patterns in 1..=MAX_BITS; zero,
        // negatives, infinities and NaNs wrap or land above it.
        let worst = w
            .iter()
            .fold(0, |acc, x| acc.max(x.to_bits().wrapping_sub(1)));
        let s = ((w[0] + w[1]) + (w[2] + w[3])) + ((w[4] + w[5]) + (w[6] + w[7]));
        if worst < MAX_BITS && s.is_finite() && !crossed::<INCLUSIVE>(*pending + s, gap) {
            *pending += s;
            done += BLOCK;
            continue;
        }
        if let Some(stop) = walk::<T, INCLUSIVE>(block, pending, gap, &mut done) {
            return (done, stop);
        }
    }
    match walk::<T, INCLUSIVE>(blocks.remainder(), pending, gap, &mut done) {
        Some(stop) => (done, stop),
        None => (done, Stop::End),
    }
}

#[inline]
fn walk<T, const INCLUSIVE: bool>(
    items: &[(T, f64)],
    pending: &mut f64,
    gap: f64,
    done: &mut usize,
) -> Option<Stop> {
    for (_, w) in items {
        if !is_valid_weight(*w) {
            return Some(Stop::Irregular);
        }
        *pending += w;
        *done += 1;
        if crossed::<INCLUSIVE>(*pending, gap) {
            return Some(Stop::Crossed);
        }
    }
    None
}
