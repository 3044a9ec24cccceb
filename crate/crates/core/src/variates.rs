//! Discrete random variates used by the samplers and the merge step.

use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::random::RandomSource;

/// Largest `m` for which the truncated binomial always uses inversion.
const INVERSION_LIMIT: usize = 64;

/// Draws `k ~ Binomial(m, p)` conditioned on `k >= 1`.
///
/// Inversion on the renormalised c.d.f. is used for `m <= 64` and whenever
/// `p < 1/m`, where a zero draw would be likely. Otherwise a plain binomial
/// draw is retried until it is positive, which succeeds with probability at
/// least `1 - 1/e` per attempt.
pub fn truncated_binomial(m: usize, p: f64, rng: &mut RandomSource) -> Result<usize> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    if m == 1 {
        return Ok(1);
    }
    if p == 1.0 {
        return Ok(m);
    }
    if m <= INVERSION_LIMIT || p * (m as f64) < 1.0 {
        return Ok(truncated_binomial_inversion(m, p, rng));
    }
    // p >= 1/m, so both n and p are in rand_distr's valid range.
    let dist = Binomial::new(m as u64, p).expect("valid binomial parameters");
    loop {
        let k = dist.sample(rng) as usize;
        if k > 0 {
            return Ok(k);
        }
    }
}

fn truncated_binomial_inversion(m: usize, p: f64, rng: &mut RandomSource) -> usize {
    let mf = m as f64;
    let u = rng.uniform_open();

    // With a = (m-1)p/2 < 1/2, Bonferroni bounds give
    // P(k = 1 | k >= 1) >= (1 - 2a) / (1 - a). Below that bound the upward
    // walk would return 1, so the c.d.f. is not needed.
    let a = 0.5 * (mf - 1.0) * p;
    if p <= 0.5 && a < 0.5 && u < (1.0 - 2.0 * a) / (1.0 - a) {
        return 1;
    }

    let log_q = (-p).ln_1p();
    // P(k >= 1) = 1 - (1-p)^m
    let mass = -(mf * log_q).exp_m1();
    let target = u * mass;

    if p <= 0.5 {
        // Walk up from k = 1; pmf(1) = m p (1-p)^(m-1) does not underflow here.
        let ratio = p / (1.0 - p);
        let mut pmf = mf * p * ((mf - 1.0) * log_q).exp();
        let mut cdf = pmf;
        let mut k = 1;
        while cdf < target && k < m {
            pmf *= ratio * (m - k) as f64 / (k + 1) as f64;
            k += 1;
            cdf += pmf;
        }
        k
    } else {
        // Walk down from k = m in terms of j = m - k ~ Binomial(m, 1-p),
        // starting at pmf(j = 0) = p^m, and stop before j = m (k = 0).
        let ratio = (1.0 - p) / p;
        let mut pmf = (mf * p.ln()).exp();
        let mut cdf = pmf;
        let mut j = 0;
        while cdf < target && j < m - 1 {
            pmf *= ratio * (m - j) as f64 / (j + 1) as f64;
            j += 1;
            cdf += pmf;
        }
        m - j
    }
}

/// Draws from `Binomial(n, p)` for `p` in `[0, 1]`.
pub fn binomial(n: usize, p: f64, rng: &mut RandomSource) -> usize {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n as u64, p)
        .expect("p checked to lie in (0, 1)")
        .sample(rng) as usize
}

/// Draws `count` indices i.i.d. with probability proportional to `weights`,
/// returned in ascending order.
///
/// Generates the sorted uniforms directly from normalised exponential
/// spacings and matches them against the running weight sum in a single
/// pass, so no prefix array or search is needed. Weights are assumed valid.
pub fn proportional_draws(weights: &[f64], count: usize, rng: &mut RandomSource) -> Vec<usize> {
    let total = weights.iter().sum();
    proportional_draws_by(weights.len(), |i| weights[i], total, count, rng)
}

/// [`proportional_draws`] over `len` items whose weights are read through
/// `weight_of`, with their sum precomputed as `total`.
pub fn proportional_draws_by<F>(
    len: usize,
    weight_of: F,
    total: f64,
    count: usize,
    rng: &mut RandomSource,
) -> Vec<usize>
where
    F: Fn(usize) -> f64,
{
    let mut out = Vec::with_capacity(count);
    if count == 0 || len == 0 {
        return out;
    }
    if len == 1 {
        out.resize(count, 0);
        return out;
    }
    let mut points = Vec::with_capacity(count);
    let mut acc = 0.0;
    for _ in 0..count {
        acc += rng.exponential();
        points.push(acc);
    }
    let scale = total / (acc + rng.exponential());

    let last = len - 1;
    let mut item = 0;
    let mut upper = weight_of(0);
    for point in points {
        let target = point * scale;
        while target >= upper && item < last {
            item += 1;
            upper += weight_of(item);
        }
        out.push(item);
    }
    out
}
