//! Ground truth for the distribution tests.
//!
//! Every sampler in this crate must leave each slot holding item `i` with
//! probability `w_i / W`, independently across slots, so the number of
//! copies of item `i` in a size-`m` sample is `Binomial(m, w_i / W)`. This
//! module computes those laws analytically, enumerates the reference
//! algorithm's execution tree on tiny inputs as an independent check, and
//! provides the goodness-of-fit statistics used to compare samples against
//! them.

use std::collections::HashMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::weight::{check_weight, total_weight};

/// Expected count below which a chi-square bin is pooled into a tail bin.
pub const MIN_EXPECTED: f64 = 5.0;

/// `w_i / W` for every item.
pub fn exact_marginals(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::NoItems);
    }
    let total = total_weight(weights)?;
    Ok(weights.iter().map(|w| w / total).collect())
}

/// The `Binomial(n, p)` pmf over `0..=n`.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    let mut coeff = 1.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                coeff = coeff * (n - k + 1) as f64 / k as f64;
            }
            coeff * p.powi(k as i32) * q.powi((n - k) as i32)
        })
        .collect()
}

/// Law of the number of copies of item `index` in a size-`m` sample.
pub fn exact_count_pmf(weights: &[f64], m: usize, index: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    let marginals = exact_marginals(weights)?;
    let p = *marginals.get(index).ok_or(Error::IndexOutOfRange {
        index,
        len: weights.len(),
    })?;
    Ok(binomial_pmf(m, p))
}

/// Exact law of the full slot configuration after running the reference
/// algorithm on `weights`, found by expanding every Bernoulli outcome.
///
/// Configurations map slot `j` to the index of the item it holds. The cost
/// is `O(n * 2^m * n^m)`; keep inputs tiny.
pub fn enumerate_reference(weights: &[f64], m: usize) -> Result<HashMap<Vec<usize>, f64>> {
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    if weights.is_empty() {
        return Err(Error::NoItems);
    }
    for (i, &w) in weights.iter().enumerate() {
        check_weight(w, i as u64)?;
    }
    let mut states: HashMap<Vec<usize>, f64> = HashMap::from([(vec![0; m], 1.0)]);
    let mut total = weights[0];
    for (n, &w) in weights.iter().enumerate().skip(1) {
        total += w;
        let p = w / total;
        let mut next = HashMap::new();
        for (config, prob) in &states {
            // Bit j of `mask` set means slot j is replaced.
            for mask in 0u32..(1 << m) {
                let mut out = config.clone();
                let mut pr = *prob;
                for (j, slot) in out.iter_mut().enumerate() {
                    if mask & (1 << j) != 0 {
                        *slot = n;
                        pr *= p;
                    } else {
                        pr *= 1.0 - p;
                    }
                }
                *next.entry(out).or_insert(0.0) += pr;
            }
        }
        states = next;
    }
    Ok(states)
}

/// Probability of a slot configuration when slots are i.i.d. `w_i / W`.
pub fn product_law(weights: &[f64], config: &[usize]) -> Result<f64> {
    let marginals = exact_marginals(weights)?;
    config.iter().try_fold(1.0, |acc, &i| {
        marginals
            .get(i)
            .map(|p| acc * p)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: weights.len(),
            })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub tv_distance: f64,
    pub replications: u64,
}

impl GofReport {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

/// Groups bins whose expected count is below [`MIN_EXPECTED`].
///
/// Returns `(observed, expected)` per bin. Low bins are summed into one tail
/// bin, which is folded into the smallest regular bin when it is itself too
/// small and at least two regular bins remain. A tail with zero expectation
/// stays separate so impossible outcomes are not hidden.
fn pool(observed: &[f64], expected: &[f64]) -> Vec<(f64, f64)> {
    let mut bins = Vec::new();
    let (mut tail_o, mut tail_e) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e >= MIN_EXPECTED {
            bins.push((o, e));
        } else {
            tail_o += o;
            tail_e += e;
        }
    }
    if tail_e == 0.0 && tail_o == 0.0 {
        return bins;
    }
    if tail_e > 0.0 && tail_e < MIN_EXPECTED && bins.len() >= 2 {
        let smallest = bins
            .iter_mut()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least two bins");
        smallest.0 += tail_o;
        smallest.1 += tail_e;
    } else {
        bins.push((tail_o, tail_e));
    }
    bins
}

fn chi_square_sf(statistic: f64, dof: usize) -> f64 {
    if statistic.is_infinite() {
        return 0.0;
    }
    ChiSquared::new(dof as f64)
        .expect("dof >= 1")
        .sf(statistic)
        .clamp(0.0, 1.0)
}

/// Pearson goodness-of-fit test of a histogram against a pmf.
pub fn chi_square_gof(observed: &[u64], expected_pmf: &[f64]) -> Result<GofReport> {
    if observed.len() != expected_pmf.len() {
        return Err(Error::LengthMismatch {
            left: observed.len(),
            right: expected_pmf.len(),
        });
    }
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let obs: Vec<f64> = observed.iter().map(|&o| o as f64).collect();
    let exp: Vec<f64> = expected_pmf.iter().map(|p| p * nf).collect();
    let bins = pool(&obs, &exp);
    if bins.len() < 2 {
        return Err(Error::DegenerateTest { bins: bins.len() });
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| {
            if e == 0.0 {
                f64::INFINITY
            } else {
                (o - e) * (o - e) / e
            }
        })
        .sum();
    let dof = bins.len() - 1;
    let tv_distance = if n == 0 {
        0.0
    } else {
        total_variation(
            &obs.iter().map(|o| o / nf).collect::<Vec<_>>(),
            expected_pmf,
        )
    };
    Ok(GofReport {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
        tv_distance,
        replications: n,
    })
}

/// Chi-square test that two histograms come from the same distribution.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<GofReport> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let total = (na + nb) as f64;
    if na == 0 || nb == 0 {
        return Err(Error::DegenerateTest { bins: 0 });
    }
    // Pool columns on the smaller row's expected count.
    let column: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| (x + y) as f64).collect();
    let small = na.min(nb) as f64;
    let keyed: Vec<f64> = column.iter().map(|c| c * small / total).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut tail = Vec::new();
    for (j, &e) in keyed.iter().enumerate() {
        if e >= MIN_EXPECTED {
            groups.push(vec![j]);
        } else if column[j] > 0.0 {
            tail.push(j);
        }
    }
    if !tail.is_empty() {
        let tail_e: f64 = tail.iter().map(|&j| keyed[j]).sum();
        if tail_e < MIN_EXPECTED && groups.len() >= 2 {
            let smallest = groups
                .iter_mut()
                .min_by(|x, y| keyed[x[0]].total_cmp(&keyed[y[0]]))
                .expect("at least two groups");
            smallest.extend(tail);
        } else {
            groups.push(tail);
        }
    }
    if groups.len() < 2 {
        return Err(Error::DegenerateTest { bins: groups.len() });
    }

    let mut statistic = 0.0;
    for g in &groups {
        let xa: f64 = g.iter().map(|&j| a[j] as f64).sum();
        let xb: f64 = g.iter().map(|&j| b[j] as f64).sum();
        let col = xa + xb;
        let ea = col * na as f64 / total;
        let eb = col * nb as f64 / total;
        statistic += (xa - ea).powi(2) / ea + (xb - eb).powi(2) / eb;
    }
    let dof = groups.len() - 1;
    let pa: Vec<f64> = a.iter().map(|&x| x as f64 / na as f64).collect();
    let pb: Vec<f64> = b.iter().map(|&x| x as f64 / nb as f64).collect();
    Ok(GofReport {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
        tv_distance: total_variation(&pa, &pb),
        replications: na + nb,
    })
}

/// Half the L1 distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Kolmogorov-Smirnov distance between an integer-valued sample and a c.d.f.
///
/// `histogram[t]` counts observations equal to `t`; `censored` counts
/// observations beyond the last bin. Both c.d.f.s are step functions on the
/// integers, so the supremum is attained at a bin.
pub fn ks_distance<F>(histogram: &[u64], censored: u64, cdf: F) -> f64
where
    F: Fn(usize) -> f64,
{
    let n = (histogram.iter().sum::<u64>() + censored) as f64;
    let mut running = 0u64;
    let mut worst: f64 = 0.0;
    for (t, &h) in histogram.iter().enumerate() {
        running += h;
        worst = worst.max((running as f64 / n - cdf(t)).abs());
    }
    worst
}

/// A histogram of `values` over `0..=max`.
pub fn histogram(values: impl IntoIterator<Item = usize>, max: usize) -> Vec<u64> {
    let mut h = vec![0u64; max + 1];
    for v in values {
        h[v] += 1;
    }
    h
}
