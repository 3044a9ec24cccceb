use wrswr::RandomSource;

/// Non-streaming weighted sampling with replacement over a materialised
/// population: one pass builds the cumulative weight array, then each of the
/// `m` draws is a binary search for a uniform point in it.
pub fn inverse_cdf_sample<T: Clone>(
    items: &[(T, f64)],
    m: usize,
    rng: &mut RandomSource,
) -> Vec<T> {
    if items.is_empty() {
        return Vec::new();
    }
    let mut cumulative = Vec::with_capacity(items.len());
    let mut acc = 0.0;
    for (_, w) in items {
        acc += w;
        cumulative.push(acc);
    }
    let last = items.len() - 1;
    (0..m)
        .map(|_| {
            let target = rng.uniform_open() * acc;
            let i = cumulative.partition_point(|&c| c <= target).min(last);
            items[i].0.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn follows_weights() {
        let items = [('A', 1.0), ('B', 2.0), ('C', 7.0)];
        let mut rng = RandomSource::new(3);
        let draws = inverse_cdf_sample(&items, 100_000, &mut rng);
        for (c, w) in items {
            let f = draws.iter().filter(|&&d| d == c).count() as f64 / 1e5;
            assert!((f - w / 10.0).abs() < 0.01);
        }
    }

    #[test]
    fn empty_population() {
        let items: [(u8, f64); 0] = [];
        assert!(inverse_cdf_sample(&items, 3, &mut RandomSource::new(0)).is_empty());
    }
}
