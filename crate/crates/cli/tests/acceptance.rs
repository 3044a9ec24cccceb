//! Acceptance suite. Runs every criterion in order on one thread (timings
//! must not compete with other tests) and prints one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use wrswr::oracle::{
    chi_square_gof, chi_square_two_sample, enumerate_reference, exact_count_pmf, exact_marginals,
    histogram, ks_distance, product_law, total_variation,
};
use wrswr::{
    parallel_sample, truncated_binomial, two_pass_sample, Algorithm, RandomSource, Sampler,
    SamplerConfig, SeedPlan, SkipSampler,
};
use wrswr_bench::{population, time_once, BenchAlgorithm, Timing, WeightStructure};

const ALPHA: f64 = 0.001;
const REPLICATIONS: u64 = 200_000;
const WEIGHTS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
const SAMPLERS: [Algorithm; 3] = [Algorithm::Basic, Algorithm::Heap, Algorithm::Skip];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Disjoint seed ranges so no two experiments share random streams.
fn seed_base(criterion: u64, arm: u64) -> u64 {
    (criterion << 40) | (arm << 32)
}

fn four_items() -> Vec<(usize, f64)> {
    WEIGHTS.iter().copied().enumerate().collect()
}

/// Per-item count histograms (`[item][count]`) over seeded replications.
fn count_histograms(algorithm: Algorithm, m: usize, base: u64) -> Vec<Vec<u64>> {
    let items = four_items();
    let mut hist = vec![vec![0u64; m + 1]; items.len()];
    for rep in 0..REPLICATIONS {
        let r = wrswr::sample(algorithm, m, base + rep, items.iter().copied()).unwrap();
        let mut c = [0usize; 4];
        for &i in r.iter() {
            c[i] += 1;
        }
        for (i, &k) in c.iter().enumerate() {
            hist[i][k] += 1;
        }
    }
    hist
}

fn marginal_law() -> Outcome {
    let exact = exact_marginals(&WEIGHTS).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (arm, algorithm) in SAMPLERS.into_iter().enumerate() {
        let base = seed_base(1, arm as u64);
        let mut hits = vec![0u64; 4];
        for rep in 0..REPLICATIONS {
            let r = wrswr::sample(algorithm, 1, base + rep, four_items()).unwrap();
            hits[r.as_slice()[0]] += 1;
        }
        let report = chi_square_gof(&hits, &exact).unwrap();
        pass &= report.p_value > ALPHA;
        parts.push(format!("{algorithm} p={:.4}", report.p_value));
    }
    Outcome::new(pass, parts.join(", "))
}

fn count_law(histograms: &HashMap<Algorithm, Vec<Vec<u64>>>) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for algorithm in SAMPLERS {
        let mut worst = f64::INFINITY;
        for (i, hist) in histograms[&algorithm].iter().enumerate() {
            let pmf = exact_count_pmf(&WEIGHTS, 5, i).unwrap();
            let p = chi_square_gof(hist, &pmf).unwrap().p_value;
            pass &= p > ALPHA;
            worst = worst.min(p);
        }
        parts.push(format!("{algorithm} min p={worst:.4}"));
    }
    Outcome::new(pass, parts.join(", "))
}

fn cross_algorithm(histograms: &HashMap<Algorithm, Vec<Vec<u64>>>) -> Outcome {
    let basic = &histograms[&Algorithm::Basic];
    let mut pass = true;
    let mut parts = Vec::new();
    for other in [Algorithm::Skip, Algorithm::Heap] {
        let mut worst = f64::INFINITY;
        for (a, b) in basic.iter().zip(&histograms[&other]) {
            let p = chi_square_two_sample(a, b).unwrap().p_value;
            pass &= p > ALPHA;
            worst = worst.min(p);
        }
        parts.push(format!("basic vs {other} min p={worst:.4}"));
    }
    Outcome::new(pass, parts.join(", "))
}

fn skip_law() -> Outcome {
    // Every item after the first has weight 1; the first carries the weight
    // of `w0` such items, so each replication measures the skip that starts
    // at W = w0. P(T <= t) = 1 - (w0 / (w0 + t + 1))^m.
    let w0 = 100.0;
    let max = 100_000;
    let skips = 100_000;
    let mut pass = true;
    let mut parts = Vec::new();
    for (arm, m) in [1usize, 4].into_iter().enumerate() {
        let base = seed_base(4, arm as u64);
        let mut lengths = Vec::with_capacity(skips);
        let mut censored = 0;
        for rep in 0..skips as u64 {
            let mut s = SkipSampler::with_config(
                m,
                RandomSource::new(base + rep),
                SamplerConfig::without_warmup(),
            )
            .unwrap();
            s.observe((), w0).unwrap();
            match (0..max).find(|_| s.observe((), 1.0).unwrap() > 0) {
                Some(t) => lengths.push(t),
                None => censored += 1,
            }
        }
        let cdf = |t: usize| 1.0 - (w0 / (w0 + t as f64 + 1.0)).powi(m as i32);
        let d = ks_distance(&histogram(lengths, max - 1), censored, cdf);
        pass &= d < 0.01;
        parts.push(format!("m={m} KS={d:.5}"));
    }
    Outcome::new(pass, parts.join(", "))
}

fn truncated_pmf(m: usize, p: f64) -> Vec<f64> {
    // Computed from scratch: C(m,k) p^k (1-p)^(m-k) / (1 - (1-p)^m).
    let mass = 1.0 - (1.0 - p).powi(m as i32);
    let mut choose = 1.0;
    let mut pmf = vec![0.0];
    for k in 1..=m {
        choose = choose * (m - k + 1) as f64 / k as f64;
        pmf.push(choose * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32) / mass);
    }
    pmf
}

fn truncated_binomial_law() -> Outcome {
    let draws = 100_000;
    let mut pass = true;
    let mut parts = Vec::new();
    for (arm, (m, p)) in [(2, 0.5), (5, 0.2), (10, 0.9)].into_iter().enumerate() {
        let mut rng = RandomSource::new(seed_base(5, arm as u64));
        let mut counts = vec![0u64; m + 1];
        for _ in 0..draws {
            counts[truncated_binomial(m, p, &mut rng).unwrap()] += 1;
        }
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / draws as f64).collect();
        let tv = total_variation(&empirical, &truncated_pmf(m, p));
        pass &= tv < 0.005 && counts[0] == 0;
        parts.push(format!("({m},{p}) TV={tv:.5}"));
    }
    Outcome::new(pass, parts.join(", "))
}

fn merge_law() -> Outcome {
    let streams = vec![vec![('A', 1.0), ('B', 2.0)], vec![('C', 3.0)]];
    let weights = [1.0, 2.0, 3.0];
    let index = |c: char| (c as u8 - b'A') as usize;
    let mut pass = true;
    let mut parts = Vec::new();
    for (arm, m) in [1usize, 2, 5].into_iter().enumerate() {
        let base = seed_base(6, arm as u64);
        let mut one = vec![vec![0u64; m + 1]; 3];
        let mut two = vec![vec![0u64; m + 1]; 3];
        for rep in 0..REPLICATIONS {
            let seed = base + rep;
            let tally = |sample: &[char], into: &mut Vec<Vec<u64>>| {
                let mut c = [0usize; 3];
                for &x in sample {
                    c[index(x)] += 1;
                }
                for (i, &k) in c.iter().enumerate() {
                    into[i][k] += 1;
                }
            };
            let r = parallel_sample(streams.clone(), m, SeedPlan::Master(seed)).unwrap();
            tally(r.as_slice(), &mut one);
            let r = two_pass_sample(&streams, m, &mut RandomSource::new(seed)).unwrap();
            tally(r.as_slice(), &mut two);
        }
        let mut worst = [f64::INFINITY; 2];
        for i in 0..3 {
            let pmf = exact_count_pmf(&weights, m, i).unwrap();
            for (w, hist) in worst.iter_mut().zip([&one, &two]) {
                let p = chi_square_gof(&hist[i], &pmf).unwrap().p_value;
                pass &= p > ALPHA;
                *w = w.min(p);
            }
        }
        parts.push(format!(
            "m={m} merge min p={:.4} two-pass min p={:.4}",
            worst[0], worst[1]
        ));
    }
    Outcome::new(pass, parts.join(", "))
}

fn brute_force_oracle() -> Outcome {
    let cases: [&[f64]; 6] = [
        &[2.0],
        &[1.0, 1.0],
        &[1.0, 3.0],
        &[0.001, 7.0],
        &[1.0, 2.0, 3.0],
        &[5.0, 0.25, 1e-3],
    ];
    let mut worst: f64 = 0.0;
    let mut outcomes = 0;
    for weights in cases {
        for m in 1..=2 {
            let tree = enumerate_reference(weights, m).unwrap();
            // Every configuration, including ones the tree never reaches.
            let n = weights.len();
            for code in 0..n.pow(m as u32) {
                let config: Vec<usize> = (0..m).map(|j| code / n.pow(j as u32) % n).collect();
                let analytic = product_law(weights, &config).unwrap();
                let enumerated = tree.get(&config).copied().unwrap_or(0.0);
                worst = worst.max((analytic - enumerated).abs());
                outcomes += 1;
            }
            // Per-item counts against the binomial law.
            for i in 0..n {
                let binomial = exact_count_pmf(weights, m, i).unwrap();
                let mut from_tree = vec![0.0; m + 1];
                for (config, p) in &tree {
                    from_tree[config.iter().filter(|&&x| x == i).count()] += p;
                }
                for (a, b) in binomial.iter().zip(&from_tree) {
                    worst = worst.max((a - b).abs());
                    outcomes += 1;
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-10,
        format!("{outcomes} outcome probabilities, max |diff|={worst:.2e}"),
    )
}

/// Median times of several algorithms, alternating them within each
/// repetition.
fn medians(
    algorithms: &[BenchAlgorithm],
    items: &[(usize, f64)],
    m: usize,
    repetitions: u64,
) -> Vec<f64> {
    let mut runs = vec![Vec::new(); algorithms.len()];
    // One untimed round to fault in memory and warm caches.
    for &a in algorithms {
        time_once(a, items, m, 0).unwrap();
    }
    for rep in 0..repetitions {
        for (i, &a) in algorithms.iter().enumerate() {
            runs[i].push(time_once(a, items, m, seed_base(8, rep)).unwrap());
        }
    }
    runs.into_iter()
        .map(|r| Timing::from_runs(r).median.as_secs_f64() * 1e3)
        .collect()
}

fn performance() -> Outcome {
    let n = 1_000_000;
    let reps = 21;
    let items = population(n, WeightStructure::Constant);
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1_000, 10_000, 100_000] {
        let t = medians(
            &[BenchAlgorithm::Skip, BenchAlgorithm::Heap],
            &items,
            m,
            reps,
        );
        pass &= t[0] < t[1];
        parts.push(format!("(a) m={m} skip={:.2}ms heap={:.2}ms", t[0], t[1]));
    }
    let both = [BenchAlgorithm::Skip, BenchAlgorithm::InverseCdf];
    let low = medians(&both, &items, n / 100, reps);
    let high = medians(&both, &items, n / 2, reps);
    let beats_low = low[0] < low[1];
    let loses_high = high[0] >= high[1];
    pass &= beats_low && loses_high;
    parts.push(format!(
        "(b) m/n=0.01 skip={:.2}ms baseline={:.2}ms [{}], m/n=0.5 skip={:.2}ms baseline={:.2}ms [{}]",
        low[0],
        low[1],
        if beats_low { "skip faster" } else { "skip not faster" },
        high[0],
        high[1],
        if loses_high { "skip not faster" } else { "skip faster" },
    ));
    Outcome::new(pass, parts.join("; "))
}

fn reservoir_twice<F: Fn() -> Vec<usize>>(run: F) -> bool {
    run() == run()
}

fn determinism() -> Outcome {
    let items: Vec<(usize, f64)> = (0..20_000)
        .map(|i| (i, 0.1 + ((i * 7919) % 97) as f64))
        .collect();
    let halves = vec![items[..7_000].to_vec(), items[7_000..].to_vec()];
    let m = 64;
    let seed = 20_240_917;
    let mut failed = Vec::new();
    for algorithm in SAMPLERS {
        for sliced in [false, true] {
            let same = reservoir_twice(|| {
                let mut s = algorithm
                    .sampler(m, RandomSource::new(seed), SamplerConfig::default())
                    .unwrap();
                if sliced {
                    s.observe_slice(&items).unwrap();
                } else {
                    s.extend(items.iter().copied()).unwrap();
                }
                s.finish().unwrap().into_vec()
            });
            if !same {
                failed.push(format!("{algorithm} sliced={sliced}"));
            }
        }
    }
    if !reservoir_twice(|| {
        parallel_sample(halves.clone(), m, SeedPlan::Master(seed))
            .unwrap()
            .into_vec()
    }) {
        failed.push("parallel".into());
    }
    if !reservoir_twice(|| {
        two_pass_sample(&halves, m, &mut RandomSource::new(seed))
            .unwrap()
            .into_vec()
    }) {
        failed.push("two-pass".into());
    }

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tsv");
    let b = dir.path().join("b.tsv");
    let rows = |r: std::ops::Range<usize>| -> String {
        r.map(|i| format!("id{i}\tpayload {i}\t{}\n", 1 + (i * 31) % 17))
            .collect()
    };
    std::fs::write(&a, rows(0..3_000)).unwrap();
    std::fs::write(&b, rows(3_000..5_000)).unwrap();
    for algo in ["basic", "heap", "skip", "parallel-skip", "two-pass"] {
        let cli = || {
            Command::new(env!("CARGO_BIN_EXE_wrswr"))
                .args(["sample", "--algo", algo, "-m", "100", "--seed", "7", "-v"])
                .arg(&a)
                .arg(&b)
                .output()
                .unwrap()
        };
        let (first, second) = (cli(), cli());
        if !first.status.success() || first.stdout != second.stdout || first.stdout.is_empty() {
            failed.push(format!("cli {algo}"));
        }
    }
    let detail = if failed.is_empty() {
        "5 algorithms in-process and 5 via the CLI replay byte-identically".to_string()
    } else {
        format!("differs: {}", failed.join(", "))
    };
    Outcome::new(failed.is_empty(), detail)
}

fn weight_structure_direction() -> Outcome {
    let n = 1_000_000;
    let m = 10_000;
    let reps = 21;
    let algorithms = [BenchAlgorithm::Heap, BenchAlgorithm::Skip];
    let mut ratios = Vec::new();
    for structure in [WeightStructure::Constant, WeightStructure::Increasing] {
        let t = medians(&algorithms, &population(n, structure), m, reps);
        ratios.push((structure, t[0] / t[1], t));
    }
    let detail = ratios
        .iter()
        .map(|(s, r, t)| format!("{s}: heap={:.2}ms skip={:.2}ms ratio={r:.3}", t[0], t[1]))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome::new(ratios[1].1 > ratios[0].1, detail)
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut report = |number: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let outcome = f();
        println!(
            "criterion {number:>2} {:<4} {name} ({:.1}s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            outcome.detail
        );
        results.push(outcome.pass);
    };

    report(1, "marginal law", &mut marginal_law);
    let histograms: HashMap<Algorithm, Vec<Vec<u64>>> = SAMPLERS
        .into_iter()
        .enumerate()
        .map(|(arm, a)| (a, count_histograms(a, 5, seed_base(2, arm as u64))))
        .collect();
    report(2, "count law", &mut || count_law(&histograms));
    report(3, "cross-algorithm equivalence", &mut || {
        cross_algorithm(&histograms)
    });
    report(4, "skip-length law", &mut skip_law);
    report(5, "truncated binomial", &mut truncated_binomial_law);
    report(6, "merge and two-pass law", &mut merge_law);
    report(7, "brute-force oracle", &mut brute_force_oracle);
    report(8, "performance ordering", &mut performance);
    report(9, "determinism", &mut determinism);
    report(
        10,
        "weight-structure direction",
        &mut weight_structure_direction,
    );

    let failed = results.iter().filter(|&&p| !p).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        results.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
