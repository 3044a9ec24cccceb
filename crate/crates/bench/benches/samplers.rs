use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use wrswr::{
    two_pass_sample, HeapSampler, ParallelSampler, RandomSource, Sampler, SeedPlan, SkipSampler,
};
use wrswr_bench::{inverse_cdf_sample, population, WeightStructure};

const N: usize = 200_000;

fn heap_vs_skip(c: &mut Criterion) {
    for structure in [WeightStructure::Constant, WeightStructure::Increasing] {
        let items = population(N, structure);
        let mut group = c.benchmark_group(format!("heap_vs_skip/{structure}"));
        group.throughput(Throughput::Elements(N as u64));
        for m in [100, 1_000, 10_000] {
            group.bench_with_input(BenchmarkId::new("heap", m), &m, |b, &m| {
                b.iter(|| {
                    let mut s = HeapSampler::new(m, RandomSource::new(1)).unwrap();
                    s.observe_slice(&items).unwrap();
                    black_box(s.finish().unwrap())
                })
            });
            group.bench_with_input(BenchmarkId::new("skip", m), &m, |b, &m| {
                b.iter(|| {
                    let mut s = SkipSampler::new(m, RandomSource::new(1)).unwrap();
                    s.observe_slice(&items).unwrap();
                    black_box(s.finish().unwrap())
                })
            });
        }
        group.finish();
    }
}

fn sample_ratio(c: &mut Criterion) {
    let items = population(N, WeightStructure::Constant);
    let mut group = c.benchmark_group("sample_ratio");
    for ratio in [0.001, 0.01, 0.1, 0.5] {
        let m = ((ratio * N as f64) as usize).max(1);
        group.bench_with_input(BenchmarkId::new("skip", ratio), &m, |b, &m| {
            b.iter(|| {
                let mut s = SkipSampler::new(m, RandomSource::new(2)).unwrap();
                s.observe_slice(&items).unwrap();
                black_box(s.finish().unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("inverse-cdf", ratio), &m, |b, &m| {
            b.iter(|| black_box(inverse_cdf_sample(&items, m, &mut RandomSource::new(2))))
        });
    }
    group.finish();
}

fn parallel(c: &mut Criterion) {
    let items = population(N, WeightStructure::Constant);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = N.div_ceil(threads);
    let slices: Vec<&[(usize, f64)]> = items.chunks(chunk).collect();
    let mut group = c.benchmark_group("parallel");
    for m in [1_000, 10_000] {
        group.bench_with_input(BenchmarkId::new("one-pass", m), &m, |b, &m| {
            b.iter(|| {
                let streams: Vec<_> = slices.iter().map(|s| s.iter().copied()).collect();
                let sampler = ParallelSampler::new(m, SeedPlan::Master(3)).unwrap();
                black_box(sampler.run(streams).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("two-pass", m), &m, |b, &m| {
            b.iter(|| black_box(two_pass_sample(&slices, m, &mut RandomSource::new(3)).unwrap()))
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = heap_vs_skip, sample_ratio, parallel
}
criterion_main!(benches);
