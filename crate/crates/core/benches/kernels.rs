//! Sequential against rayon execution for the data-parallel kernels.
//! Build with `--no-default-features` to see both rows run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use exminor::exec::Exec;
use exminor::flow::{pairwise_distance_sum, solve_uniform_mcf_with, RoutingParams};
use exminor::generators::{generate, GenSpec, Kind};
use exminor::spectral::exact_expansion_with;
use exminor::Rational;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn exact_expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_expansion");
    group.sample_size(10);
    for n in [16usize, 20] {
        let g = generate(&GenSpec { kind: Kind::RandomRegular(n, 3), seed: 1 }).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| exact_expansion_with(black_box(g), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn hop_distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_pairs_hop_distances");
    for n in [64usize, 256] {
        let g = generate(&GenSpec { kind: Kind::RandomRegular(n, 3), seed: 2 }).unwrap();
        let lengths: Vec<f64> = (0..g.m()).map(|e| 1.0 + (e % 7) as f64 / 7.0).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| pairwise_distance_sum(black_box(g), &lengths, n - 1, exec))
            });
        }
    }
    group.finish();
}

fn uniform_flow(c: &mut Criterion) {
    let mut group = c.benchmark_group("uniform_mcf");
    group.sample_size(10);
    for n in [64usize, 128] {
        let g = generate(&GenSpec { kind: Kind::RandomRegular(n, 3), seed: 3 }).unwrap();
        let params = RoutingParams::for_graph(&g, Rational::new(1, 10)).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| solve_uniform_mcf_with(black_box(g), &params, 0.1, exec, None).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, exact_expansion, hop_distances, uniform_flow);
criterion_main!(benches);
