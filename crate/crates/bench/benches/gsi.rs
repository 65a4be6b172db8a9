use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gateprune_bench::bench_circuit;
use gateprune_core::pipeline::{compute_gsi, BenchConfig, GsiEngine};

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("gsi_exact");
    group.sample_size(10);
    for config in BenchConfig::ALL {
        for n in [4, 6, 8] {
            let circuit = bench_circuit(config, n).unwrap().circuit;
            group.bench_with_input(BenchmarkId::new(config.label(), n), &circuit, |b, circ| {
                b.iter(|| compute_gsi(black_box(circ), &GsiEngine::Exact, 0.1, false).unwrap())
            });
        }
    }
    group.finish();
}

fn hardware(c: &mut Criterion) {
    let mut group = c.benchmark_group("gsi_hardware");
    group.sample_size(10);
    let engine = GsiEngine::Hardware { shots: 1024, noise: None, seed: 1 };
    for n in [4, 6] {
        let circuit = bench_circuit(BenchConfig::S1, n).unwrap().circuit;
        group.bench_with_input(BenchmarkId::from_parameter(n), &circuit, |b, circ| {
            b.iter(|| compute_gsi(black_box(circ), &engine, 0.1, false).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact, hardware);
criterion_main!(benches);
