//! Shared inputs for the criterion benchmarks.

use gateprune_core::featuremap::{build_zz_map, BoundCircuit};
use gateprune_core::pipeline::{bench_features, BenchConfig};
use gateprune_core::Result;

/// The feature map of `config` on `n` qubits bound to the fixed bench features.
pub fn bench_circuit(config: BenchConfig, n: usize) -> Result<BoundCircuit> {
    build_zz_map(&config.spec(n)?, &bench_features(n))
}

/// `count` points in [0, 1]^d on a fixed lattice.
pub fn lattice_points(count: usize, d: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| (0..d).map(|j| ((i * (j + 3) + j) % 11) as f64 / 10.0).collect())
        .collect()
}
