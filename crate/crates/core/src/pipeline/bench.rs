use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scan::{compute_gsi, GsiEngine};
use crate::error::{Error, Result};
use crate::featuremap::{build_zz_map, Entanglement, FeatureMapSpec};
use crate::qml::Clock;

pub const DEFAULT_QUBIT_CAP: usize = 16;

/// The three scalability configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchConfig {
    /// linear entanglement, one repetition
    S1,
    /// linear entanglement, three repetitions
    S2,
    /// full entanglement, one repetition
    S3,
}

impl BenchConfig {
    pub const ALL: [BenchConfig; 3] = [BenchConfig::S1, BenchConfig::S2, BenchConfig::S3];

    pub fn entanglement(self) -> Entanglement {
        match self {
            BenchConfig::S3 => Entanglement::Full,
            _ => Entanglement::Linear,
        }
    }

    pub fn reps(self) -> usize {
        match self {
            BenchConfig::S2 => 3,
            _ => 1,
        }
    }

    pub fn label(self) -> String {
        format!("{self:?}_ZZ_{}_r{}", self.entanglement(), self.reps())
    }

    pub fn spec(self, n: usize) -> Result<FeatureMapSpec> {
        FeatureMapSpec::new(n, self.entanglement(), self.reps())
    }
}

impl FromStr for BenchConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(BenchConfig::S1),
            "S2" => Ok(BenchConfig::S2),
            "S3" => Ok(BenchConfig::S3),
            _ => Err(Error::InvalidConfig(format!("unknown bench configuration {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub config: String,
    pub num_qubits: usize,
    pub gates: usize,
    pub seconds: f64,
}

/// Fixed feature vector for timing runs.
pub fn bench_features(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64).collect()
}

/// Times one GSI computation per (configuration, qubit count).
pub fn bench_scalability(
    configs: &[BenchConfig],
    qubits: &[usize],
    engine: &GsiEngine,
    qubit_cap: usize,
    parallel: bool,
    clock: &dyn Clock,
) -> Result<Vec<BenchRow>> {
    if let Some(&n) = qubits.iter().find(|&&n| n > qubit_cap) {
        return Err(Error::QubitCapExceeded { num_qubits: n, cap: qubit_cap });
    }
    let mut rows = Vec::with_capacity(configs.len() * qubits.len());
    for &config in configs {
        for &n in qubits {
            let spec = config.spec(n)?;
            let bound = build_zz_map(&spec, &bench_features(n))?;
            let start = clock.now_seconds();
            let metrics = compute_gsi(&bound.circuit, engine, 0.1, parallel)?;
            let seconds = clock.now_seconds() - start;
            debug_assert_eq!(metrics.len(), bound.len());
            rows.push(BenchRow { config: config.label(), num_qubits: n, gates: bound.len(), seconds });
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
