//! Measurement-only estimator. Every quantity comes from sampled counts of
//! auxiliary circuits built from circuit prefixes, so the same procedure
//! applies to a device that exposes nothing but a sampler.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{default_ent_qubit, SensitivityConfig};
use super::metrics::{population_std, GateMetrics};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::simcore::{
    pauli_expectation, sample_counts, von_neumann_entropy, Basis, Circuit, DensityMatrix,
    NoiseSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareEstimatorConfig {
    pub shots: u64,
    /// tomography qubit; `None` picks qubit 1 (or 0 on one qubit)
    pub qubit: Option<usize>,
    pub delta: f64,
    pub noise: Option<NoiseSpec>,
    pub seed: u64,
    /// evaluate per-gate circuit batches on the rayon pool
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

fn default_parallel() -> bool {
    true
}

impl HardwareEstimatorConfig {
    pub fn new(shots: u64, seed: u64) -> Self {
        HardwareEstimatorConfig {
            shots,
            qubit: None,
            delta: SensitivityConfig::default().delta,
            noise: None,
            seed,
            parallel: true,
        }
    }
}

// stream tags for the per-gate auxiliary circuits
const TAG_F: u64 = 0;
const TAG_Z: u64 = 1;
const TAG_X: u64 = 2;
const TAG_Y: u64 = 3;
const TAG_PLUS: u64 = 4;
const TAG_MINUS: u64 = 5;

fn circuit_seed(seed: u64, position: usize, tag: u64) -> u64 {
    derive_seed(seed, position as u64 * 8 + tag)
}

pub fn gsi_hardware(circuit: &Circuit, cfg: &HardwareEstimatorConfig) -> Result<Vec<GateMetrics>> {
    if cfg.shots == 0 {
        return Err(Error::ZeroShots);
    }
    if circuit.is_empty() {
        return Err(Error::EmptyCircuit);
    }
    SensitivityConfig::new(cfg.delta)?;
    if let Some(noise) = &cfg.noise {
        noise.validate()?;
    }
    let n = circuit.num_qubits();
    let q = cfg.qubit.unwrap_or_else(|| default_ent_qubit(n));
    if q >= n {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: n });
    }

    let positions: Vec<usize> = (0..circuit.len()).collect();
    let estimate = |&i: &usize| estimate_gate(circuit, i, q, cfg);
    let results: Vec<Result<GateMetrics>> = if cfg.parallel {
        positions.par_iter().map(estimate).collect()
    } else {
        positions.iter().map(estimate).collect()
    };
    results.into_iter().collect()
}

fn estimate_gate(
    circuit: &Circuit,
    i: usize,
    q: usize,
    cfg: &HardwareEstimatorConfig,
) -> Result<GateMetrics> {
    let n = circuit.num_qubits();
    let noise = cfg.noise.as_ref();
    let gate = circuit.gates()[i];
    let prefix = circuit.prefix(i + 1);
    let prev = circuit.prefix(i);

    // overlap V_i = U_{i-1}^dagger U_i
    let overlap = prefix.then(&prev.dagger())?;
    let f = sample_counts(&overlap, cfg.shots, noise, circuit_seed(cfg.seed, i, TAG_F))?.p_all_zero();

    let e = if n > 1 {
        let expect = |basis: Basis, tag: u64| {
            pauli_expectation(&prefix, q, basis, Some(cfg.shots), noise, circuit_seed(cfg.seed, i, tag))
        };
        let z = expect(Basis::Z, TAG_Z)?;
        let x = expect(Basis::X, TAG_X)?;
        let y = expect(Basis::Y, TAG_Y)?;
        von_neumann_entropy(&DensityMatrix::from_bloch(x, y, z))?
    } else {
        0.0
    };

    let p = match gate.param() {
        Some(theta) => {
            let undo = prefix.dagger();
            let mut shifted = [0.0; 2];
            for (slot, (sign, tag)) in shifted.iter_mut().zip([(1.0, TAG_PLUS), (-1.0, TAG_MINUS)]) {
                let mut perturbed = prev.clone();
                perturbed.push(gate.with_param(theta + sign * cfg.delta)?)?;
                let v = perturbed.then(&undo)?;
                *slot = sample_counts(&v, cfg.shots, noise, circuit_seed(cfg.seed, i, tag))?.p_all_zero();
            }
            population_std(&[1.0, shifted[0], shifted[1]])
        }
        None => 0.0,
    };

    Ok(GateMetrics::new(i, gate.name(), f, e, p))
}
