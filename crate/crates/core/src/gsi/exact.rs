use serde::{Deserialize, Serialize};

use super::metrics::{population_std, GateMetrics};
use crate::error::{Error, Result};
use crate::simcore::{partial_trace, von_neumann_entropy, Circuit, DensityMatrix, GateOp, StateVector};

/// Perturbation set `{0, +delta, -delta}` applied to a gate's angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityConfig {
    pub delta: f64,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        SensitivityConfig { delta: 0.1 }
    }
}

impl SensitivityConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidConfig(format!("sensitivity delta must be > 0, got {delta}")));
        }
        Ok(SensitivityConfig { delta })
    }

    pub fn deltas(&self) -> [f64; 3] {
        [0.0, self.delta, -self.delta]
    }
}

/// Default entanglement probe: qubit 1 when it exists.
pub fn default_ent_qubit(num_qubits: usize) -> usize {
    1.min(num_qubits.saturating_sub(1))
}

/// Standard deviation of `|Tr(rho V)|^2` over the perturbed local operators
/// `V = U(theta)^dagger U(theta + d)`.
pub fn sensitivity_exact(
    rho_prev: &DensityMatrix,
    gate: &GateOp,
    sens: &SensitivityConfig,
) -> Result<f64> {
    let theta = gate.param().ok_or(Error::NotParameterized(gate.name()))?;
    let base_adj = gate.unitary().adjoint();
    let mut fids = [0.0; 3];
    for (slot, d) in fids.iter_mut().zip(sens.deltas()) {
        let v = &base_adj * gate.with_param(theta + d)?.unitary();
        *slot = rho_prev.expectation(&v)?.norm_sqr();
    }
    Ok(population_std(&fids))
}

/// Exact per-gate metrics from one pass over the circuit, reading reduced
/// states on each gate's support (before the gate) and on `ent_qubit`
/// (after the gate).
pub fn gsi_exact(
    circuit: &Circuit,
    ent_qubit: usize,
    sens: &SensitivityConfig,
) -> Result<Vec<GateMetrics>> {
    if circuit.is_empty() {
        return Err(Error::EmptyCircuit);
    }
    let n = circuit.num_qubits();
    let ent_qubit = ent_qubit.min(n - 1);
    let mut state = StateVector::zero(n);
    let mut metrics = Vec::with_capacity(circuit.len());

    for (position, gate) in circuit.gates().iter().enumerate() {
        let rho_prev = partial_trace(&state, &gate.qubits())?;
        let f = rho_prev.expectation(&gate.unitary())?.norm_sqr();

        state.apply(gate)?;
        let rho_ent = partial_trace(&state, &[ent_qubit])?;
        let e = von_neumann_entropy(&rho_ent)? / (rho_ent.dim() as f64).log2();

        let p = if gate.is_parameterized() {
            sensitivity_exact(&rho_prev, gate, sens)?
        } else {
            0.0
        };
        metrics.push(GateMetrics::new(position, gate.name(), f, e, p));
    }
    Ok(metrics)
}
