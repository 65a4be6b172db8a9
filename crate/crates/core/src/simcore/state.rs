use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::GateOp;
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;

/// Single-qubit Pauli operators, used for measurement bases and noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i & 3]
    }
}

/// Dense pure state over `num_qubits` qubits. Qubit `q` is bit `q` of the
/// basis index (little-endian).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        amplitudes[0] = Complex64::ONE;
        StateVector { num_qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadStateLength(len));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// <self|other>
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|^2
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            GateOp::X { target } => self.apply_x(target),
            GateOp::P { target, theta } => {
                self.apply_diagonal(target, Complex64::ONE, Complex64::cis(theta))
            }
            GateOp::Rz { target, theta } => self.apply_diagonal(
                target,
                Complex64::cis(-theta / 2.0),
                Complex64::cis(theta / 2.0),
            ),
            GateOp::Cnot { control, target } => self.apply_cnot(control, target),
            GateOp::H { target } | GateOp::Rx { target, .. } => {
                let m = gate.matrix_1q().expect("single-qubit gate");
                self.apply_matrix_1q(target, &m);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                got: circuit.num_qubits(),
            });
        }
        for g in circuit.gates() {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Generic single-qubit kernel, row-major `m`.
    pub fn apply_matrix_1q(&mut self, target: usize, m: &[[Complex64; 2]; 2]) {
        let stride = 1usize << target;
        let dim = self.amplitudes.len();
        for block in (0..dim).step_by(stride << 1) {
            for i in block..block + stride {
                let j = i | stride;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub(crate) fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) {
        match pauli {
            Pauli::I => {}
            Pauli::X => self.apply_x(qubit),
            Pauli::Y => {
                let i = Complex64::I;
                self.apply_matrix_1q(qubit, &[[Complex64::ZERO, -i], [i, Complex64::ZERO]]);
            }
            Pauli::Z => self.apply_diagonal(qubit, Complex64::ONE, -Complex64::ONE),
        }
    }

    fn apply_x(&mut self, target: usize) {
        let stride = 1usize << target;
        let dim = self.amplitudes.len();
        for block in (0..dim).step_by(stride << 1) {
            for i in block..block + stride {
                self.amplitudes.swap(i, i | stride);
            }
        }
    }

    fn apply_diagonal(&mut self, target: usize, d0: Complex64, d1: Complex64) {
        let mask = 1usize << target;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & mask == 0 { d0 } else { d1 };
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }

    /// Exact single-qubit Pauli expectation value.
    pub fn pauli_expectation(&self, qubit: usize, pauli: Pauli) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { index: qubit, num_qubits: self.num_qubits });
        }
        let stride = 1usize << qubit;
        let mut acc = Complex64::ZERO;
        let mut z = 0.0;
        for block in (0..self.dim()).step_by(stride << 1) {
            for i in block..block + stride {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | stride];
                acc += a.conj() * b;
                z += a.norm_sqr() - b.norm_sqr();
            }
        }
        Ok(match pauli {
            Pauli::I => self.norm_sqr(),
            Pauli::X => 2.0 * acc.re,
            Pauli::Y => 2.0 * acc.im,
            Pauli::Z => z,
        })
    }
}

/// Returns `U|psi>` without touching the input.
pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Runs `circuit` from `init`, or from |0...0> when `init` is `None`.
pub fn run_statevector(circuit: &Circuit, init: Option<&StateVector>) -> Result<StateVector> {
    let mut state = match init {
        Some(s) => s.clone(),
        None => StateVector::zero(circuit.num_qubits()),
    };
    state.apply_circuit(circuit)?;
    Ok(state)
}
