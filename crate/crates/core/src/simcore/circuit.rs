use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::gate::GateOp;
use crate::error::{Error, Result};

/// An ordered gate list over a fixed register. A gate's position is its index
/// in `gates`, which is the identity used by scoring and pruning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::QubitCountMismatch { expected: 1, got: 0 });
        }
        Ok(Circuit { num_qubits, gates: Vec::new() })
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<GateOp>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit made of the first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates[..len.min(self.gates.len())].to_vec(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { num_qubits: self.num_qubits, gates })
    }

    /// Adjoint circuit: gates reversed, each one inverted.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Qubits touched by at least one gate.
    pub fn active_qubits(&self) -> BTreeSet<usize> {
        self.gates.iter().flat_map(|g| g.qubits()).collect()
    }
}

pub fn dagger(circuit: &Circuit) -> Circuit {
    circuit.dagger()
}

pub fn active_qubits(circuit: &Circuit) -> BTreeSet<usize> {
    circuit.active_qubits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_gates() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(GateOp::h(2)).is_err());
        assert!(c.push(GateOp::cnot(0, 0)).is_err());
        assert!(c.is_empty());
        assert!(Circuit::new(0).is_err());
    }

    #[test]
    fn dagger_reverses_and_negates() {
        let c = Circuit::from_gates(2, vec![GateOp::h(0), GateOp::p(1, 0.3), GateOp::cnot(0, 1)])
            .unwrap();
        let d = c.dagger();
        assert_eq!(d.gates(), &[GateOp::cnot(0, 1), GateOp::p(1, -0.3), GateOp::h(0)]);
        assert_eq!(Circuit::from_gates(1, vec![GateOp::h(0)]).unwrap().dagger().gates(), &[GateOp::h(0)]);
    }

    #[test]
    fn active_qubits_examples() {
        let empty = Circuit::new(3).unwrap();
        assert!(empty.active_qubits().is_empty());
        let c = Circuit::from_gates(3, vec![GateOp::h(0), GateOp::cnot(0, 1)]).unwrap();
        assert_eq!(c.active_qubits().into_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn prefix_and_then() {
        let c = Circuit::from_gates(2, vec![GateOp::h(0), GateOp::x(1), GateOp::cnot(1, 0)]).unwrap();
        assert_eq!(c.prefix(2).len(), 2);
        assert_eq!(c.prefix(10).len(), 3);
        let joined = c.prefix(1).then(&c.prefix(2)).unwrap();
        assert_eq!(joined.len(), 3);
        assert!(c.then(&Circuit::new(3).unwrap()).is_err());
    }
}
