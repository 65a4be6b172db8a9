//! Dense statevector simulation: gates, circuits, reduced states, entropy,
//! and shot sampling with optional parametric noise.

mod circuit;
mod density;
mod gate;
mod sampling;
mod state;

pub use circuit::{active_qubits, dagger, Circuit};
pub use density::{partial_trace, von_neumann_entropy, DensityMatrix};
pub use gate::{gate_unitary, GateKind, GateOp};
pub use sampling::{pauli_expectation, sample_counts, Basis, MeasurementCounts, NoiseSpec};
pub use state::{apply_gate, run_statevector, Pauli, StateVector};
