//! Gate Significance Index: per-gate fidelity, entanglement and sensitivity,
//! averaged into one score in `[0, 1]`.
//!
//! Two engines produce the same [`GateMetrics`] rows:
//! [`gsi_exact`] reads reduced states straight from the statevector, and
//! [`gsi_hardware`] estimates the same quantities from sampled counts only.

mod exact;
mod hardware;
mod metrics;

pub use exact::{default_ent_qubit, gsi_exact, sensitivity_exact, SensitivityConfig};
pub use hardware::{gsi_hardware, HardwareEstimatorConfig};
pub use metrics::{combine, gsi_range, population_std, read_csv, write_csv, GateMetrics};
