//! Fidelity-kernel QSVM: kernel matrices from the ZZ feature map and a
//! kernelized Pegasos solver.

mod eval;
mod kernel;
mod pegasos;

pub use eval::{evaluate, Clock, EvalResult, FakeClock, MonotonicClock};
pub use kernel::{cross_kernel, gram_matrix, kernel_entry, KernelMatrix, KernelMode};
pub use pegasos::{predict, train_pegasos, PegasosModel};
