use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-10;
const TRACE_TOLERANCE: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_FLOOR, 0)` are rounding noise and clamp to zero.
const EIGEN_FLOOR: f64 = 1e-9;

/// Density matrix of a `num_qubits`-qubit (sub)system. Index bit `m`
/// corresponds to the `m`-th qubit of whatever list produced the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity and unit trace. Positivity is checked lazily by
    /// [`DensityMatrix::eigenvalues`].
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} is not 2^d square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm_err = hermitian_error(&entries);
        if herm_err > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        Ok(DensityMatrix { num_qubits: dim.trailing_zeros() as usize, entries })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let entries = &v * v.adjoint();
        DensityMatrix { num_qubits: state.num_qubits(), entries }
    }

    /// One-qubit state (I + xX + yY + zZ)/2. Bloch vectors longer than one
    /// are rescaled onto the sphere.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        let r = (x * x + y * y + z * z).sqrt();
        let (x, y, z) = if r > 1.0 { (x / r, y / r, z / r) } else { (x, y, z) };
        let half = 0.5;
        let entries = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(half * (1.0 + z), 0.0),
                Complex64::new(half * x, -half * y),
                Complex64::new(half * x, half * y),
                Complex64::new(half * (1.0 - z), 0.0),
            ],
        );
        DensityMatrix { num_qubits: 1, entries }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Tr(rho * op) for an operator on the same space.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Result<Complex64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::QubitCountMismatch { expected: self.dim(), got: op.nrows() });
        }
        // Tr(AB) = sum_ij A_ij B_ji
        let mut acc = Complex64::ZERO;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.entries[(i, j)] * op[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Eigenvalues in ascending order, with rounding-level negatives clamped
    /// to zero and values above one clamped to one.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let herm_err = hermitian_error(&self.entries);
        if herm_err > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let mut eig: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.total_cmp(b));
        for l in eig.iter_mut() {
            if *l < -EIGEN_FLOOR {
                return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {l:e}")));
            }
            *l = l.clamp(0.0, 1.0);
        }
        Ok(eig)
    }
}

fn hermitian_error(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Reduced density matrix on `keep`, tracing out every other qubit. Bit `m`
/// of the reduced index is qubit `keep[m]`.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_qubits();
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut seen = 0usize;
    for &q in keep {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: n });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    let traced: Vec<usize> = (0..n).filter(|q| seen & (1 << q) == 0).collect();
    let dk = 1usize << keep.len();
    let dr = 1usize << traced.len();

    // amplitudes reshaped to (kept index, traced index)
    let mut grid = DMatrix::<Complex64>::zeros(dk, dr);
    for (i, &amp) in state.amplitudes().iter().enumerate() {
        let k = gather_bits(i, keep);
        let r = gather_bits(i, &traced);
        grid[(k, r)] = amp;
    }
    let entries = &grid * grid.adjoint();
    Ok(DensityMatrix { num_qubits: keep.len(), entries })
}

#[inline]
fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (m, &q)| acc | (((index >> q) & 1) << m))
}

/// Von Neumann entropy in bits, `-sum l log2 l` with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s: f64 = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    Ok(s.max(0.0))
}
