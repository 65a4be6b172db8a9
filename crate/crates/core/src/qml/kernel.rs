use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featuremap::CircuitTemplate;
use crate::rng::derive_seed;
use crate::simcore::{run_statevector, sample_counts, Circuit, NoiseSpec, StateVector};

/// How kernel entries are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelMode {
    /// `|<psi(x1)|psi(x2)>|^2` from statevectors
    Exact,
    /// all-zero frequency of `Phi(x1)^dagger Phi(x2)` over `shots` samples
    Shots {
        shots: u64,
        #[serde(default)]
        noise: Option<NoiseSpec>,
        seed: u64,
    },
}

/// Kernel values, rows indexed by the first point set (training points) and
/// columns by the second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl KernelMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        KernelMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    /// Smallest eigenvalue of a square kernel.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        Ok(m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min))
    }
}

fn overlap_probability(c1: &Circuit, c2: &Circuit, shots: u64, noise: Option<&NoiseSpec>, seed: u64) -> Result<f64> {
    let v = c2.then(&c1.dagger())?;
    Ok(sample_counts(&v, shots, noise, seed)?.p_all_zero())
}

fn check_dims(template: &CircuitTemplate, x: &[f64]) -> Result<()> {
    let expected = template.spec.num_features;
    if x.len() != expected {
        return Err(Error::FeatureDimension { expected, got: x.len() });
    }
    Ok(())
}

/// One kernel value between two feature vectors.
pub fn kernel_entry(template: &CircuitTemplate, x1: &[f64], x2: &[f64], mode: &KernelMode) -> Result<f64> {
    check_dims(template, x1)?;
    check_dims(template, x2)?;
    let c1 = template.bind(x1)?;
    let c2 = template.bind(x2)?;
    match *mode {
        KernelMode::Exact => run_statevector(&c1, None)?.fidelity(&run_statevector(&c2, None)?),
        KernelMode::Shots { shots, noise, seed } => overlap_probability(&c1, &c2, shots, noise.as_ref(), seed),
    }
}

fn pair_seed(seed: u64, i: usize, j: usize) -> u64 {
    derive_seed(seed, ((i as u64) << 32) ^ j as u64)
}

fn maybe_par<T: Send, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

fn bind_all(template: &CircuitTemplate, xs: &[Vec<f64>], parallel: bool) -> Result<Vec<Circuit>> {
    for x in xs {
        check_dims(template, x)?;
    }
    maybe_par(xs.len(), parallel, |i| template.bind(&xs[i])).into_iter().collect()
}

fn simulate_all(circuits: &[Circuit], parallel: bool) -> Result<Vec<StateVector>> {
    maybe_par(circuits.len(), parallel, |i| {
        let mut s = StateVector::zero(circuits[i].num_qubits());
        s.apply_circuit(&circuits[i])?;
        Ok(s)
    })
    .into_iter()
    .collect()
}

/// Symmetric Gram matrix over one point set.
pub fn gram_matrix(
    template: &CircuitTemplate,
    xs: &[Vec<f64>],
    mode: &KernelMode,
    parallel: bool,
) -> Result<KernelMatrix> {
    let m = xs.len();
    let circuits = bind_all(template, xs, parallel)?;
    let upper: Vec<Vec<f64>> = match *mode {
        KernelMode::Exact => {
            let states = simulate_all(&circuits, parallel)?;
            maybe_par(m, parallel, |i| {
                (i..m).map(|j| states[i].fidelity(&states[j])).collect::<Result<Vec<_>>>()
            })
            .into_iter()
            .collect::<Result<_>>()?
        }
        KernelMode::Shots { shots, noise, seed } => maybe_par(m, parallel, |i| {
            (i..m)
                .map(|j| overlap_probability(&circuits[i], &circuits[j], shots, noise.as_ref(), pair_seed(seed, i, j)))
                .collect::<Result<Vec<_>>>()
        })
        .into_iter()
        .collect::<Result<_>>()?,
    };
    Ok(KernelMatrix::from_fn(m, m, |i, j| {
        if j >= i {
            upper[i][j - i]
        } else {
            upper[j][i - j]
        }
    }))
}

/// Rectangular kernel: rows are `train`, columns are `eval`.
pub fn cross_kernel(
    template: &CircuitTemplate,
    train: &[Vec<f64>],
    eval: &[Vec<f64>],
    mode: &KernelMode,
    parallel: bool,
) -> Result<KernelMatrix> {
    let train_c = bind_all(template, train, parallel)?;
    let eval_c = bind_all(template, eval, parallel)?;
    let rows: Vec<Vec<f64>> = match *mode {
        KernelMode::Exact => {
            let a = simulate_all(&train_c, parallel)?;
            let b = simulate_all(&eval_c, parallel)?;
            maybe_par(a.len(), parallel, |i| {
                b.iter().map(|s| a[i].fidelity(s)).collect::<Result<Vec<_>>>()
            })
            .into_iter()
            .collect::<Result<_>>()?
        }
        KernelMode::Shots { shots, noise, seed } => {
            // separate stream family from the Gram matrix
            let seed = derive_seed(seed, 0xC0FFEE);
            maybe_par(train_c.len(), parallel, |i| {
                eval_c
                    .iter()
                    .enumerate()
                    .map(|(j, c)| overlap_probability(&train_c[i], c, shots, noise.as_ref(), pair_seed(seed, i, j)))
                    .collect::<Result<Vec<_>>>()
            })
            .into_iter()
            .collect::<Result<_>>()?
        }
    };
    Ok(KernelMatrix::from_fn(train.len(), eval.len(), |i, j| rows[i][j]))
}
