use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::kernel::KernelMatrix;
use crate::error::{Error, Result};
use crate::rng;

/// Kernelized Pegasos state: integer support counts per training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PegasosModel {
    pub alphas: Vec<u32>,
    pub labels: Vec<i8>,
    pub lambda: f64,
    pub num_steps: usize,
}

pub(crate) fn check_labels(labels: &[i8]) -> Result<()> {
    match labels.iter().find(|&&y| y != 1 && y != -1) {
        Some(&bad) => Err(Error::BadLabel(bad as f64)),
        None => Ok(()),
    }
}

/// Trains with `lambda = 1 / (C m)`. At step `t` a uniform index `i` is drawn
/// and `alpha_i` grows by one whenever
/// `y_i * (1 / (lambda t)) * sum_j alpha_j y_j K[j][i] < 1`.
pub fn train_pegasos(
    kernel: &KernelMatrix,
    labels: &[i8],
    c: f64,
    num_steps: usize,
    seed: u64,
) -> Result<PegasosModel> {
    let m = labels.len();
    if m == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    check_labels(labels)?;
    if kernel.rows() != m || kernel.cols() != m {
        return Err(Error::ShapeMismatch(format!(
            "training kernel is {}x{}, expected {m}x{m}",
            kernel.rows(),
            kernel.cols()
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidConfig(format!("C must be positive, got {c}")));
    }
    let lambda = 1.0 / (c * m as f64);
    let mut alphas = vec![0u32; m];
    let mut rng = rng::stream(seed, 0);
    for t in 1..=num_steps {
        let i = rng.random_range(0..m);
        let sum: f64 = (0..m)
            .filter(|&j| alphas[j] > 0)
            .map(|j| alphas[j] as f64 * labels[j] as f64 * kernel.get(j, i))
            .sum();
        let decision = sum / (lambda * t as f64);
        if labels[i] as f64 * decision < 1.0 {
            alphas[i] += 1;
        }
    }
    Ok(PegasosModel { alphas, labels: labels.to_vec(), lambda, num_steps })
}

impl PegasosModel {
    /// Raw decision values `sum_j alpha_j y_j K[j][e]` per evaluation column.
    pub fn decision_function(&self, kernel: &KernelMatrix) -> Result<Vec<f64>> {
        if kernel.rows() != self.alphas.len() {
            return Err(Error::ShapeMismatch(format!(
                "evaluation kernel has {} rows, model has {} training samples",
                kernel.rows(),
                self.alphas.len()
            )));
        }
        Ok((0..kernel.cols())
            .map(|e| {
                self.alphas
                    .iter()
                    .zip(&self.labels)
                    .enumerate()
                    .filter(|(_, (&a, _))| a > 0)
                    .map(|(j, (&a, &y))| a as f64 * y as f64 * kernel.get(j, e))
                    .sum()
            })
            .collect())
    }
}

/// Signs of the decision values; a zero decision maps to +1.
pub fn predict(model: &PegasosModel, kernel: &KernelMatrix) -> Result<Vec<i8>> {
    Ok(model
        .decision_function(kernel)?
        .into_iter()
        .map(|d| if d < 0.0 { -1 } else { 1 })
        .collect())
}
