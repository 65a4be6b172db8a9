use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub const MIN_SAMPLES: usize = 5;

/// Feature rows with binary labels (any two distinct values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if let Some(first) = features.first() {
            let d = first.len();
            if let Some(row) = features.iter().position(|r| r.len() != d) {
                return Err(Error::ShapeMismatch(format!(
                    "row {row} has {} features, expected {d}",
                    features[row].len()
                )));
            }
        }
        Ok(Dataset { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    Train,
    Validation,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub seed: u64,
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<i8>,
    pub val_x: Vec<Vec<f64>>,
    pub val_y: Vec<i8>,
    pub test_x: Vec<Vec<f64>>,
    pub test_y: Vec<i8>,
    /// original row index of every sample, in train/val/test order
    pub indices: Vec<usize>,
}

impl DatasetSplit {
    pub fn subset(&self, which: Subset) -> (&[Vec<f64>], &[i8]) {
        match which {
            Subset::Train => (&self.train_x, &self.train_y),
            Subset::Validation => (&self.val_x, &self.val_y),
            Subset::Test => (&self.test_x, &self.test_y),
        }
    }

    /// Element-wise mean of the training features.
    pub fn train_mean(&self) -> Vec<f64> {
        let d = self.train_x.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; d];
        for row in &self.train_x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        let count = self.train_x.len().max(1) as f64;
        mean.iter_mut().for_each(|m| *m /= count);
        mean
    }
}

/// Sizes of the three parts: `floor(0.6 m)`, `round(0.2 m)`, remainder.
pub fn split_sizes(m: usize) -> (usize, usize, usize) {
    let train = 6 * m / 10;
    let val = (2 * m + 5) / 10;
    (train, val, m - train - val)
}

/// Maps two distinct label values to -1 (smaller) and +1 (larger).
pub fn binary_labels(labels: &[f64]) -> Result<Vec<i8>> {
    let mut distinct: Vec<f64> = Vec::new();
    for &y in labels {
        if !y.is_finite() {
            return Err(Error::BadLabel(y));
        }
        if !distinct.contains(&y) {
            distinct.push(y);
        }
    }
    if distinct.len() != 2 {
        return Err(Error::NonBinaryLabels(distinct.len()));
    }
    let low = distinct[0].min(distinct[1]);
    Ok(labels.iter().map(|&y| if y == low { -1 } else { 1 }).collect())
}

pub fn split_dataset(data: &Dataset, seed: u64) -> Result<DatasetSplit> {
    let m = data.len();
    if m < MIN_SAMPLES {
        return Err(Error::DatasetTooSmall { got: m, min: MIN_SAMPLES });
    }
    let y = binary_labels(&data.labels)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng::stream(seed, 1));
    let (train, val, _) = split_sizes(m);

    let take = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<i8>) {
        (idx.iter().map(|&i| data.features[i].clone()).collect(), idx.iter().map(|&i| y[i]).collect())
    };
    let (train_x, train_y) = take(&order[..train]);
    let (val_x, val_y) = take(&order[train..train + val]);
    let (test_x, test_y) = take(&order[train + val..]);
    Ok(DatasetSplit { seed, train_x, train_y, val_x, val_y, test_x, test_y, indices: order })
}
