use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elapsed-time source. Tests swap in [`FakeClock`] so timings are reproducible.
pub trait Clock: Send + Sync {
    fn now_seconds(&self) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        MonotonicClock { origin: Instant::now() }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now_seconds(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Advances by a fixed tick on every read.
#[derive(Debug)]
pub struct FakeClock {
    tick: f64,
    reads: std::sync::atomic::AtomicU64,
}

impl FakeClock {
    pub fn new(tick: f64) -> Self {
        FakeClock { tick, reads: std::sync::atomic::AtomicU64::new(0) }
    }
}

impl Clock for FakeClock {
    fn now_seconds(&self) -> f64 {
        let k = self.reads.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
        k as f64 * self.tick
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub accuracy: f64,
    pub time_seconds: f64,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

/// Confusion counts with +1 as the positive class.
pub fn evaluate(predicted: &[i8], truth: &[i8], time_seconds: f64) -> Result<EvalResult> {
    if predicted.len() != truth.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} predictions for {} labels",
            predicted.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::ShapeMismatch("nothing to evaluate".into()));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p > 0, t > 0) {
            (true, true) => tp += 1,
            (false, false) => tn += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
        }
    }
    let accuracy = (tp + tn) as f64 / truth.len() as f64;
    Ok(EvalResult { accuracy, time_seconds, tp, tn, fp, fn_ })
}
