use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featuremap::{BoundCircuit, KeepMask};
use crate::gsi::GateMetrics;
use crate::qml::EvalResult;

/// Slack for comparing GSI values against computed grid thresholds.
pub const GRID_EPS: f64 = 1e-12;

/// Thresholds `lower, lower + step, ...` strictly below `upper`. A degenerate
/// range yields `[lower]`.
pub fn threshold_grid(lower: f64, upper: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::BadStep(step));
    }
    if !lower.is_finite() || !upper.is_finite() || lower > upper {
        return Err(Error::InvalidConfig(format!("bad GSI range [{lower}, {upper})")));
    }
    let mut grid = vec![lower];
    let mut k = 1.0;
    loop {
        let t = lower + k * step;
        if t >= upper - GRID_EPS {
            break;
        }
        grid.push(t);
        k += 1.0;
    }
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateOutcome {
    Keep(KeepMask),
    /// some qubit active in the baseline would be left without gates
    Stop,
}

/// Keeps gate `i` iff `GSI_i >= threshold` (up to [`GRID_EPS`]).
pub fn generate_candidate(
    baseline: &BoundCircuit,
    metrics: &[GateMetrics],
    threshold: f64,
) -> Result<CandidateOutcome> {
    if metrics.len() != baseline.len() {
        return Err(Error::MisalignedMetrics(format!(
            "{} metric rows for {} gates",
            metrics.len(),
            baseline.len()
        )));
    }
    if let Some((i, m)) = metrics.iter().enumerate().find(|(i, m)| m.position != *i) {
        return Err(Error::MisalignedMetrics(format!("row {i} carries position {}", m.position)));
    }
    let keep: Vec<bool> = metrics.iter().map(|m| m.gsi >= threshold - GRID_EPS).collect();

    let n = baseline.num_qubits();
    let mut before = vec![false; n];
    let mut after = vec![false; n];
    for (gate, &kept) in baseline.circuit.gates().iter().zip(&keep) {
        for q in gate.qubits() {
            before[q] = true;
            after[q] |= kept;
        }
    }
    if before.iter().zip(&after).any(|(&b, &a)| b && !a) {
        return Ok(CandidateOutcome::Stop);
    }
    Ok(CandidateOutcome::Keep(KeepMask::from_bools(keep)))
}

/// `B = (A_n - A_b) + (T_b - T_n) / T_b`.
pub fn balanced_score(a_b: f64, t_b: f64, a_n: f64, t_n: f64) -> Result<f64> {
    if !(t_b > 0.0) {
        return Err(Error::ZeroBaselineTime(t_b));
    }
    Ok((a_n - a_b) + (t_b - t_n) / t_b)
}

/// How the accuracy floor of the time ranking is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRule {
    /// `A_n >= (1 - tolerance) A_b`
    #[default]
    RelativeDrop,
    /// `A_n >= tolerance * A_b`
    Literal,
}

impl TimeRule {
    pub fn floor(self, a_b: f64, tolerance: f64) -> f64 {
        match self {
            TimeRule::RelativeDrop => (1.0 - tolerance) * a_b,
            TimeRule::Literal => tolerance * a_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateModel {
    /// index of the threshold in the grid
    pub position: usize,
    pub threshold: f64,
    pub kept_gates: usize,
    pub mask: KeepMask,
    /// the all-gates grid point, reported only when nothing else survives
    pub baseline_equivalent: bool,
    pub validation: EvalResult,
    pub balanced_score: f64,
    pub rank_accuracy: usize,
    pub rank_time: usize,
    pub rank_balanced: usize,
}

impl CandidateModel {
    pub fn new(position: usize, threshold: f64, mask: KeepMask, validation: EvalResult) -> Self {
        CandidateModel {
            position,
            threshold,
            kept_gates: mask.kept(),
            baseline_equivalent: mask.is_all(),
            mask,
            validation,
            balanced_score: 0.0,
            rank_accuracy: 0,
            rank_time: 0,
            rank_balanced: 0,
        }
    }

    fn tie_break(&self, other: &Self) -> Ordering {
        self.threshold.total_cmp(&other.threshold).then(self.position.cmp(&other.position))
    }
}

fn ranks_by(candidates: &[CandidateModel], cmp: impl Fn(&CandidateModel, &CandidateModel) -> Ordering) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| cmp(&candidates[i], &candidates[j]).then(candidates[i].tie_break(&candidates[j])));
    let mut ranks = vec![0; candidates.len()];
    for (r, i) in order.into_iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}

/// Fills `balanced_score` and the three rank columns. Candidates below the
/// accuracy floor are ranked by time after every candidate above it.
pub fn rank_candidates(
    candidates: &mut [CandidateModel],
    a_b: f64,
    t_b: f64,
    tolerance: f64,
    rule: TimeRule,
) -> Result<()> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    if !(0.0..=1.0).contains(&tolerance) {
        return Err(Error::InvalidConfig(format!("tolerance {tolerance} outside [0, 1]")));
    }
    for c in candidates.iter_mut() {
        c.balanced_score = balanced_score(a_b, t_b, c.validation.accuracy, c.validation.time_seconds)?;
    }
    let floor = rule.floor(a_b, tolerance);
    let by_acc = ranks_by(candidates, |a, b| b.validation.accuracy.total_cmp(&a.validation.accuracy));
    let by_b = ranks_by(candidates, |a, b| b.balanced_score.total_cmp(&a.balanced_score));
    let by_time = ranks_by(candidates, |a, b| {
        let fails = |c: &CandidateModel| c.validation.accuracy < floor;
        fails(a)
            .cmp(&fails(b))
            .then(a.validation.time_seconds.total_cmp(&b.validation.time_seconds))
    });
    for (i, c) in candidates.iter_mut().enumerate() {
        c.rank_accuracy = by_acc[i];
        c.rank_time = by_time[i];
        c.rank_balanced = by_b[i];
    }
    Ok(())
}
