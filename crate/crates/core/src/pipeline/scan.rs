use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::select::{
    generate_candidate, rank_candidates, threshold_grid, CandidateModel, CandidateOutcome, TimeRule,
};
use super::split::{split_dataset, Dataset, DatasetSplit, Subset};
use crate::error::{Error, Result};
use crate::featuremap::{build_zz_map, CircuitTemplate, Entanglement, FeatureMapSpec};
use crate::gsi::{
    default_ent_qubit, gsi_exact, gsi_hardware, gsi_range, GateMetrics, HardwareEstimatorConfig,
    SensitivityConfig,
};
use crate::qml::{
    cross_kernel, evaluate, gram_matrix, predict, train_pegasos, Clock, EvalResult, KernelMode,
    MonotonicClock,
};
use crate::simcore::{Circuit, NoiseSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GsiEngine {
    Exact,
    Hardware {
        shots: u64,
        #[serde(default)]
        noise: Option<NoiseSpec>,
        seed: u64,
    },
}

/// Which feature vector binds the map when GSI is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GsiBinding {
    #[default]
    TrainingMean,
    /// row of the training split
    TrainingSample { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    pub entanglement: Entanglement,
    pub reps: usize,
    pub engine: GsiEngine,
    pub delta: f64,
    pub binding: GsiBinding,
    pub step: f64,
    pub c: f64,
    pub num_steps: usize,
    pub split_seed: u64,
    pub train_seed: u64,
    pub kernel: KernelMode,
    pub tolerance: f64,
    pub time_rule: TimeRule,
    pub parallel: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            entanglement: Entanglement::Linear,
            reps: 1,
            engine: GsiEngine::Exact,
            delta: 0.1,
            binding: GsiBinding::TrainingMean,
            step: 0.02,
            c: 5000.0,
            num_steps: 500,
            split_seed: 42,
            train_seed: 7,
            kernel: KernelMode::Exact,
            tolerance: 0.15,
            time_rule: TimeRule::RelativeDrop,
            parallel: true,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::BadStep(self.step));
        }
        if !(0.0..=1.0).contains(&self.tolerance) {
            return Err(Error::InvalidConfig(format!("tolerance {} outside [0, 1]", self.tolerance)));
        }
        if !(self.c > 0.0) {
            return Err(Error::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        SensitivityConfig::new(self.delta)?;
        if let GsiEngine::Hardware { shots, noise, .. } = &self.engine {
            if *shots == 0 {
                return Err(Error::ZeroShots);
            }
            if let Some(n) = noise {
                n.validate()?;
            }
        }
        if let KernelMode::Shots { shots: 0, .. } = self.kernel {
            return Err(Error::ZeroShots);
        }
        Ok(())
    }

    pub fn feature_map(&self, num_features: usize) -> Result<FeatureMapSpec> {
        FeatureMapSpec::new(num_features, self.entanglement, self.reps)
    }
}

pub fn compute_gsi(circuit: &Circuit, engine: &GsiEngine, delta: f64, parallel: bool) -> Result<Vec<GateMetrics>> {
    match *engine {
        GsiEngine::Exact => {
            gsi_exact(circuit, default_ent_qubit(circuit.num_qubits()), &SensitivityConfig::new(delta)?)
        }
        GsiEngine::Hardware { shots, noise, seed } => {
            let cfg = HardwareEstimatorConfig { shots, qubit: None, delta, noise, seed, parallel };
            gsi_hardware(circuit, &cfg)
        }
    }
}

/// Scores one circuit template: trains on the training split and reports the
/// result on `on`.
pub trait CandidateEvaluator: Sync {
    fn evaluate(&self, template: &CircuitTemplate, split: &DatasetSplit, on: Subset) -> Result<EvalResult>;
}

/// Fidelity-kernel Pegasos QSVM. The reported time covers kernel
/// construction, training and prediction.
pub struct QsvmEvaluator {
    pub kernel: KernelMode,
    pub c: f64,
    pub num_steps: usize,
    pub seed: u64,
    pub parallel: bool,
    pub clock: Arc<dyn Clock>,
}

impl QsvmEvaluator {
    pub fn from_config(cfg: &ScanConfig) -> Self {
        QsvmEvaluator {
            kernel: cfg.kernel,
            c: cfg.c,
            num_steps: cfg.num_steps,
            seed: cfg.train_seed,
            parallel: cfg.parallel,
            clock: Arc::new(MonotonicClock::new()),
        }
    }
}

impl CandidateEvaluator for QsvmEvaluator {
    fn evaluate(&self, template: &CircuitTemplate, split: &DatasetSplit, on: Subset) -> Result<EvalResult> {
        let (train_x, train_y) = split.subset(Subset::Train);
        let (eval_x, eval_y) = split.subset(on);
        let start = self.clock.now_seconds();
        let k = gram_matrix(template, train_x, &self.kernel, self.parallel)?;
        let model = train_pegasos(&k, train_y, self.c, self.num_steps, self.seed)?;
        let k_eval = cross_kernel(template, train_x, eval_x, &self.kernel, self.parallel)?;
        let predicted = predict(&model, &k_eval)?;
        let elapsed = self.clock.now_seconds() - start;
        evaluate(&predicted, eval_y, elapsed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub threshold: f64,
    pub kept_gates: usize,
    pub validation: EvalResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Selections {
    /// grid positions of the rank-1 candidates
    pub best_accuracy: usize,
    pub best_time: usize,
    pub best_balanced: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResults {
    pub baseline: EvalResult,
    pub best_accuracy: EvalResult,
    pub best_time: EvalResult,
    pub best_balanced: EvalResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub feature_map: FeatureMapSpec,
    pub split_sizes: [usize; 3],
    pub gsi_binding: Vec<f64>,
    pub gsi_range: [f64; 2],
    pub thresholds: Vec<f64>,
    /// first grid threshold that tripped the stop criterion
    pub stopped_at: Option<f64>,
    pub baseline: BaselineSummary,
    pub gsi_table: Vec<GateMetrics>,
    pub candidates: Vec<CandidateModel>,
    pub selections: Selections,
    pub test_results: TestResults,
}

impl ScanReport {
    pub fn candidate(&self, position: usize) -> Option<&CandidateModel> {
        self.candidates.iter().find(|c| c.position == position)
    }
}

pub fn binding_vector(split: &DatasetSplit, binding: GsiBinding) -> Result<Vec<f64>> {
    match binding {
        GsiBinding::TrainingMean => Ok(split.train_mean()),
        GsiBinding::TrainingSample { index } => split.train_x.get(index).cloned().ok_or_else(|| {
            Error::InvalidConfig(format!(
                "binding sample {index} outside training split of {}",
                split.train_x.len()
            ))
        }),
    }
}

pub fn run_scan(data: &Dataset, cfg: &ScanConfig, evaluator: &dyn CandidateEvaluator) -> Result<ScanReport> {
    cfg.validate()?;
    let split = split_dataset(data, cfg.split_seed)?;
    let spec = cfg.feature_map(data.num_features())?;
    let x = binding_vector(&split, cfg.binding)?;
    let bound = build_zz_map(&spec, &x)?;
    let metrics = compute_gsi(&bound.circuit, &cfg.engine, cfg.delta, cfg.parallel)?;
    scan_with_metrics(&split, cfg, spec, x, metrics, evaluator)
}

/// The scan after GSI is known: grid, candidates, rankings and the final
/// test assessment.
pub fn scan_with_metrics(
    split: &DatasetSplit,
    cfg: &ScanConfig,
    spec: FeatureMapSpec,
    binding: Vec<f64>,
    metrics: Vec<GateMetrics>,
    evaluator: &dyn CandidateEvaluator,
) -> Result<ScanReport> {
    cfg.validate()?;
    let bound = build_zz_map(&spec, &binding)?;
    let (lower, upper) = gsi_range(&metrics)?;
    let thresholds = threshold_grid(lower, upper, cfg.step)?;

    let mut masks = Vec::new();
    let mut stopped_at = None;
    for (position, &t) in thresholds.iter().enumerate() {
        match generate_candidate(&bound, &metrics, t)? {
            // a threshold that reproduces an earlier mask is the same model
            CandidateOutcome::Keep(mask) if masks.iter().any(|(_, _, m)| *m == mask) => {}
            CandidateOutcome::Keep(mask) => masks.push((position, t, mask)),
            CandidateOutcome::Stop => {
                stopped_at = Some(t);
                break;
            }
        }
    }
    if thresholds.len() > 1 && masks.iter().all(|(_, _, m)| m.is_all()) && stopped_at.is_some() {
        return Err(Error::AllThresholdsStop { lower, upper });
    }

    let full = CircuitTemplate::new(spec);
    let baseline_eval = evaluator.evaluate(&full, split, Subset::Validation)?;

    let pruned: Vec<_> = masks.iter().filter(|(_, _, m)| !m.is_all()).cloned().collect();
    let mut candidates = Vec::with_capacity(pruned.len().max(1));
    if pruned.is_empty() {
        let (position, t, mask) = masks.into_iter().next().ok_or(Error::NoCandidates)?;
        candidates.push(CandidateModel::new(position, t, mask, baseline_eval));
    } else {
        for (position, t, mask) in pruned {
            let template = CircuitTemplate::with_mask(spec, mask.clone())?;
            let result = evaluator.evaluate(&template, split, Subset::Validation)?;
            candidates.push(CandidateModel::new(position, t, mask, result));
        }
    }
    rank_candidates(
        &mut candidates,
        baseline_eval.accuracy,
        baseline_eval.time_seconds,
        cfg.tolerance,
        cfg.time_rule,
    )?;

    let top = |rank: fn(&CandidateModel) -> usize| -> Result<&CandidateModel> {
        candidates.iter().find(|c| rank(c) == 1).ok_or(Error::NoCandidates)
    };
    let best_a = top(|c| c.rank_accuracy)?;
    let best_t = top(|c| c.rank_time)?;
    let best_b = top(|c| c.rank_balanced)?;
    let selections = Selections {
        best_accuracy: best_a.position,
        best_time: best_t.position,
        best_balanced: best_b.position,
    };

    let test_baseline = evaluator.evaluate(&full, split, Subset::Test)?;
    let mut cache: Vec<(usize, EvalResult)> = Vec::new();
    let mut on_test = |c: &CandidateModel| -> Result<EvalResult> {
        if let Some((_, r)) = cache.iter().find(|(p, _)| *p == c.position) {
            return Ok(*r);
        }
        let r = if c.mask.is_all() {
            test_baseline
        } else {
            evaluator.evaluate(&CircuitTemplate::with_mask(spec, c.mask.clone())?, split, Subset::Test)?
        };
        cache.push((c.position, r));
        Ok(r)
    };
    let test_results = TestResults {
        baseline: test_baseline,
        best_accuracy: on_test(best_a)?,
        best_time: on_test(best_t)?,
        best_balanced: on_test(best_b)?,
    };

    Ok(ScanReport {
        config: cfg.clone(),
        feature_map: spec,
        split_sizes: [split.train_y.len(), split.val_y.len(), split.test_y.len()],
        gsi_binding: binding,
        gsi_range: [lower, upper],
        thresholds,
        stopped_at,
        baseline: BaselineSummary { threshold: lower, kept_gates: bound.len(), validation: baseline_eval },
        gsi_table: metrics,
        candidates,
        selections,
        test_results,
    })
}

/// Kept-gate counts of the ranked candidates, in grid order.
pub fn kept_counts(report: &ScanReport) -> Vec<usize> {
    report.candidates.iter().map(|c| c.kept_gates).collect()
}
