//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gateprune_cli::config::RunConfig;
use gateprune_cli::ingest::{ingest_csv, LabelColumn};
use gateprune_cli::cmd_scan;
use gateprune_core::featuremap::{active_qubits, build_zz_map, prune, CircuitTemplate, Entanglement, FeatureMapSpec, KeepMask};
use gateprune_core::gsi::{
    combine, default_ent_qubit, gsi_exact, gsi_hardware, sensitivity_exact, GateMetrics, HardwareEstimatorConfig,
    SensitivityConfig,
};
use gateprune_core::pipeline::{
    balanced_score, bench_scalability, generate_candidate, rank_candidates, scan_with_metrics, split_dataset,
    threshold_grid, BenchConfig, CandidateEvaluator, CandidateModel, CandidateOutcome, DatasetSplit, GsiEngine,
    QsvmEvaluator, ScanConfig, Subset, TimeRule,
};
use gateprune_core::qml::{EvalResult, KernelMode, MonotonicClock};
use gateprune_core::simcore::{partial_trace, von_neumann_entropy, Circuit, DensityMatrix, GateOp, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let spent = start.elapsed();
    if spent > limit {
        Err(format!("took {spent:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{spent:.2?}"))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn metric_row_ok(m: &GateMetrics) -> bool {
    [m.f, m.e, m.p, m.gsi].iter().all(|v| (0.0..=1.0).contains(v)) && m.gsi == combine(m.f, m.e, m.p)
}

fn gsi_bounds() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rows = 0usize;
    for k in 0..1000 {
        let n = rng.random_range(2..=8);
        let ent = if rng.random_bool(0.5) { Entanglement::Linear } else { Entanglement::Full };
        let reps = rng.random_range(1..=3);
        let spec = FeatureMapSpec::new(n, ent, reps).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let bound = build_zz_map(&spec, &x).unwrap();
        let exact = gsi_exact(&bound.circuit, default_ent_qubit(n), &SensitivityConfig::default()).unwrap();
        rows += exact.len();
        if let Some(bad) = exact.iter().find(|m| !metric_row_ok(m)) {
            return Err(format!("exact engine, circuit {k}: {bad:?}"));
        }
        if k % 50 == 0 {
            let hw = gsi_hardware(&bound.circuit, &HardwareEstimatorConfig::new(256, k as u64)).unwrap();
            rows += hw.len();
            if let Some(bad) = hw.iter().find(|m| !metric_row_ok(m)) {
                return Err(format!("hardware engine, circuit {k}: {bad:?}"));
            }
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("1000 circuits, {rows} rows in range, {t}"))
}

fn estimator_consistency() -> Result<String, String> {
    let start = Instant::now();
    let spec = FeatureMapSpec::new(4, Entanglement::Linear, 1).unwrap();
    let bound = build_zz_map(&spec, &[0.21, 0.64, 0.47, 0.83]).unwrap();
    check(bound.len() == 17, || format!("{} gates", bound.len()))?;
    let exact = gsi_exact(&bound.circuit, default_ent_qubit(4), &SensitivityConfig::default()).unwrap();
    let hw = gsi_hardware(&bound.circuit, &HardwareEstimatorConfig::new(1_000_000, 2024)).unwrap();
    let mut worst = [0.0f64; 3];
    for (a, b) in exact.iter().zip(&hw) {
        for (w, d) in worst.iter_mut().zip([(a.f - b.f).abs(), (a.e - b.e).abs(), (a.p - b.p).abs()]) {
            *w = w.max(d);
        }
    }
    check(worst.iter().all(|&w| w <= 5e-3), || format!("max |diff| F/E/P = {worst:?}"))?;
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("max |diff| F {:.1e} E {:.1e} P {:.1e}, {t}", worst[0], worst[1], worst[2]))
}

fn analytic_spot_checks() -> Result<String, String> {
    let c = Circuit::from_gates(2, vec![GateOp::h(0), GateOp::cnot(0, 1)]).unwrap();
    let m = gsi_exact(&c, 1, &SensitivityConfig::default()).unwrap();
    check((m[0].f - 0.5).abs() <= 1e-12, || format!("first H fidelity {}", m[0].f))?;

    let mut bell = StateVector::zero(2);
    bell.apply_circuit(&c).unwrap();
    let s = von_neumann_entropy(&partial_trace(&bell, &[0]).unwrap()).unwrap();
    check((s - 1.0).abs() <= 1e-10, || format!("Bell entropy {s}"))?;

    let mut plus = StateVector::zero(1);
    plus.apply(&GateOp::h(0)).unwrap();
    let p = sensitivity_exact(&DensityMatrix::from_pure(&plus), &GateOp::p(0, 0.7), &SensitivityConfig::default())
        .unwrap();
    // overlaps are 1, cos^2(d/2), cos^2(d/2); their population std
    let half: f64 = 0.05;
    let closed = 2f64.sqrt() / 3.0 * half.sin().powi(2);
    check((p - closed).abs() <= 1e-6, || format!("sensitivity {p} vs {closed}"))?;
    Ok(format!("F=0.5, S=1, P={p:.4e} (closed form {closed:.4e})"))
}

fn gate_census() -> Result<String, String> {
    let nine = FeatureMapSpec::new(9, Entanglement::Linear, 1).unwrap();
    let bound = build_zz_map(&nine, &[0.5; 9]).unwrap();
    check(bound.len() == 42, || format!("9-feature map has {} gates", bound.len()))?;
    let mut bits = vec![true; 42];
    for b in bits.iter_mut().skip(9).take(10) {
        *b = false;
    }
    let pruned = prune(&bound, &KeepMask::from_bools(bits)).unwrap();
    check(pruned.len() == 32, || format!("pruned to {}", pruned.len()))?;
    let counts: Vec<usize> = BenchConfig::ALL.iter().map(|c| c.spec(10).unwrap().gate_count()).collect();
    check(counts == [47, 141, 155], || format!("S1/S2/S3 at n=10: {counts:?}"))?;
    Ok("42 -> 32 after a 10-gate mask; S1/S2/S3 = 47/141/155".into())
}

/// Fixed (accuracy, time) per kept-gate count.
struct PublishedRows(Vec<(usize, f64, f64)>);

impl CandidateEvaluator for PublishedRows {
    fn evaluate(&self, t: &CircuitTemplate, _: &DatasetSplit, _: Subset) -> gateprune_core::Result<EvalResult> {
        let g = t.gate_count();
        let &(_, accuracy, time_seconds) = self.0.iter().find(|r| r.0 == g).expect("row for gate count");
        Ok(EvalResult { accuracy, time_seconds, tp: 0, tn: 0, fp: 0, fn_: 0 })
    }
}

fn pipeline_vs_table() -> Result<String, String> {
    // 9-feature map: P gates score 0.518, four H gates 0.538, one H gate
    // 0.558, the rest 0.59
    let spec = FeatureMapSpec::new(9, Entanglement::Linear, 1).unwrap();
    let mut values = vec![0.59; 42];
    for v in &mut values[9..18] {
        *v = 0.518;
    }
    for v in &mut values[0..4] {
        *v = 0.538;
    }
    values[4] = 0.558;
    let metrics: Vec<GateMetrics> = values
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let mut m = GateMetrics::new(i, "h", 0.0, 0.0, 0.0);
            m.gsi = g;
            m
        })
        .collect();
    let grid = threshold_grid(0.518, 0.59, 0.02).unwrap();
    let want = [0.518, 0.538, 0.558, 0.578];
    check(grid.len() == 4 && grid.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9), || format!("grid {grid:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let features = (0..20).map(|_| (0..9).map(|_| rng.random()).collect()).collect();
    let labels = (0..20).map(|i| (i % 2) as f64).collect();
    let split = split_dataset(&gateprune_core::pipeline::Dataset::new(features, labels).unwrap(), 0).unwrap();
    let rows = PublishedRows(vec![(42, 0.792, 187.0), (33, 0.785, 144.0), (29, 0.892, 116.0), (28, 0.628, 103.0)]);
    let report = scan_with_metrics(&split, &ScanConfig::default(), spec, vec![0.5; 9], metrics, &rows)
        .map_err(|e| e.to_string())?;
    let got: Vec<(usize, String)> = report
        .candidates
        .iter()
        .map(|c| (c.kept_gates, format!("{}-{}-{}", c.rank_accuracy, c.rank_time, c.rank_balanced)))
        .collect();
    let expected: Vec<(usize, String)> =
        [(33, "2-2-3"), (29, "1-1-1"), (28, "3-3-2")].iter().map(|&(g, r)| (g, r.to_string())).collect();
    check(got == expected, || format!("scan ranks {got:?}"))?;

    let mut direct: Vec<CandidateModel> = report.candidates.clone();
    rank_candidates(&mut direct, 0.792, 187.0, 0.15, TimeRule::RelativeDrop).map_err(|e| e.to_string())?;
    check(direct == report.candidates, || "direct ranking differs from the scan".into())?;
    Ok(format!("BreastW ranks {}", got.iter().map(|g| g.1.as_str()).collect::<Vec<_>>().join(" / ")))
}

fn stop_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut emitted = 0;
    for k in 0..200 {
        let n = rng.random_range(2..=6);
        let ent = if rng.random_bool(0.5) { Entanglement::Linear } else { Entanglement::Full };
        let spec = FeatureMapSpec::new(n, ent, rng.random_range(1..=2)).unwrap();
        let bound = build_zz_map(&spec, &vec![0.4; n]).unwrap();
        let victim = rng.random_range(0..n);
        let t_star: f64 = rng.random_range(0.3..0.9);
        let values: Vec<f64> = bound
            .circuit
            .gates()
            .iter()
            .map(|g| if g.qubits().contains(&victim) { rng.random_range(0.0..t_star) } else { rng.random_range(0.0..1.0) })
            .collect();
        let metrics: Vec<GateMetrics> = values
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let mut m = GateMetrics::new(i, "x", 0.0, 0.0, 0.0);
                m.gsi = g;
                m
            })
            .collect();
        let at_star = generate_candidate(&bound, &metrics, t_star).map_err(|e| e.to_string())?;
        check(at_star == CandidateOutcome::Stop, || format!("instance {k}: no STOP at t* = {t_star}"))?;

        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        for t in threshold_grid(lo, t_star, 0.03).unwrap() {
            if let CandidateOutcome::Keep(mask) = generate_candidate(&bound, &metrics, t).unwrap() {
                let pruned = prune(&bound, &mask).unwrap();
                let active = active_qubits(&pruned.circuit);
                check(active == (0..n).collect::<BTreeSet<_>>(), || format!("instance {k}: idle qubit at {t}"))?;
                emitted += 1;
            }
        }
    }
    Ok(format!("200 instances, {emitted} emitted candidates keep every qubit"))
}

fn classifier_sanity() -> Result<String, String> {
    let start = Instant::now();
    let data = ingest_csv(&fixture("separable.csv"), &LabelColumn::Last).map_err(|e| e.to_string())?.dataset;
    let spec = FeatureMapSpec::new(data.num_features(), Entanglement::Linear, 1).unwrap();
    let template = CircuitTemplate::new(spec);
    let mut accs = Vec::new();
    for seed in 0..5u64 {
        let split = split_dataset(&data, seed).unwrap();
        let eval = QsvmEvaluator {
            kernel: KernelMode::Exact,
            c: 5000.0,
            num_steps: 500,
            seed,
            parallel: true,
            clock: std::sync::Arc::new(MonotonicClock::new()),
        };
        let r = eval.evaluate(&template, &split, Subset::Test).map_err(|e| e.to_string())?;
        accs.push(r.accuracy);
    }
    check(accs.iter().all(|&a| a >= 0.9), || format!("test accuracies {accs:?}"))?;
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("test accuracy over 5 seeds {accs:.3?}, {t}"))
}

const TIME_KEYS: [&str; 6] = ["time_seconds", "balanced_score", "rank_time", "rank_balanced", "best_time", "best_balanced"];

fn strip_time(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !TIME_KEYS.contains(&k.as_str()));
            map.values_mut().for_each(strip_time);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_time),
        _ => {}
    }
}

fn end_to_end_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg_path = dir.path().join("run.json");
    let body = serde_json::json!({
        "dataset": fixture("separable.csv"),
        "scan": {"split_seed": 11, "train_seed": 5},
        "output_dir": "first",
    });
    std::fs::write(&cfg_path, body.to_string()).unwrap();
    let first = RunConfig::load(&cfg_path).map_err(|e| e.to_string())?;
    let mut second = first.clone();
    second.output_dir = dir.path().join("second");

    let mut docs = Vec::new();
    for cfg in [&first, &second] {
        cmd_scan(cfg).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(cfg.output_dir.join("report.json")).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        strip_time(&mut v);
        docs.push(v);
    }
    check(docs[0] == docs[1], || "reports differ outside the time fields".into())?;
    let kept: Vec<u64> = docs[0]["candidates"].as_array().unwrap().iter().map(|c| c["kept_gates"].as_u64().unwrap()).collect();
    check(kept.windows(2).all(|w| w[0] >= w[1]), || format!("kept counts {kept:?}"))?;
    Ok(format!("identical modulo time fields; kept gates {kept:?}"))
}

fn balanced_metric() -> Result<String, String> {
    let b = balanced_score(0.591, 213.0, 0.845, 172.0).map_err(|e| e.to_string())?;
    check((b - 0.4465).abs() <= 5e-4, || format!("B = {b}"))?;
    Ok(format!("B = {b:.4}"))
}

fn bench_smoke() -> Result<String, String> {
    let start = Instant::now();
    let rows = bench_scalability(&[BenchConfig::S1], &[4, 6, 8, 10], &GsiEngine::Exact, 16, true, &MonotonicClock::new())
        .map_err(|e| e.to_string())?;
    let gates: Vec<usize> = rows.iter().map(|r| r.gates).collect();
    check(gates.windows(2).all(|w| w[0] < w[1]), || format!("gate counts {gates:?}"))?;
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("S1 gate counts {gates:?}, {t}"))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 10] = [
        ("GSI bounds over random circuits", gsi_bounds),
        ("hardware estimator matches exact at 1e6 shots", estimator_consistency),
        ("analytic spot checks", analytic_spot_checks),
        ("gate census", gate_census),
        ("ranking reproduces the published table", pipeline_vs_table),
        ("stop criterion", stop_criterion),
        ("classifier sanity on the separable fixture", classifier_sanity),
        ("end-to-end determinism", end_to_end_determinism),
        ("balanced metric", balanced_metric),
        ("bench smoke", bench_smoke),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
