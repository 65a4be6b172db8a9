use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use super::scan::ScanReport;
use crate::error::{Error, Result};

#[derive(Serialize)]
struct CandidateRow<'a> {
    position: usize,
    threshold: f64,
    kept_gates: usize,
    accuracy: f64,
    time_seconds: f64,
    balanced_score: f64,
    tp: usize,
    tn: usize,
    fp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    baseline_equivalent: bool,
    mask: &'a str,
}

#[derive(Serialize)]
struct RankingRow {
    position: usize,
    threshold: f64,
    kept_gates: usize,
    rank_accuracy: usize,
    rank_time: usize,
    rank_balanced: usize,
}

pub fn write_candidates_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in &report.candidates {
        let mask = c.mask.to_bit_string();
        w.serialize(CandidateRow {
            position: c.position,
            threshold: c.threshold,
            kept_gates: c.kept_gates,
            accuracy: c.validation.accuracy,
            time_seconds: c.validation.time_seconds,
            balanced_score: c.balanced_score,
            tp: c.validation.tp,
            tn: c.validation.tn,
            fp: c.validation.fp,
            fn_: c.validation.fn_,
            baseline_equivalent: c.baseline_equivalent,
            mask: &mask,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rankings_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in &report.candidates {
        w.serialize(RankingRow {
            position: c.position,
            threshold: c.threshold,
            kept_gates: c.kept_gates,
            rank_accuracy: c.rank_accuracy,
            rank_time: c.rank_time,
            rank_balanced: c.rank_balanced,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Structural checks a report must pass before it is rendered.
pub fn check_report(report: &ScanReport) -> Result<()> {
    let k = report.candidates.len();
    if k == 0 {
        return Err(Error::NoCandidates);
    }
    let is_permutation = |ranks: Vec<usize>| {
        let mut seen = vec![false; k];
        ranks.into_iter().all(|r| r >= 1 && r <= k && !std::mem::replace(&mut seen[r - 1], true))
    };
    let columns = [
        report.candidates.iter().map(|c| c.rank_accuracy).collect(),
        report.candidates.iter().map(|c| c.rank_time).collect(),
        report.candidates.iter().map(|c| c.rank_balanced).collect::<Vec<_>>(),
    ];
    if !columns.into_iter().all(is_permutation) {
        return Err(Error::InvalidConfig("rank columns are not permutations of 1..k".into()));
    }
    for c in &report.candidates {
        if c.kept_gates != c.mask.kept() {
            return Err(Error::InvalidConfig(format!(
                "candidate {} keeps {} gates but its mask keeps {}",
                c.position,
                c.kept_gates,
                c.mask.kept()
            )));
        }
    }
    let s = &report.selections;
    for p in [s.best_accuracy, s.best_time, s.best_balanced] {
        if report.candidate(p).is_none() {
            return Err(Error::InvalidConfig(format!("selection {p} is not a candidate")));
        }
    }
    Ok(())
}

/// Plain-text table: baseline row first (ranks shown as `--`), then one row
/// per candidate with `R_A-R_T-R_B`.
pub fn render_table(report: &ScanReport) -> Result<String> {
    check_report(report)?;
    let mut s = String::new();
    let b = &report.baseline;
    let _ = writeln!(s, "feature map {}  split {:?}", report.feature_map.label(), report.split_sizes);
    let _ = writeln!(s, "{:>8}  {:>6}  {:>8}  {:>10}  {:>8}", "GSI", "#gates", "acc", "time[s]", "R_ATB");
    let _ = writeln!(
        s,
        "{:>8.3}  {:>6}  {:>8.3}  {:>10.3}  {:>8}",
        b.threshold, b.kept_gates, b.validation.accuracy, b.validation.time_seconds, "--"
    );
    for c in &report.candidates {
        let ranks = format!("{}-{}-{}", c.rank_accuracy, c.rank_time, c.rank_balanced);
        let _ = writeln!(
            s,
            "{:>8.3}  {:>6}  {:>8.3}  {:>10.3}  {:>8}{}",
            c.threshold,
            c.kept_gates,
            c.validation.accuracy,
            c.validation.time_seconds,
            ranks,
            if c.baseline_equivalent { "  (baseline)" } else { "" }
        );
    }
    if let Some(t) = report.stopped_at {
        let _ = writeln!(s, "stopped at GSI {t:.3}: a qubit would be left without gates");
    }
    let t = &report.test_results;
    let _ = writeln!(s, "test accuracy: baseline {:.3}", t.baseline.accuracy);
    for (name, pos, r) in [
        ("best A", report.selections.best_accuracy, &t.best_accuracy),
        ("best T", report.selections.best_time, &t.best_time),
        ("best B", report.selections.best_balanced, &t.best_balanced),
    ] {
        let gates = report.candidate(pos).map_or(0, |c| c.kept_gates);
        let _ = writeln!(s, "  {name}: {gates} gates, acc {:.3}, time {:.3}s", r.accuracy, r.time_seconds);
    }
    Ok(s)
}
