//! Threshold scan: split the data, score gates, prune at each GSI cutoff,
//! evaluate every pruned feature map and rank the survivors.

mod bench;
mod report;
mod scan;
mod select;
mod split;

pub use bench::{bench_features, bench_scalability, write_bench_csv, BenchConfig, BenchRow, DEFAULT_QUBIT_CAP};
pub use report::{check_report, render_table, write_candidates_csv, write_rankings_csv};
pub use scan::{
    binding_vector, compute_gsi, kept_counts, run_scan, scan_with_metrics, BaselineSummary, CandidateEvaluator,
    GsiBinding, GsiEngine, QsvmEvaluator, ScanConfig, ScanReport, Selections, TestResults,
};
pub use select::{
    balanced_score, generate_candidate, rank_candidates, threshold_grid, CandidateModel, CandidateOutcome,
    TimeRule, GRID_EPS,
};
pub use split::{binary_labels, split_dataset, split_sizes, Dataset, DatasetSplit, Subset, MIN_SAMPLES};
