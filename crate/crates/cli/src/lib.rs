//! `gateprune` command-line front end. Each subcommand is a plain function so
//! tests can drive it without spawning a process.

pub mod config;
pub mod ingest;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gateprune_core::featuremap::build_zz_map;
use gateprune_core::gsi::{write_csv, GateMetrics};
use gateprune_core::pipeline::{
    bench_scalability, binding_vector, compute_gsi, render_table, run_scan, split_dataset, write_bench_csv,
    write_candidates_csv, write_rankings_csv, BenchRow, GsiBinding, GsiEngine, QsvmEvaluator, ScanReport,
};
use gateprune_core::qml::MonotonicClock;
use gateprune_core::Error;
use serde::Serialize;

use config::{Overrides, RunConfig};
use ingest::ingest_csv;

/// A command failure with its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// bad flags or configuration (exit 1)
    Usage(String),
    /// unreadable or invalid input data (exit 2)
    Data(String),
    /// a result violated an internal invariant (exit 3)
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Data(m) => write!(f, "data error: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_)
            | Error::Csv(_)
            | Error::Data(_)
            | Error::NonBinaryLabels(_)
            | Error::BadLabel(_)
            | Error::DatasetTooSmall { .. }
            | Error::FeatureDimension { .. }
            | Error::FeatureOutOfRange { .. }
            | Error::ShapeMismatch(_) => Failure::Data(msg),
            Error::InvalidConfig(_)
            | Error::BadStep(_)
            | Error::ZeroShots
            | Error::BadProbability { .. }
            | Error::InvalidFeatureMap(_)
            | Error::QubitCapExceeded { .. }
            | Error::AllThresholdsStop { .. } => Failure::Usage(msg),
            _ => Failure::Internal(msg),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(name = "gateprune", version, about = "Gate significance scoring and threshold-scan pruning of ZZ feature maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every gate of the bound feature map
    Gsi(CommonArgs),
    /// Run the full threshold scan
    Scan(CommonArgs),
    /// Time GSI over the S1/S2/S3 configurations
    Bench(CommonArgs),
    /// Print a saved scan report as a table
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = ["exact", "hardware"])]
    pub engine: Option<String>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// single-threaded execution, for clean timings
    #[arg(long)]
    pub serial: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// report.json to render; defaults to the one in the config's output directory
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn load(&self) -> CmdResult<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        cfg.apply(&Overrides {
            seed: self.seed,
            engine: self.engine.clone(),
            shots: self.shots,
            step: self.step,
            serial: self.serial,
            out: self.out.clone(),
        })?;
        Ok(cfg)
    }
}

/// Collects output files and moves them into place only once every one of
/// them has been written.
struct Staged {
    dir: PathBuf,
    files: Vec<(tempfile::NamedTempFile, PathBuf)>,
}

impl Staged {
    fn new(dir: &Path) -> CmdResult<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Usage(format!("cannot create output directory {}: {e}", dir.display())))?;
        Ok(Staged { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn add(&mut self, name: &str, write: impl FnOnce(&mut dyn Write) -> CmdResult<()>) -> CmdResult<()> {
        let io = |e: std::io::Error| Failure::Internal(format!("writing {name}: {e}"));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            write(&mut w)?;
            w.flush().map_err(io)?;
        }
        self.files.push((tmp, self.dir.join(name)));
        Ok(())
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> CmdResult<()> {
        self.add(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Failure::Internal(e.to_string()))?;
            w.write_all(b"\n").map_err(|e| Failure::Internal(e.to_string()))
        })
    }

    fn commit(self) -> CmdResult<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (tmp, dest) in self.files {
            tmp.persist(&dest).map_err(|e| Failure::Internal(format!("{}: {e}", dest.display())))?;
            written.push(dest);
        }
        Ok(written)
    }
}

#[derive(Debug, Serialize)]
struct GsiOutput<'a> {
    feature_map: String,
    num_qubits: usize,
    engine: GsiEngine,
    binding: GsiBinding,
    features: &'a [f64],
    metrics: &'a [GateMetrics],
}

/// Writes `gsi.csv` and `gsi.json`.
pub fn cmd_gsi(cfg: &RunConfig) -> CmdResult<Vec<PathBuf>> {
    let data = ingest_csv(cfg.dataset_path()?, &cfg.label_column)?;
    let split = split_dataset(&data.dataset, cfg.scan.split_seed)?;
    let spec = cfg.scan.feature_map(data.dataset.num_features())?;
    let x = binding_vector(&split, cfg.scan.binding)?;
    let bound = build_zz_map(&spec, &x)?;
    let metrics = compute_gsi(&bound.circuit, &cfg.scan.engine, cfg.scan.delta, cfg.scan.parallel)?;

    let mut out = Staged::new(&cfg.output_dir)?;
    out.add("gsi.csv", |w| Ok(write_csv(&metrics, w)?))?;
    out.add_json(
        "gsi.json",
        &GsiOutput {
            feature_map: spec.label(),
            num_qubits: spec.num_qubits(),
            engine: cfg.scan.engine,
            binding: cfg.scan.binding,
            features: &x,
            metrics: &metrics,
        },
    )?;
    out.commit()
}

/// Writes `report.json`, `gsi.csv`, `candidates.csv` and `rankings.csv`.
pub fn cmd_scan(cfg: &RunConfig) -> CmdResult<(ScanReport, Vec<PathBuf>)> {
    let data = ingest_csv(cfg.dataset_path()?, &cfg.label_column)?;
    let evaluator = QsvmEvaluator::from_config(&cfg.scan);
    let report = run_scan(&data.dataset, &cfg.scan, &evaluator)?;

    let mut out = Staged::new(&cfg.output_dir)?;
    out.add_json("report.json", &report)?;
    out.add("gsi.csv", |w| Ok(write_csv(&report.gsi_table, w)?))?;
    out.add("candidates.csv", |w| Ok(write_candidates_csv(&report, w)?))?;
    out.add("rankings.csv", |w| Ok(write_rankings_csv(&report, w)?))?;
    let files = out.commit()?;
    Ok((report, files))
}

/// Writes `bench.csv`.
pub fn cmd_bench(cfg: &RunConfig) -> CmdResult<(Vec<BenchRow>, Vec<PathBuf>)> {
    let b = &cfg.bench;
    let rows = bench_scalability(
        &b.configs,
        &b.qubits,
        &cfg.scan.engine,
        b.qubit_cap,
        cfg.scan.parallel,
        &MonotonicClock::new(),
    )?;
    let mut out = Staged::new(&cfg.output_dir)?;
    out.add("bench.csv", |w| Ok(write_bench_csv(&rows, w)?))?;
    let files = out.commit()?;
    Ok((rows, files))
}

pub fn load_report(path: &Path) -> CmdResult<ScanReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Data(format!("{} does not match the report schema: {e}", path.display())))
}

/// Renders a saved report; an empty candidate list is an integrity error.
pub fn cmd_report(path: &Path) -> CmdResult<String> {
    let report = load_report(path)?;
    render_table(&report).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn report_path(args: &ReportArgs) -> CmdResult<PathBuf> {
    if let Some(p) = &args.report {
        return Ok(p.clone());
    }
    if let Some(out) = &args.out {
        return Ok(out.join("report.json"));
    }
    match &args.config {
        Some(c) => Ok(RunConfig::load(c)?.output_dir.join("report.json")),
        None => Err(Failure::Usage("report needs a report path, --out or --config".into())),
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CmdResult<()> {
    let say = |stdout: &mut dyn Write, text: &str| {
        stdout.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))
    };
    let list = |files: &[PathBuf]| files.iter().map(|f| format!("wrote {}\n", f.display())).collect::<String>();
    match &cli.command {
        Command::Gsi(a) => {
            let files = cmd_gsi(&a.load()?)?;
            say(stdout, &list(&files))
        }
        Command::Scan(a) => {
            let (report, files) = cmd_scan(&a.load()?)?;
            let table = render_table(&report).map_err(|e| Failure::Internal(e.to_string()))?;
            say(stdout, &table)?;
            say(stdout, &list(&files))
        }
        Command::Bench(a) => {
            let (rows, files) = cmd_bench(&a.load()?)?;
            let mut text = String::new();
            for r in &rows {
                text.push_str(&format!("{:<18} n={:<3} gates={:<4} {:.4}s\n", r.config, r.num_qubits, r.gates, r.seconds));
            }
            say(stdout, &text)?;
            say(stdout, &list(&files))
        }
        Command::Report(a) => {
            let table = cmd_report(&report_path(a)?)?;
            say(stdout, &table)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "gateprune: {f}");
            f.exit_code()
        }
    }
}
