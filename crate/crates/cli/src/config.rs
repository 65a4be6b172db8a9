use std::path::{Path, PathBuf};

use gateprune_core::pipeline::{BenchConfig, GsiEngine, ScanConfig, DEFAULT_QUBIT_CAP};
use serde::{Deserialize, Serialize};

use crate::ingest::LabelColumn;
use crate::Failure;

pub const DEFAULT_SHOTS: u64 = 8192;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSettings {
    pub configs: Vec<BenchConfig>,
    pub qubits: Vec<usize>,
    pub qubit_cap: usize,
}

impl Default for BenchSettings {
    fn default() -> Self {
        BenchSettings { configs: BenchConfig::ALL.to_vec(), qubits: vec![4, 6, 8, 10], qubit_cap: DEFAULT_QUBIT_CAP }
    }
}

/// Contents of the JSON run file. Relative paths resolve against the file's
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub label_column: LabelColumn,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub bench: BenchSettings,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub engine: Option<String>,
    pub shots: Option<u64>,
    pub step: Option<f64>,
    pub serial: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(d) = cfg.dataset.take() {
            cfg.dataset = Some(base.join(d));
        }
        cfg.output_dir = base.join(&cfg.output_dir);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), Failure> {
        if let Some(seed) = o.seed {
            self.scan.split_seed = seed;
            self.scan.train_seed = seed;
            if let GsiEngine::Hardware { seed: s, .. } = &mut self.scan.engine {
                *s = seed;
            }
        }
        match o.engine.as_deref() {
            None => {}
            Some("exact") => self.scan.engine = GsiEngine::Exact,
            Some("hardware") => {
                if let GsiEngine::Exact = self.scan.engine {
                    self.scan.engine =
                        GsiEngine::Hardware { shots: DEFAULT_SHOTS, noise: None, seed: self.scan.split_seed };
                }
            }
            Some(other) => return Err(Failure::Usage(format!("unknown engine {other:?}, expected exact or hardware"))),
        }
        if let Some(n) = o.shots {
            match &mut self.scan.engine {
                GsiEngine::Hardware { shots, .. } => *shots = n,
                GsiEngine::Exact => return Err(Failure::Usage("--shots needs the hardware engine".into())),
            }
        }
        if let Some(step) = o.step {
            self.scan.step = step;
        }
        if o.serial {
            self.scan.parallel = false;
        }
        if let Some(out) = &o.out {
            self.output_dir = out.clone();
        }
        self.scan.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(())
    }

    pub fn dataset_path(&self) -> Result<&Path, Failure> {
        let p = self.dataset.as_deref().ok_or_else(|| Failure::Usage("config has no dataset".into()))?;
        if !p.is_file() {
            return Err(Failure::Data(format!("dataset {} does not exist", p.display())));
        }
        Ok(p)
    }
}
