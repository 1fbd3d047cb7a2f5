//! Experiment presets and the simulate → evaluate → compare orchestration
//! behind the CLI.

use crate::data::{self, ClientDataset, DatasetSpec};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::factsheet::{autofill_from_run, FactSheet};
use crate::metrics::compute_metrics;
use crate::model::{ArchitectureDescriptor, ModelKind, ModelParams};
use crate::scoring::{self, Format, NormalizeOptions, ReportContext, ReportTiming, TrustReport, WeightConfig};
use crate::sim::{self, EvaluationSettings, FederationConfig, RunStatistics};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub const PRESET_NAMES: [&str; 4] = ["exp1", "exp2", "exp3", "exp4"];

const PRESETS: [(&str, &str); 4] = [
    ("exp1", include_str!("../presets/exp1.toml")),
    ("exp2", include_str!("../presets/exp2.toml")),
    ("exp3", include_str!("../presets/exp3.toml")),
    ("exp4", include_str!("../presets/exp4.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSection {
    pub kind: ModelKind,
    #[serde(default)]
    pub hidden_dim: usize,
}

/// One experiment: federation, data, model, FactSheet skeleton and weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPreset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub federation: FederationConfig,
    pub dataset: DatasetSpec,
    pub model: ModelSection,
    /// Optional CSV file partitioned with `dataset` instead of synthetic data.
    /// Relative paths resolve against the config file's directory.
    #[serde(default)]
    pub data_csv: Option<PathBuf>,
    #[serde(default)]
    pub factsheet: FactSheet,
    #[serde(default)]
    pub weights: WeightConfig,
}

impl ExperimentPreset {
    pub fn builtin(name: &str) -> Result<Self> {
        let (_, text) = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::input(format!("unknown preset {name:?}; expected one of {PRESET_NAMES:?}")))?;
        Self::from_toml(text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let preset: Self = toml::from_str(text)?;
        preset.validate()?;
        Ok(preset)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut preset = Self::from_toml(&text)?;
        if let (Some(csv), Some(dir)) = (&preset.data_csv, path.parent()) {
            if csv.is_relative() {
                preset.data_csv = Some(dir.join(csv));
            }
        }
        Ok(preset)
    }

    pub fn arch(&self) -> ArchitectureDescriptor {
        let (d, k) = (self.dataset.feature_dim, self.dataset.num_classes);
        match self.model.kind {
            ModelKind::LogisticRegression => ArchitectureDescriptor::logistic(d, k),
            ModelKind::Mlp1h => ArchitectureDescriptor::mlp(d, self.model.hidden_dim, k),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.federation.validate()?;
        self.dataset.validate()?;
        self.arch().validate()?;
        self.weights.validate()
    }

    /// Reseed both the data generator and the federation.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.federation.seed = seed;
        self.dataset.seed = seed;
        self
    }

    pub fn datasets(&self) -> Result<Vec<ClientDataset>> {
        let n = self.federation.num_clients;
        match &self.data_csv {
            None => data::generate(&self.dataset, n),
            Some(path) => {
                let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
                data::load_csv(file, &self.dataset, n)
            }
        }
    }
}

/// Every file a run leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub stats: RunStatistics,
    pub model: ModelParams,
    pub factsheet: FactSheet,
    pub report: TrustReport,
}

pub const STATS_FILE: &str = "stats.json";
pub const MODEL_FILE: &str = "model.json";
pub const FACTSHEET_FILE: &str = "factsheet.json";
pub const REPORT_JSON_FILE: &str = "report.json";
pub const REPORT_TEXT_FILE: &str = "report.txt";

/// Recompute the trust report from persisted inputs.
pub fn evaluate(
    stats: &RunStatistics,
    factsheet: &FactSheet,
    model: &ModelParams,
    weights: &WeightConfig,
    settings: &EvaluationSettings,
) -> Result<TrustReport> {
    factsheet.validate()?;
    let metrics = compute_metrics(factsheet, stats, model, settings)?;
    let ctx = ReportContext {
        preset: stats.experiment.clone().unwrap_or_else(|| "custom".to_string()),
        config: stats.config.clone(),
        weights: weights.clone(),
        factsheet_digest: factsheet.digest(),
        timing: ReportTiming {
            generated_at_unix_s: stats.timing.finished_at_unix_s,
            avg_training_time_s: stats.timing.avg_training_time_s,
        },
        options: NormalizeOptions {
            model_size_literal: settings.model_size_literal,
        },
    };
    scoring::build_report(metrics, ctx)
}

pub fn simulate(preset: &ExperimentPreset, exec: Execution) -> Result<RunArtifacts> {
    preset.validate()?;
    let arch = preset.arch();
    let data = preset.datasets()?;
    log::info!(
        "simulating {}: {} clients, {} rounds",
        preset.name,
        preset.federation.num_clients,
        preset.federation.rounds
    );
    let outcome = sim::run_with(&preset.federation, &data, arch, exec)?;
    let mut stats = outcome.stats;
    stats.experiment = Some(preset.name.clone());
    let factsheet = autofill_from_run(&preset.factsheet, &preset.federation, &arch, Some(&stats));
    let report = evaluate(
        &stats,
        &factsheet,
        &outcome.model,
        &preset.weights,
        &preset.federation.evaluation,
    )?;
    Ok(RunArtifacts {
        stats,
        model: outcome.model,
        factsheet,
        report,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_report(dir: &Path, report: &TrustReport) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join(REPORT_JSON_FILE), &scoring::render(report, Format::Json))?;
    write(&dir.join(REPORT_TEXT_FILE), &scoring::render(report, Format::Text))
}

pub fn write_artifacts(dir: &Path, a: &RunArtifacts) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join(STATS_FILE), &to_json(&a.stats))?;
    write(&dir.join(MODEL_FILE), &to_json(&a.model))?;
    write(&dir.join(FACTSHEET_FILE), &a.factsheet.to_json()?)?;
    write_report(dir, &a.report)
}

/// Parse a JSON artifact, mapping any failure to an input error naming the file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn read_factsheet(path: &Path) -> Result<FactSheet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    FactSheet::from_json(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn read_report(path: &Path) -> Result<TrustReport> {
    read_json(path)
}

/// Weights from a TOML file, either under a `[weights]` table or at top level.
pub fn load_weights(path: &Path) -> Result<WeightConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let table: toml::Table = toml::from_str(&text)?;
    let weights: WeightConfig = match table.get("weights") {
        Some(w) => w.clone().try_into()?,
        None => toml::from_str(&text)?,
    };
    weights.validate()?;
    Ok(weights)
}
