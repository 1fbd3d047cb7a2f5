//! Accountability FactSheet: data model, JSON persistence and per-section
//! completeness scoring.
//!
//! Every section keeps unknown keys in an `extra` map so documents written by
//! other tools survive a load/save cycle.

use crate::error::{Error, Result};
use crate::model::ArchitectureDescriptor;
use crate::sim::{FederationConfig, RunStatistics};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

type Extra = Map<String, Value>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProjectSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overview: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purpose: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParticipantsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub org_names: Option<Vec<String>>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DataSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preprocessing: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GlobalHyperparams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_timeout_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination_accuracy: Option<f64>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalHyperparams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<u64>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfigurationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_type: Option<String>,
    #[serde(default)]
    pub global_hyperparams: GlobalHyperparams,
    #[serde(default)]
    pub local_hyperparams: LocalHyperparams,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SystemSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_training_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_size_params: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_upload_bytes: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_download_bytes: Option<f64>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub differential_privacy: bool,
    #[serde(default)]
    pub personalization: bool,
    #[serde(default)]
    pub non_random_selector: bool,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FactSheet {
    #[serde(default)]
    pub project: ProjectSection,
    #[serde(default)]
    pub participants: ParticipantsSection,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub configuration: ConfigurationSection,
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub flags: Flags,
    #[serde(flatten)]
    pub extra: Extra,
}

/// Binary per-section completeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompletenessResult {
    pub project: bool,
    pub participants: bool,
    pub data: bool,
    pub configuration: bool,
    pub system: bool,
}

fn filled(s: &Option<String>) -> bool {
    s.as_deref().is_some_and(|t| !t.trim().is_empty())
}

impl FactSheet {
    pub fn from_json(text: &str) -> Result<Self> {
        let fs: FactSheet = serde_json::from_str(text)?;
        fs.validate()?;
        Ok(fs)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let nums = [
            ("global_hyperparams.max_timeout_s", self.configuration.global_hyperparams.max_timeout_s),
            (
                "global_hyperparams.termination_accuracy",
                self.configuration.global_hyperparams.termination_accuracy,
            ),
            ("local_hyperparams.learning_rate", self.configuration.local_hyperparams.learning_rate),
            ("system.avg_training_time_s", self.system.avg_training_time_s),
            ("system.avg_upload_bytes", self.system.avg_upload_bytes),
            ("system.avg_download_bytes", self.system.avg_download_bytes),
        ];
        for (name, v) in nums {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::input(format!("factsheet {name} must be a nonnegative number")));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON form, excluding the wall-clock
    /// training-time field so reruns with the same seed share a digest.
    pub fn digest(&self) -> String {
        let mut copy = self.clone();
        copy.system.avg_training_time_s = None;
        let bytes = serde_json::to_vec(&copy).expect("factsheet serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// A section scores 1 iff all of its listed fields are present and non-empty.
pub fn evaluate_completeness(fs: &FactSheet) -> CompletenessResult {
    let p = &fs.project;
    let project = filled(&p.overview) && filled(&p.purpose) && filled(&p.background);

    let participants = match (fs.participants.count, &fs.participants.org_names) {
        (Some(count), Some(names)) if count >= 1 => {
            names.iter().filter(|n| !n.trim().is_empty()).count() as u64 >= count
        }
        _ => false,
    };

    let data = filled(&fs.data.provenance) && filled(&fs.data.preprocessing);

    let c = &fs.configuration;
    let configuration = filled(&c.optimizer)
        && filled(&c.model_type)
        && c.global_hyperparams.rounds.is_some()
        && c.local_hyperparams.learning_rate.is_some()
        && c.local_hyperparams.epochs.is_some();

    let s = &fs.system;
    let system = s.avg_training_time_s.is_some()
        && s.model_size_params.is_some()
        && s.avg_upload_bytes.is_some()
        && s.avg_download_bytes.is_some();

    CompletenessResult {
        project,
        participants,
        data,
        configuration,
        system,
    }
}

/// Populate configuration, flags and (given a completed run) system facts.
/// Human-authored text that is already present is left alone.
pub fn autofill_from_run(
    fs: &FactSheet,
    config: &FederationConfig,
    arch: &ArchitectureDescriptor,
    stats: Option<&RunStatistics>,
) -> FactSheet {
    let mut out = fs.clone();
    let c = &mut out.configuration;
    if !filled(&c.optimizer) {
        c.optimizer = Some("SGD".to_string());
    }
    if !filled(&c.model_type) {
        c.model_type = Some(arch.family_name().to_string());
    }
    c.global_hyperparams.rounds = Some(config.rounds as u64);
    c.local_hyperparams.learning_rate = Some(config.learning_rate);
    c.local_hyperparams.epochs = Some(config.local_epochs as u64);

    out.flags.differential_privacy = config.dp.is_some();
    out.flags.personalization = config.personalization_enabled;
    out.flags.non_random_selector = !config.selector.is_random();

    if let Some(stats) = stats {
        out.system.avg_training_time_s = Some(stats.timing.avg_training_time_s);
        out.system.model_size_params = Some(arch.param_count() as u64);
        out.system.avg_upload_bytes = Some(stats.avg_upload_bytes());
        out.system.avg_download_bytes = Some(stats.avg_download_bytes());
    }
    out
}
