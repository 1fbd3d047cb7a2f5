use super::config::FederationConfig;
use crate::data::ClassDistribution;
use crate::model::ArchitectureDescriptor;
use crate::seed::ClientId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const STATS_SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientRoundRecord {
    pub client: ClientId,
    pub train_samples: usize,
    /// Local model on local test data, before any privacy noise.
    pub test_loss: f64,
    pub test_accuracy: f64,
    pub upload_bytes: u64,
    pub download_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub selected: Vec<ClientId>,
    pub clients: Vec<ClientRoundRecord>,
    #[serde(default)]
    pub attacked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CleverSummary {
    pub mean_score: f64,
    pub evaluated: usize,
}

/// Macro-F1 of the global model on one client's protected and unprotected
/// test samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupF1 {
    pub protected_f1: f64,
    pub unprotected_f1: f64,
    pub test_samples: usize,
}

impl GroupF1 {
    pub fn discrimination_index(&self) -> f64 {
        self.protected_f1 - self.unprotected_f1
    }
}

/// What each client reports after training, computed with the final global
/// model on its own test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientEvaluation {
    pub client: ClientId,
    pub test_samples: usize,
    pub test_loss: f64,
    pub test_accuracy: f64,
    /// L1-normalized permutation importance per feature.
    pub feature_importance: Vec<f64>,
    pub clever: Option<CleverSummary>,
    pub group_f1: Option<GroupF1>,
}

/// Wall-clock fields, kept apart so the rest of the statistics are
/// reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds per local fit, aligned with `RunStatistics::rounds[t].clients`.
    pub train_time_s: Vec<Vec<f64>>,
    pub avg_training_time_s: f64,
    pub finished_at_unix_s: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStatistics {
    pub schema_version: String,
    /// Preset or config name the run was launched from, if any.
    #[serde(default)]
    pub experiment: Option<String>,
    pub config: FederationConfig,
    pub arch: ArchitectureDescriptor,
    pub client_ids: Vec<ClientId>,
    pub selection_count: BTreeMap<ClientId, u64>,
    pub class_distribution: ClassDistribution,
    pub rounds: Vec<RoundRecord>,
    pub clients: Vec<ClientEvaluation>,
    pub attack_round: Option<u32>,
    pub timing: Timing,
}

impl RunStatistics {
    pub fn total_selections(&self) -> u64 {
        self.selection_count.values().sum()
    }

    fn mean_over_records(&self, f: impl Fn(&ClientRoundRecord) -> f64) -> f64 {
        let (sum, n) = self
            .rounds
            .iter()
            .flat_map(|r| &r.clients)
            .fold((0.0, 0usize), |(s, n), c| (s + f(c), n + 1));
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    pub fn avg_upload_bytes(&self) -> f64 {
        self.mean_over_records(|c| c.upload_bytes as f64)
    }

    pub fn avg_download_bytes(&self) -> f64 {
        self.mean_over_records(|c| c.download_bytes as f64)
    }

    /// Copy with the wall-clock section cleared, for equality checks.
    pub fn without_timing(&self) -> RunStatistics {
        RunStatistics {
            timing: Timing::default(),
            ..self.clone()
        }
    }
}
