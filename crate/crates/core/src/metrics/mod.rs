//! Raw metric values over the fixed taxonomy.
//!
//! Server-side computations here consume only the FactSheet, the run
//! configuration, hashed distributions, scalar client reports and model
//! parameters. Anything that touches raw samples (`permutation_importance`,
//! `clever_summary`, `group_f1`) runs on the client inside the simulator.

mod explainability;
mod fairness;
mod privacy;
mod robustness;
mod taxonomy;

pub use explainability::{
    metric_algorithmic_transparency, metric_feature_importance, metric_model_size, permutation_importance,
    TRANSPARENCY,
};
pub use fairness::{
    coefficient_of_variation, group_f1, macro_f1, metric_accuracy_variation, metric_class_imbalance,
    metric_discrimination_index, metric_participation_variation,
};
pub use privacy::{metric_differential_privacy, metric_entropy, metric_global_privacy_risk};
pub use robustness::{
    clever_bound, clever_summary, merge_clever, metric_certified_robustness, metric_federation_scale,
    metric_performance, metric_personalization, sample_in_ball,
};
pub use taxonomy::{MetricId, Notion, Phase, Pillar, Producer, TAXONOMY};

use crate::error::{Error, Result};
use crate::factsheet::{evaluate_completeness, FactSheet};
use crate::model::ModelParams;
use crate::sim::{EvaluationSettings, FederationConfig, RunStatistics, Selector};
use serde::{Deserialize, Serialize};

/// A metric's raw output before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Flag(bool),
    Count(u64),
    Real(f64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub id: MetricId,
    pub pillar: Pillar,
    pub notion: Notion,
    pub raw: Option<RawValue>,
    /// Filled by the scoring stage.
    pub normalized: Option<f64>,
    pub phase: Phase,
    pub producer: Producer,
    pub available: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MetricValue {
    pub fn new(id: MetricId, raw: RawValue) -> Self {
        let (pillar, notion) = id.location();
        let (phase, producer) = id.schedule();
        Self {
            id,
            pillar,
            notion,
            raw: Some(raw),
            normalized: None,
            phase,
            producer,
            available: true,
            note: None,
        }
    }

    pub fn unavailable(id: MetricId, reason: impl Into<String>) -> Self {
        let (pillar, notion) = id.location();
        let (phase, producer) = id.schedule();
        Self {
            id,
            pillar,
            notion,
            raw: None,
            normalized: None,
            phase,
            producer,
            available: false,
            note: Some(reason.into()),
        }
    }

    fn from_result(id: MetricId, r: Result<RawValue>) -> Self {
        match r {
            Ok(raw) => Self::new(id, raw),
            Err(Error::MetricUnavailable { reason, .. }) => Self::unavailable(id, reason),
            Err(e) => Self::unavailable(id, e.to_string()),
        }
    }
}

/// Non-random selection scheme in use. Absent configuration counts as random.
pub fn metric_client_selector(selector: Option<Selector>) -> bool {
    selector.is_some_and(|s| !s.is_random())
}

pub fn metric_aggregation_algorithm(config: &FederationConfig) -> String {
    config.aggregator.algorithm_name().to_string()
}

/// Compute every metric in taxonomy order.
pub fn compute_metrics(
    fs: &FactSheet,
    stats: &RunStatistics,
    model: &ModelParams,
    settings: &EvaluationSettings,
) -> Result<Vec<MetricValue>> {
    if model.arch != stats.arch {
        return Err(Error::input("model architecture does not match the run statistics"));
    }
    let config = &stats.config;
    let counts: Vec<u64> = stats.client_ids.iter().map(|id| stats.selection_count.get(id).copied().unwrap_or(0)).collect();
    let completeness = evaluate_completeness(fs);
    let real = |r: Result<f64>| r.map(RawValue::Real);

    let values = MetricId::all()
        .map(|id| {
            let r: Result<RawValue> = match id {
                MetricId::DifferentialPrivacy => Ok(RawValue::Flag(metric_differential_privacy(fs))),
                MetricId::Entropy => real(metric_entropy(&counts)),
                MetricId::GlobalPrivacyRisk => Ok(RawValue::Real(metric_global_privacy_risk(
                    config.dp.map(|d| d.epsilon),
                    config.num_clients,
                ))),
                MetricId::CertifiedRobustness => real(merge_clever(stats.clients.iter().filter_map(|c| c.clever))),
                MetricId::Performance => real(metric_performance(&stats.clients)),
                MetricId::Personalization => Ok(RawValue::Flag(metric_personalization(fs))),
                MetricId::FederationScale => Ok(RawValue::Count(metric_federation_scale(config))),
                MetricId::ParticipationVariation => real(metric_participation_variation(&counts)),
                MetricId::AccuracyVariation => {
                    let accs: Vec<f64> = stats.clients.iter().map(|c| c.test_accuracy).collect();
                    real(metric_accuracy_variation(&accs))
                }
                MetricId::DiscriminationIndex => {
                    if settings.enable_discrimination_index {
                        let groups: Vec<_> = stats.clients.iter().filter_map(|c| c.group_f1).collect();
                        real(metric_discrimination_index(&groups))
                    } else {
                        Err(Error::unavailable(id.name(), "disabled"))
                    }
                }
                MetricId::ClassImbalance => {
                    real(metric_class_imbalance(&stats.class_distribution, stats.arch.num_classes))
                }
                MetricId::AlgorithmicTransparency => {
                    real(metric_algorithmic_transparency(model.arch.family_name()))
                }
                MetricId::ModelSize => Ok(RawValue::Count(metric_model_size(&model.arch))),
                MetricId::FeatureImportance => {
                    let vectors: Vec<Vec<f64>> = stats.clients.iter().map(|c| c.feature_importance.clone()).collect();
                    real(metric_feature_importance(&vectors))
                }
                MetricId::Project => Ok(RawValue::Flag(completeness.project)),
                MetricId::Participants => Ok(RawValue::Flag(completeness.participants)),
                MetricId::Data => Ok(RawValue::Flag(completeness.data)),
                MetricId::Configuration => Ok(RawValue::Flag(completeness.configuration)),
                MetricId::System => Ok(RawValue::Flag(completeness.system)),
                MetricId::ClientSelector => Ok(RawValue::Flag(metric_client_selector(Some(config.selector)))),
                MetricId::AggregationAlgorithm => Ok(RawValue::Name(metric_aggregation_algorithm(config))),
            };
            MetricValue::from_result(id, r)
        })
        .collect();
    Ok(values)
}
