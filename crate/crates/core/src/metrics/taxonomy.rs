//! The fixed pillar → notion → metric tree.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pillar {
    Privacy,
    Robustness,
    Fairness,
    Explainability,
    Accountability,
    Federation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    PrivacyPreserving,
    Uncertainty,
    Indistinguishability,
    ResilienceToAttacks,
    AlgorithmRobustness,
    ClientReliability,
    ClientSelection,
    Performance,
    GroupLevel,
    ClassDistribution,
    Interpretability,
    PostHoc,
    FactsheetCompleteness,
    ClientManagement,
    Optimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    DifferentialPrivacy,
    Entropy,
    GlobalPrivacyRisk,
    CertifiedRobustness,
    Performance,
    Personalization,
    FederationScale,
    ParticipationVariation,
    AccuracyVariation,
    DiscriminationIndex,
    ClassImbalance,
    AlgorithmicTransparency,
    ModelSize,
    FeatureImportance,
    Project,
    Participants,
    Data,
    Configuration,
    System,
    ClientSelector,
    AggregationAlgorithm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Pre,
    During,
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Producer {
    Server,
    Clients,
}

use MetricId as M;
use Notion as N;

pub type NotionBranch = (Notion, &'static [MetricId]);

pub const TAXONOMY: &[(Pillar, &[NotionBranch])] = &[
    (
        Pillar::Privacy,
        &[
            (N::PrivacyPreserving, &[M::DifferentialPrivacy]),
            (N::Uncertainty, &[M::Entropy]),
            (N::Indistinguishability, &[M::GlobalPrivacyRisk]),
        ],
    ),
    (
        Pillar::Robustness,
        &[
            (N::ResilienceToAttacks, &[M::CertifiedRobustness]),
            (N::AlgorithmRobustness, &[M::Performance, M::Personalization]),
            (N::ClientReliability, &[M::FederationScale]),
        ],
    ),
    (
        Pillar::Fairness,
        &[
            (N::ClientSelection, &[M::ParticipationVariation]),
            (N::Performance, &[M::AccuracyVariation]),
            (N::GroupLevel, &[M::DiscriminationIndex]),
            (N::ClassDistribution, &[M::ClassImbalance]),
        ],
    ),
    (
        Pillar::Explainability,
        &[
            (N::Interpretability, &[M::AlgorithmicTransparency, M::ModelSize]),
            (N::PostHoc, &[M::FeatureImportance]),
        ],
    ),
    (
        Pillar::Accountability,
        &[(
            N::FactsheetCompleteness,
            &[M::Project, M::Participants, M::Data, M::Configuration, M::System],
        )],
    ),
    (
        Pillar::Federation,
        &[
            (N::ClientManagement, &[M::ClientSelector]),
            (N::Optimization, &[M::AggregationAlgorithm]),
        ],
    ),
];

impl MetricId {
    pub fn all() -> impl Iterator<Item = MetricId> {
        TAXONOMY
            .iter()
            .flat_map(|(_, notions)| notions.iter().flat_map(|(_, ms)| ms.iter().copied()))
    }

    pub fn location(self) -> (Pillar, Notion) {
        for (p, notions) in TAXONOMY {
            for (n, ms) in notions.iter() {
                if ms.contains(&self) {
                    return (*p, *n);
                }
            }
        }
        unreachable!("every metric id appears in TAXONOMY")
    }

    /// When the metric is computed and who produces its input.
    pub fn schedule(self) -> (Phase, Producer) {
        use Phase::*;
        use Producer::*;
        match self {
            M::DifferentialPrivacy | M::Entropy | M::GlobalPrivacyRisk => (Pre, Server),
            M::CertifiedRobustness => (Post, Server),
            M::Performance => (During, Clients),
            M::Personalization | M::FederationScale => (Pre, Server),
            M::ParticipationVariation => (Post, Server),
            M::AccuracyVariation => (During, Clients),
            M::DiscriminationIndex => (Post, Clients),
            M::ClassImbalance => (Pre, Clients),
            M::AlgorithmicTransparency => (Pre, Server),
            M::ModelSize | M::FeatureImportance => (Post, Server),
            M::Project | M::Participants | M::Data | M::Configuration => (Pre, Server),
            M::System => (Post, Server),
            M::ClientSelector | M::AggregationAlgorithm => (Pre, Server),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            M::DifferentialPrivacy => "differential_privacy",
            M::Entropy => "entropy",
            M::GlobalPrivacyRisk => "global_privacy_risk",
            M::CertifiedRobustness => "certified_robustness",
            M::Performance => "performance",
            M::Personalization => "personalization",
            M::FederationScale => "federation_scale",
            M::ParticipationVariation => "participation_variation",
            M::AccuracyVariation => "accuracy_variation",
            M::DiscriminationIndex => "discrimination_index",
            M::ClassImbalance => "class_imbalance",
            M::AlgorithmicTransparency => "algorithmic_transparency",
            M::ModelSize => "model_size",
            M::FeatureImportance => "feature_importance",
            M::Project => "project",
            M::Participants => "participants",
            M::Data => "data",
            M::Configuration => "configuration",
            M::System => "system",
            M::ClientSelector => "client_selector",
            M::AggregationAlgorithm => "aggregation_algorithm",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Notion {
    pub fn name(self) -> &'static str {
        match self {
            N::PrivacyPreserving => "privacy_preserving",
            N::Uncertainty => "uncertainty",
            N::Indistinguishability => "indistinguishability",
            N::ResilienceToAttacks => "resilience_to_attacks",
            N::AlgorithmRobustness => "algorithm_robustness",
            N::ClientReliability => "client_reliability",
            N::ClientSelection => "client_selection",
            N::Performance => "performance",
            N::GroupLevel => "group_level",
            N::ClassDistribution => "class_distribution",
            N::Interpretability => "interpretability",
            N::PostHoc => "post_hoc",
            N::FactsheetCompleteness => "factsheet_completeness",
            N::ClientManagement => "client_management",
            N::Optimization => "optimization",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Pillar {
    pub const ALL: [Pillar; 6] = [
        Pillar::Privacy,
        Pillar::Robustness,
        Pillar::Fairness,
        Pillar::Explainability,
        Pillar::Accountability,
        Pillar::Federation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pillar::Privacy => "privacy",
            Pillar::Robustness => "robustness",
            Pillar::Fairness => "fairness",
            Pillar::Explainability => "explainability",
            Pillar::Accountability => "accountability",
            Pillar::Federation => "federation",
        }
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
