use crate::error::{Error, Result};
use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

use super::select::Selector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Aggregator {
    Fedavg,
    WeightedFedavg,
    Fedprox { mu: f64 },
}

impl Aggregator {
    /// Canonical algorithm name, as used by the aggregation-algorithm metric.
    pub fn algorithm_name(&self) -> &'static str {
        match self {
            Aggregator::Fedavg | Aggregator::WeightedFedavg => "FedAvg",
            Aggregator::Fedprox { .. } => "FedProx",
        }
    }

    pub fn proximal_mu(&self) -> f64 {
        match *self {
            Aggregator::Fedprox { mu } => mu,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    #[default]
    Gaussian,
    Laplace,
}

fn default_clip_norm() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    1e-5
}

fn default_sensitivity() -> f64 {
    1.0
}

/// Local differential privacy applied to each client's model delta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpSettings {
    pub epsilon: f64,
    #[serde(default = "default_clip_norm")]
    pub clip_norm: f64,
    #[serde(default)]
    pub mechanism: Mechanism,
    /// Only used by the Gaussian mechanism.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Multiplier on `clip_norm` for the Laplace scale.
    #[serde(default = "default_sensitivity")]
    pub laplace_sensitivity: f64,
}

impl DpSettings {
    pub fn gaussian(epsilon: f64) -> Self {
        Self {
            epsilon,
            clip_norm: default_clip_norm(),
            mechanism: Mechanism::Gaussian,
            delta: default_delta(),
            laplace_sensitivity: default_sensitivity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::config(format!("dp epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(self.clip_norm > 0.0 && self.clip_norm.is_finite()) {
            return Err(Error::config("dp clip_norm must be positive and finite"));
        }
        match self.mechanism {
            Mechanism::Gaussian if !(self.delta > 0.0 && self.delta < 1.0) => {
                Err(Error::config("gaussian dp delta must lie in (0, 1)"))
            }
            Mechanism::Laplace if !(self.laplace_sensitivity > 0.0 && self.laplace_sensitivity.is_finite()) => {
                Err(Error::config("laplace_sensitivity must be positive and finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Model-replacement attacker. Fires once, in the first round at or after
/// `round` in which `client` is selected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub round: u32,
    pub client: usize,
    pub target: ModelParams,
}

fn default_radius() -> f64 {
    2.0
}
fn default_clever_samples() -> usize {
    32
}
fn default_clever_points() -> usize {
    10
}
fn default_shuffles() -> usize {
    3
}

/// Knobs of the trust evaluation. The first group runs client-side after
/// training, the last two only affect server-side scoring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSettings {
    #[serde(default = "default_radius")]
    pub clever_radius: f64,
    #[serde(default = "default_clever_samples")]
    pub clever_samples: usize,
    /// Test points per client fed to the certified-robustness estimate.
    #[serde(default = "default_clever_points")]
    pub clever_points_per_client: usize,
    #[serde(default = "default_shuffles")]
    pub importance_shuffles: usize,
    #[serde(default)]
    pub enable_discrimination_index: bool,
    /// Rank larger models higher on model size instead of smaller ones.
    #[serde(default)]
    pub model_size_literal: bool,
}

impl Default for EvaluationSettings {
    fn default() -> Self {
        Self {
            clever_radius: default_radius(),
            clever_samples: default_clever_samples(),
            clever_points_per_client: default_clever_points(),
            importance_shuffles: default_shuffles(),
            enable_discrimination_index: false,
            model_size_literal: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FederationConfig {
    pub num_clients: usize,
    pub sample_rate: f64,
    pub rounds: u32,
    pub local_epochs: u32,
    pub learning_rate: f64,
    /// Minibatch size for local SGD; `None` means full-batch gradient descent.
    #[serde(default)]
    pub batch_size: Option<usize>,
    pub aggregator: Aggregator,
    #[serde(default)]
    pub dp: Option<DpSettings>,
    #[serde(default)]
    pub selector: Selector,
    #[serde(default)]
    pub personalization_enabled: bool,
    #[serde(default)]
    pub attack: Option<AttackConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub evaluation: EvaluationSettings,
}

impl FederationConfig {
    /// Clients sampled per round: `ceil(sample_rate * N)`.
    pub fn clients_per_round(&self) -> usize {
        // 0.6 * 50 evaluates to 30.000000000000004; absorb that before ceil.
        let raw = self.sample_rate * self.num_clients as f64;
        ((raw - 1e-9).ceil() as usize).clamp(1, self.num_clients.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_clients == 0 {
            return Err(Error::config("num_clients must be at least 1"));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate <= 1.0) {
            return Err(Error::config(format!(
                "sample_rate must lie in (0, 1], got {}",
                self.sample_rate
            )));
        }
        if self.rounds == 0 {
            return Err(Error::config("rounds must be at least 1"));
        }
        if self.local_epochs == 0 {
            return Err(Error::config("local_epochs must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate must be positive and finite"));
        }
        if self.batch_size == Some(0) {
            return Err(Error::config("batch_size must be at least 1"));
        }
        if let Aggregator::Fedprox { mu } = self.aggregator {
            if !(mu >= 0.0 && mu.is_finite()) {
                return Err(Error::config("fedprox mu must be nonnegative and finite"));
            }
        }
        if let Some(dp) = &self.dp {
            dp.validate()?;
        }
        if let Some(attack) = &self.attack {
            if attack.client >= self.num_clients {
                return Err(Error::config(format!(
                    "attack client {} outside [0, {})",
                    attack.client, self.num_clients
                )));
            }
        }
        let e = &self.evaluation;
        if !(e.clever_radius > 0.0 && e.clever_radius.is_finite()) || e.clever_samples == 0 {
            return Err(Error::config("clever radius and sample count must be positive"));
        }
        if e.importance_shuffles == 0 {
            return Err(Error::config("importance_shuffles must be at least 1"));
        }
        Ok(())
    }
}
