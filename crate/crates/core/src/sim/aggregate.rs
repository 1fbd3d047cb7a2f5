use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::seed::ClientId;
use serde::{Deserialize, Serialize};

/// A client's submitted change `x_i - w_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundUpdate {
    pub client: ClientId,
    pub delta: Vec<f64>,
    pub num_train_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Uniform,
    BySamples,
}

/// `w_{t+1} = w_t + Σ a_i delta_i` with `a_i = 1/n` (uniform) or
/// `n_i / Σ n` (by samples). Updates are summed in ascending client-id order.
pub fn aggregate_fedavg(
    current: &ModelParams,
    updates: &[RoundUpdate],
    weighting: Weighting,
) -> Result<ModelParams> {
    if updates.is_empty() {
        return Err(Error::input("aggregation needs at least one update"));
    }
    if let Some(bad) = updates.iter().find(|u| u.delta.len() != current.len()) {
        return Err(Error::input(format!(
            "update from {} has {} values, model has {}",
            bad.client,
            bad.delta.len(),
            current.len()
        )));
    }
    let mut order: Vec<&RoundUpdate> = updates.iter().collect();
    order.sort_by(|a, b| a.client.cmp(&b.client));

    let weights: Vec<f64> = match weighting {
        Weighting::Uniform => vec![1.0; order.len()],
        Weighting::BySamples => order.iter().map(|u| u.num_train_samples as f64).collect(),
    };
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::input("aggregation weights sum to zero"));
    }

    let mut sum = vec![0.0; current.len()];
    for (u, w) in order.iter().zip(&weights) {
        for (s, d) in sum.iter_mut().zip(&u.delta) {
            *s += w * d;
        }
    }
    let values = current
        .values
        .iter()
        .zip(&sum)
        .map(|(w, s)| w + s / total)
        .collect();
    Ok(ModelParams {
        arch: current.arch,
        values,
    })
}
