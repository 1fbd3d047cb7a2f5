//! Model-replacement attack.
//!
//! With `w_{t+1} = w_t + (1/N) Σ (x_i − w_t)` and benign deviations summing to
//! roughly zero, a malicious client submitting `x_m = N·(x_atk − w_t) + w_t`
//! drives the next global model to `x_atk`.

use super::aggregate::RoundUpdate;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::seed::ClientId;

/// Poisoned client model `x_m = N·(x_atk − w_t) + w_t`.
pub fn replacement_model(current: &ModelParams, target: &ModelParams, n: usize) -> Result<ModelParams> {
    if current.len() != target.len() {
        return Err(Error::input(format!(
            "attack target has {} parameters, global model has {}",
            target.len(),
            current.len()
        )));
    }
    if n == 0 {
        return Err(Error::input("federation size must be at least 1"));
    }
    let scale = n as f64;
    let values = current
        .values
        .iter()
        .zip(&target.values)
        .map(|(w, x)| scale * (x - w) + w)
        .collect();
    Ok(ModelParams {
        arch: current.arch,
        values,
    })
}

/// The update a malicious `client` submits: `x_m − w_t`.
pub fn craft_replacement_update(
    current: &ModelParams,
    target: &ModelParams,
    n: usize,
    client: ClientId,
    num_train_samples: usize,
) -> Result<RoundUpdate> {
    let poisoned = replacement_model(current, target, n)?;
    let delta = poisoned
        .values
        .iter()
        .zip(&current.values)
        .map(|(x, w)| x - w)
        .collect();
    Ok(RoundUpdate {
        client,
        delta,
        num_train_samples,
    })
}
