//! The federation round loop.
//!
//! Before the first round every client reports its hashed class distribution
//! and the server initialises a zeroed selection map. Each round samples
//! clients, broadcasts the global model, trains locally (optionally
//! clipping and noising the delta), lets a configured attacker substitute a
//! replacement update, and aggregates. After the last round every client
//! evaluates the final global model on its own test split.

mod aggregate;
mod attack;
mod config;
pub mod dp;
mod select;
mod stats;

pub use aggregate::{aggregate_fedavg, RoundUpdate, Weighting};
pub use attack::{craft_replacement_update, replacement_model};
pub use config::{
    Aggregator, AttackConfig, DpSettings, EvaluationSettings, FederationConfig, Mechanism,
};
pub use dp::apply_local_dp;
pub use select::{select_clients, Selector};
pub use stats::{
    CleverSummary, ClientEvaluation, ClientRoundRecord, GroupF1, RoundRecord, RunStatistics, Timing,
    STATS_SCHEMA_VERSION,
};

use crate::data::{self, ClassDistribution, ClientDataset};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics;
use crate::model::{ArchitectureDescriptor, ModelParams};
use crate::seed::{self, ClientId};
use rand::seq::SliceRandom;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutcome {
    pub stats: RunStatistics,
    pub model: ModelParams,
}

struct LocalResult {
    update: RoundUpdate,
    record: ClientRoundRecord,
    train_time_s: f64,
}

fn divergence(round: u32, detail: impl Into<String>) -> Error {
    Error::NumericDivergence {
        round,
        detail: detail.into(),
    }
}

/// Local SGD from the broadcast model, returning the (possibly privatized)
/// delta and the client's evaluation of its local model.
fn local_update(
    config: &FederationConfig,
    global: &ModelParams,
    client: &ClientDataset,
    id: &ClientId,
    round: u32,
) -> Result<LocalResult> {
    let start = Instant::now();
    let mut rng = seed::stream(config.seed, "client-round", &[client.client_index as u64, round as u64]);
    let mu = config.aggregator.proximal_mu();
    let train = &client.train;
    let mut w = global.clone();
    let mut rows: Vec<usize> = (0..train.len()).collect();
    for _ in 0..config.local_epochs {
        let batch = config.batch_size.unwrap_or(rows.len()).min(rows.len());
        if batch < rows.len() {
            rows.shuffle(&mut rng);
        }
        for chunk in rows.chunks(batch) {
            let g = w.loss_and_grad_subset(&train.features, &train.labels, chunk)?;
            for ((wi, gi), gw) in w.values.iter_mut().zip(&g.param_grad).zip(&global.values) {
                *wi -= config.learning_rate * (gi + mu * (*wi - gw));
            }
        }
        if !w.is_finite() {
            return Err(divergence(round, format!("client {id} local model became non-finite")));
        }
    }
    let (test_loss, test_accuracy) = w.evaluate(&client.test.features, &client.test.labels)?;
    let mut delta: Vec<f64> = w.values.iter().zip(&global.values).map(|(a, b)| a - b).collect();
    if let Some(dp) = &config.dp {
        delta = apply_local_dp(&delta, dp, &mut rng)?;
    }
    let bytes = global.wire_bytes();
    Ok(LocalResult {
        update: RoundUpdate {
            client: id.clone(),
            delta,
            num_train_samples: train.len(),
        },
        record: ClientRoundRecord {
            client: id.clone(),
            train_samples: train.len(),
            test_loss,
            test_accuracy,
            upload_bytes: bytes,
            download_bytes: bytes,
        },
        train_time_s: start.elapsed().as_secs_f64(),
    })
}

fn evaluate_client(
    config: &FederationConfig,
    model: &ModelParams,
    client: &ClientDataset,
    id: &ClientId,
) -> Result<ClientEvaluation> {
    let test = &client.test;
    let settings = &config.evaluation;
    let (test_loss, test_accuracy) = model.evaluate(&test.features, &test.labels)?;
    let mut rng = seed::stream(config.seed, "client-eval", &[client.client_index as u64]);
    let feature_importance =
        metrics::permutation_importance(model, test, settings.importance_shuffles, &mut rng)?;
    let clever = metrics::clever_summary(
        model,
        test,
        settings.clever_points_per_client,
        settings.clever_radius,
        settings.clever_samples,
        &mut rng,
    )?;
    let group_f1 = metrics::group_f1(model, test)?;
    Ok(ClientEvaluation {
        client: id.clone(),
        test_samples: test.len(),
        test_loss,
        test_accuracy,
        feature_importance,
        clever,
        group_f1,
    })
}

fn check_inputs(config: &FederationConfig, data: &[ClientDataset], arch: &ArchitectureDescriptor) -> Result<()> {
    config.validate()?;
    arch.validate()?;
    if data.len() != config.num_clients {
        return Err(Error::config(format!(
            "config declares {} clients but {} datasets were supplied",
            config.num_clients,
            data.len()
        )));
    }
    for (i, c) in data.iter().enumerate() {
        if c.client_index != i {
            return Err(Error::input(format!("dataset {i} carries client_index {}", c.client_index)));
        }
        for s in [&c.train, &c.test] {
            if s.dim != arch.input_dim {
                return Err(Error::input(format!(
                    "client {i} has {}-dim features, model expects {}",
                    s.dim, arch.input_dim
                )));
            }
            if s.labels.iter().any(|&y| y >= arch.num_classes) {
                return Err(Error::input(format!("client {i} has labels outside the model's classes")));
            }
        }
        if c.train.is_empty() || c.test.is_empty() {
            return Err(Error::input(format!("client {i} needs non-empty train and test splits")));
        }
    }
    if let Some(attack) = &config.attack {
        if attack.target.arch != *arch {
            return Err(Error::config("attack target architecture differs from the model"));
        }
    }
    Ok(())
}

/// Run the federation with the default execution mode.
pub fn run(config: &FederationConfig, data: &[ClientDataset], arch: ArchitectureDescriptor) -> Result<SimulationOutcome> {
    run_with(config, data, arch, Execution::default())
}

pub fn run_with(
    config: &FederationConfig,
    data: &[ClientDataset],
    arch: ArchitectureDescriptor,
    exec: Execution,
) -> Result<SimulationOutcome> {
    check_inputs(config, data, &arch)?;
    let n = config.num_clients;
    let m = config.clients_per_round();
    let client_salt = seed::salt(config.seed, "client-id");
    let label_salt = seed::salt(config.seed, "label");
    let ids: Vec<ClientId> = (0..n).map(|i| ClientId::hashed(&client_salt, i)).collect();
    let mut selection_count: BTreeMap<ClientId, u64> = ids.iter().map(|id| (id.clone(), 0)).collect();

    let distributions: Vec<ClassDistribution> = exec.map(data, |c| data::class_distribution(c, &label_salt));
    let class_distribution = ClassDistribution::merge(&distributions);

    let mut global = ModelParams::init_random(arch, &mut seed::stream(config.seed, "init-model", &[]))?;
    let weighting = match config.aggregator {
        Aggregator::WeightedFedavg => Weighting::BySamples,
        _ => Weighting::Uniform,
    };

    let mut rounds = Vec::with_capacity(config.rounds as usize);
    let mut train_times = Vec::with_capacity(config.rounds as usize);
    let mut attack_round = None;
    for t in 0..config.rounds {
        let mut rng = seed::stream(config.seed, "select", &[t as u64]);
        let selected = select_clients(config.selector, n, m, t, &mut rng)?;
        for &i in &selected {
            *selection_count.get_mut(&ids[i]).expect("initialised") += 1;
        }

        let results = exec.try_map(&selected, |&i| local_update(config, &global, &data[i], &ids[i], t))?;
        let mut updates: Vec<RoundUpdate> = results.iter().map(|r| r.update.clone()).collect();

        let mut attacked = false;
        if let Some(attack) = &config.attack {
            let fires = attack_round.is_none() && t >= attack.round && selected.contains(&attack.client);
            if fires {
                let atk_id = &ids[attack.client];
                let pos = updates.iter().position(|u| &u.client == atk_id).expect("selected");
                let target = &attack.target;
                let samples = updates[pos].num_train_samples;
                updates[pos] = match weighting {
                    Weighting::Uniform => {
                        craft_replacement_update(&global, target, updates.len(), atk_id.clone(), samples)?
                    }
                    Weighting::BySamples => {
                        // Scale so the attacker's weight in the mean becomes one.
                        let total: usize = updates.iter().map(|u| u.num_train_samples).sum();
                        RoundUpdate {
                            client: atk_id.clone(),
                            delta: replacement_delta(&global, target, total as f64 / samples as f64),
                            num_train_samples: samples,
                        }
                    }
                };
                attacked = true;
                attack_round = Some(t);
            }
        }

        global = aggregate_fedavg(&global, &updates, weighting)?;
        if !global.is_finite() {
            return Err(divergence(t, "global model became non-finite after aggregation"));
        }
        log::debug!("round {t}: aggregated {} updates", updates.len());

        train_times.push(results.iter().map(|r| r.train_time_s).collect::<Vec<_>>());
        rounds.push(RoundRecord {
            round: t,
            selected: selected.iter().map(|&i| ids[i].clone()).collect(),
            clients: results.into_iter().map(|r| r.record).collect(),
            attacked,
        });
    }

    let clients = exec.try_map(data, |c| evaluate_client(config, &global, c, &ids[c.client_index]))?;

    let all_times: Vec<f64> = train_times.iter().flatten().copied().collect();
    let avg_training_time_s = all_times.iter().sum::<f64>() / all_times.len().max(1) as f64;
    let finished_at_unix_s = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    let stats = RunStatistics {
        schema_version: STATS_SCHEMA_VERSION.to_string(),
        experiment: None,
        config: config.clone(),
        arch,
        client_ids: ids,
        selection_count,
        class_distribution,
        rounds,
        clients,
        attack_round,
        timing: Timing {
            train_time_s: train_times,
            avg_training_time_s,
            finished_at_unix_s,
        },
    };
    Ok(SimulationOutcome { stats, model: global })
}

/// Delta `s·(x_atk − w_t)` for a non-integer scale.
fn replacement_delta(current: &ModelParams, target: &ModelParams, scale: f64) -> Vec<f64> {
    current
        .values
        .iter()
        .zip(&target.values)
        .map(|(w, x)| scale * (x - w))
        .collect()
}
