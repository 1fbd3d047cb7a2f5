//! Certified robustness (CLEVER-style), performance and scale metrics.
//!
//! The certified bound for a correctly classified point `x0` of class `c` is
//! `min_j g_j(x0) / L_j` where `g_j = logit_c − logit_j` and `L_j` is the
//! largest `‖∇g_j‖₂` seen over uniform draws in the L2 ball `B(x0, R)`. This
//! uses the empirical maximum rather than a reverse-Weibull fit.

use crate::data::Samples;
use crate::error::{Error, Result};
use crate::factsheet::FactSheet;
use crate::model::ModelParams;
use crate::sim::{CleverSummary, ClientEvaluation, FederationConfig};
use rand::Rng;
use rand_distr::StandardNormal;

/// Uniform point in the L2 ball of radius `r` around `center`.
pub fn sample_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &[f64], r: f64) -> Vec<f64> {
    let d = center.len();
    let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = r * rng.random::<f64>().powf(1.0 / d as f64);
    center.iter().zip(&dir).map(|(c, u)| c + radius * u / norm).collect()
}

/// Certified lower bound on the L2 perturbation that flips the prediction at
/// `x0` away from `class`. Zero when `class` is not strictly ahead.
pub fn clever_bound<R: Rng + ?Sized>(
    model: &ModelParams,
    x0: &[f64],
    class: usize,
    radius: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let logits = model.logits(x0)?;
    let k = logits.len();
    if class >= k {
        return Err(Error::input(format!("class {class} outside [0, {k})")));
    }
    let draws: Vec<Vec<f64>> = (0..n_samples).map(|_| sample_in_ball(rng, x0, radius)).collect();
    let mut best = f64::INFINITY;
    for j in (0..k).filter(|&j| j != class) {
        let margin = logits[class] - logits[j];
        if margin <= 0.0 {
            return Ok(0.0);
        }
        let mut lipschitz = 0.0f64;
        for x in &draws {
            let g = model.input_grad(x, class, j)?;
            lipschitz = lipschitz.max(g.iter().map(|v| v * v).sum::<f64>().sqrt());
        }
        // A flat margin across the whole ball certifies at least the radius.
        let bound = if lipschitz > 0.0 { margin / lipschitz } else { radius };
        best = best.min(bound);
    }
    Ok(best)
}

/// Mean certified bound over the correctly classified rows of `samples`.
pub fn metric_certified_robustness<R: Rng + ?Sized>(
    model: &ModelParams,
    samples: &Samples,
    radius: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let rows: Vec<usize> = (0..samples.len()).collect();
    certified_over(model, samples, &rows, radius, n_samples, rng)?
        .map(|s| s.mean_score)
        .ok_or_else(|| Error::unavailable("certified_robustness", "no correctly classified sample"))
}

fn certified_over<R: Rng + ?Sized>(
    model: &ModelParams,
    samples: &Samples,
    rows: &[usize],
    radius: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<Option<CleverSummary>> {
    let mut total = 0.0;
    let mut evaluated = 0usize;
    for &r in rows {
        let x = samples.row(r);
        let y = samples.labels[r];
        if model.predict(x)? != y {
            continue;
        }
        total += clever_bound(model, x, y, radius, n_samples, rng)?;
        evaluated += 1;
    }
    Ok((evaluated > 0).then(|| CleverSummary {
        mean_score: total / evaluated as f64,
        evaluated,
    }))
}

/// Client-side summary over the first `max_points` test rows.
pub fn clever_summary<R: Rng + ?Sized>(
    model: &ModelParams,
    test: &Samples,
    max_points: usize,
    radius: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<Option<CleverSummary>> {
    let rows: Vec<usize> = (0..test.len().min(max_points)).collect();
    certified_over(model, test, &rows, radius, n_samples, rng)
}

/// Server-side merge of client summaries, weighted by evaluated points.
pub fn merge_clever(summaries: impl IntoIterator<Item = CleverSummary>) -> Result<f64> {
    let (sum, n) = summaries
        .into_iter()
        .fold((0.0, 0usize), |(s, n), c| (s + c.mean_score * c.evaluated as f64, n + c.evaluated));
    if n == 0 {
        return Err(Error::unavailable("certified_robustness", "no client had a correctly classified point"));
    }
    Ok(sum / n as f64)
}

/// Test-sample-weighted mean of per-client accuracy of the global model.
pub fn metric_performance(clients: &[ClientEvaluation]) -> Result<f64> {
    let n: usize = clients.iter().map(|c| c.test_samples).sum();
    if n == 0 {
        return Err(Error::unavailable("performance", "no client test samples"));
    }
    let s: f64 = clients.iter().map(|c| c.test_accuracy * c.test_samples as f64).sum();
    Ok(s / n as f64)
}

pub fn metric_personalization(fs: &FactSheet) -> bool {
    fs.flags.personalization
}

pub fn metric_federation_scale(config: &FederationConfig) -> u64 {
    config.num_clients as u64
}
