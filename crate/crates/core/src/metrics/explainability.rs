use super::fairness::coefficient_of_variation;
use crate::data::Samples;
use crate::error::{Error, Result};
use crate::model::{ArchitectureDescriptor, ModelParams};
use rand::seq::SliceRandom;
use rand::Rng;

/// Raw interpretability-by-design score per model family, 1 (opaque) to 5.
pub const TRANSPARENCY: &[(&str, f64)] = &[
    ("DecisionTree", 5.0),
    ("RandomForest", 4.0),
    ("LogisticRegression", 4.0),
    ("SVM", 2.0),
    ("KNN", 3.0),
    ("GaussianProcess", 3.0),
    ("AdaBoost", 3.0),
    ("GaussianNB", 3.5),
    ("QDA", 3.0),
    ("LinearRegression", 3.5),
    ("MLP", 1.0),
    ("Sequential", 1.0),
    ("CNN", 1.0),
];

pub fn metric_algorithmic_transparency(family: &str) -> Result<f64> {
    TRANSPARENCY
        .iter()
        .find(|(name, _)| *name == family)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::input(format!("unknown model family {family:?}")))
}

pub fn metric_model_size(arch: &ArchitectureDescriptor) -> u64 {
    arch.param_count() as u64
}

fn accuracy(model: &ModelParams, features: &[f64], labels: &[usize]) -> Result<f64> {
    Ok(model.evaluate(features, labels)?.1)
}

/// Accuracy drop when each feature column is shuffled, averaged over
/// `shuffles` permutations, floored at 0 and L1-normalized. All-zero when no
/// feature matters.
pub fn permutation_importance<R: Rng + ?Sized>(
    model: &ModelParams,
    test: &Samples,
    shuffles: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let d = test.dim;
    if test.is_empty() {
        return Ok(vec![0.0; d]);
    }
    let base = accuracy(model, &test.features, &test.labels)?;
    let mut work = test.features.clone();
    let mut column: Vec<f64> = Vec::with_capacity(test.len());
    let mut importance = vec![0.0; d];
    for (f, imp) in importance.iter_mut().enumerate() {
        let mut drop = 0.0;
        for _ in 0..shuffles {
            column.clear();
            column.extend((0..test.len()).map(|r| test.features[r * d + f]));
            column.shuffle(rng);
            for (r, v) in column.iter().enumerate() {
                work[r * d + f] = *v;
            }
            drop += base - accuracy(model, &work, &test.labels)?;
        }
        for r in 0..test.len() {
            work[r * d + f] = test.features[r * d + f];
        }
        *imp = (drop / shuffles.max(1) as f64).max(0.0);
    }
    let total: f64 = importance.iter().sum();
    if total > 0.0 {
        importance.iter_mut().for_each(|v| *v /= total);
    }
    Ok(importance)
}

/// Mean over features of the cross-client CV of importance. A single client
/// (or none) gives 0.
pub fn metric_feature_importance(per_client: &[Vec<f64>]) -> Result<f64> {
    if per_client.len() < 2 {
        return Ok(0.0);
    }
    let d = per_client[0].len();
    if per_client.iter().any(|v| v.len() != d) {
        return Err(Error::input("feature-importance vectors differ in length"));
    }
    if d == 0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for f in 0..d {
        let column: Vec<f64> = per_client.iter().map(|v| v[f]).collect();
        total += coefficient_of_variation(&column).unwrap_or(0.0);
    }
    Ok(total / d as f64)
}
