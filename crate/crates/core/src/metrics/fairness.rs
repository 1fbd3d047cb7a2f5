use crate::data::{ClassDistribution, Samples};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sim::GroupF1;
use std::collections::BTreeSet;

/// `σ/μ` with the population standard deviation. `None` for an empty input or
/// a zero mean with nonzero spread; an all-zero input has CV 0.
pub fn coefficient_of_variation(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    // The mean of equal values can round away from them; no spread is exact 0.
    if values.iter().all(|&v| v == values[0]) {
        return Some(0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if mean == 0.0 {
        return (sd == 0.0).then_some(0.0);
    }
    Some(sd / mean.abs())
}

/// CV of per-client selection counts.
pub fn metric_participation_variation(selection_counts: &[u64]) -> Result<f64> {
    let v: Vec<f64> = selection_counts.iter().map(|&c| c as f64).collect();
    if v.iter().sum::<f64>() <= 0.0 {
        return Err(Error::unavailable("participation_variation", "mean participation is zero"));
    }
    coefficient_of_variation(&v)
        .ok_or_else(|| Error::unavailable("participation_variation", "no clients"))
}

/// CV of per-client test accuracy of the global model.
pub fn metric_accuracy_variation(accuracies: &[f64]) -> Result<f64> {
    coefficient_of_variation(accuracies)
        .ok_or_else(|| Error::unavailable("accuracy_variation", "no accuracies to compare"))
}

/// Balance ratio `1 − clamp(CV(class counts), 0, 1)` on the merged
/// distribution. Classes the model knows but that never appear count as 0.
pub fn metric_class_imbalance(merged: &ClassDistribution, num_classes: usize) -> Result<f64> {
    let mut counts: Vec<f64> = merged.counts().into_iter().map(|c| c as f64).collect();
    if counts.len() < num_classes {
        counts.resize(num_classes, 0.0);
    }
    if counts.iter().sum::<f64>() <= 0.0 {
        return Err(Error::unavailable("class_imbalance", "empty class distribution"));
    }
    let cv = coefficient_of_variation(&counts).expect("positive mean");
    Ok(1.0 - cv.clamp(0.0, 1.0))
}

/// Macro-averaged F1 over the labels present in either `truth` or `pred`.
/// Classes with zero precision and recall contribute 0.
pub fn macro_f1(truth: &[usize], pred: &[usize]) -> f64 {
    let labels: BTreeSet<usize> = truth.iter().chain(pred).copied().collect();
    if labels.is_empty() {
        return 0.0;
    }
    let f1s = labels.iter().map(|&c| {
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fneg = 0usize;
        for (&t, &p) in truth.iter().zip(pred) {
            match (t == c, p == c) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fneg += 1,
                _ => {}
            }
        }
        let denom = 2 * tp + fp + fneg;
        if denom == 0 {
            0.0
        } else {
            2.0 * tp as f64 / denom as f64
        }
    });
    f1s.sum::<f64>() / labels.len() as f64
}

/// Client-side group F1 of `model` on `test`. `None` if either the protected
/// or the unprotected group is empty on this client.
pub fn group_f1(model: &ModelParams, test: &Samples) -> Result<Option<GroupF1>> {
    let mut groups: [(Vec<usize>, Vec<usize>); 2] = Default::default();
    for i in 0..test.len() {
        let g = &mut groups[test.protected[i] as usize];
        g.0.push(test.labels[i]);
        g.1.push(model.predict(test.row(i))?);
    }
    let [unprot, prot] = groups;
    if prot.0.is_empty() || unprot.0.is_empty() {
        return Ok(None);
    }
    Ok(Some(GroupF1 {
        protected_f1: macro_f1(&prot.0, &prot.1),
        unprotected_f1: macro_f1(&unprot.0, &unprot.1),
        test_samples: test.len(),
    }))
}

/// `Φ = F1(protected) − F1(rest)`, aggregated over clients by test size.
pub fn metric_discrimination_index(groups: &[GroupF1]) -> Result<f64> {
    let n: usize = groups.iter().map(|g| g.test_samples).sum();
    if n == 0 {
        return Err(Error::unavailable(
            "discrimination_index",
            "no client holds both protected and unprotected test samples",
        ));
    }
    Ok(groups
        .iter()
        .map(|g| g.discrimination_index() * g.test_samples as f64)
        .sum::<f64>()
        / n as f64)
}
