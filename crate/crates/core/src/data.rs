//! Synthetic client data, partitioning and hashed class distributions.
//!
//! Class `c` is an isotropic unit-variance Gaussian centred at a fixed random
//! unit vector scaled by [`CLASS_MEAN_SCALE`]. Label skew across clients comes
//! either from uniform sampling (IID) or from per-client Dirichlet class
//! proportions.

use crate::error::{Error, Result};
use crate::seed::{self, HashedLabel};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Read;

pub const CLASS_MEAN_SCALE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Partition {
    Iid,
    Dirichlet { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRange {
    pub min: usize,
    pub max: usize,
}

fn default_test_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub num_classes: usize,
    pub feature_dim: usize,
    /// Total samples per client (train + test), drawn uniformly from the range.
    pub samples_per_client: SampleRange,
    pub partition: Partition,
    #[serde(default)]
    pub protected_attribute_rate: f64,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default)]
    pub seed: u64,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::input("num_classes must be at least 2"));
        }
        if self.feature_dim == 0 {
            return Err(Error::input("feature_dim must be at least 1"));
        }
        let r = self.samples_per_client;
        if r.min < 2 || r.min > r.max {
            return Err(Error::input(format!(
                "samples_per_client range [{}, {}] infeasible: need 2 <= min <= max",
                r.min, r.max
            )));
        }
        if let Partition::Dirichlet { alpha } = self.partition {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::input("dirichlet alpha must be positive and finite"));
            }
        }
        if !(0.0..=1.0).contains(&self.protected_attribute_rate) {
            return Err(Error::input("protected_attribute_rate must lie in [0, 1]"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::input("test_fraction must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Row-major feature matrix with labels and protected-group flags.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Samples {
    pub dim: usize,
    pub features: Vec<f64>,
    pub labels: Vec<usize>,
    pub protected: Vec<bool>,
}

impl Samples {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn push(&mut self, x: &[f64], label: usize, protected: bool) {
        debug_assert_eq!(x.len(), self.dim);
        self.features.extend_from_slice(x);
        self.labels.push(label);
        self.protected.push(protected);
    }

    /// Subset with the given row order.
    pub fn select(&self, rows: &[usize]) -> Samples {
        let mut out = Samples::new(self.dim);
        for &r in rows {
            out.push(self.row(r), self.labels[r], self.protected[r]);
        }
        out
    }

    pub fn label_histogram(&self, num_classes: usize) -> Vec<u64> {
        let mut h = vec![0u64; num_classes];
        for &y in &self.labels {
            h[y] += 1;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientDataset {
    pub client_index: usize,
    pub train: Samples,
    pub test: Samples,
}

/// Hashed label → train-sample count for one client, or merged across clients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassDistribution(pub BTreeMap<HashedLabel, u64>);

impl ClassDistribution {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.0.values().copied().collect()
    }

    /// Plain summation of per-client distributions.
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a ClassDistribution>) -> ClassDistribution {
        // A secure-aggregation protocol would replace this summation so the
        // server only learns the merged map.
        let mut out = BTreeMap::new();
        for part in parts {
            for (k, v) in &part.0 {
                *out.entry(k.clone()).or_insert(0) += v;
            }
        }
        ClassDistribution(out)
    }
}

/// Per-client class counts over the train split, keyed by salted label hashes.
pub fn class_distribution(client: &ClientDataset, salt: &[u8]) -> ClassDistribution {
    let mut out = BTreeMap::new();
    for &y in &client.train.labels {
        *out.entry(HashedLabel::hashed(salt, y)).or_insert(0) += 1;
    }
    ClassDistribution(out)
}

fn class_means(spec: &DatasetSpec) -> Vec<Vec<f64>> {
    let mut rng = seed::stream(spec.seed, "class-means", &[]);
    (0..spec.num_classes)
        .map(|_| {
            let v: Vec<f64> = (0..spec.feature_dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            v.into_iter().map(|x| CLASS_MEAN_SCALE * x / norm).collect()
        })
        .collect()
}

/// Draw a point from the symmetric Dirichlet(alpha) over `k` categories.
pub fn sample_dirichlet<R: Rng + ?Sized>(rng: &mut R, alpha: f64, k: usize) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("alpha validated positive");
    let draws: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    if total > 0.0 && total.is_finite() {
        draws.into_iter().map(|g| g / total).collect()
    } else {
        // Every gamma draw underflowed (tiny alpha): all mass on one category.
        let hot = rng.random_range(0..k);
        (0..k).map(|c| if c == hot { 1.0 } else { 0.0 }).collect()
    }
}

/// Integer counts summing to `n` proportional to `p` (largest remainder).
pub fn apportion(p: &[f64], n: usize) -> Vec<usize> {
    let raw: Vec<f64> = p.iter().map(|x| x * n as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = raw[a] - raw[a].floor();
        let rb = raw[b] - raw[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn split_train_test<R: Rng + ?Sized>(
    rng: &mut R,
    pooled: Samples,
    test_fraction: f64,
    client_index: usize,
) -> Result<ClientDataset> {
    let n = pooled.len();
    if n < 2 {
        return Err(Error::input(format!(
            "client {client_index} received {n} samples; at least 2 are needed"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let n_test = ((n as f64 * test_fraction).round() as usize).clamp(1, n - 1);
    Ok(ClientDataset {
        client_index,
        test: pooled.select(&order[..n_test]),
        train: pooled.select(&order[n_test..]),
    })
}

/// Generate `num_clients` synthetic client datasets. Deterministic in `spec.seed`.
pub fn generate(spec: &DatasetSpec, num_clients: usize) -> Result<Vec<ClientDataset>> {
    spec.validate()?;
    if num_clients == 0 {
        return Err(Error::input("num_clients must be at least 1"));
    }
    let means = class_means(spec);
    let k = spec.num_classes;
    (0..num_clients)
        .map(|i| {
            let mut rng = seed::stream(spec.seed, "client-data", &[i as u64]);
            let n = rng.random_range(spec.samples_per_client.min..=spec.samples_per_client.max);
            let mut labels: Vec<usize> = match spec.partition {
                Partition::Iid => (0..n).map(|_| rng.random_range(0..k)).collect(),
                Partition::Dirichlet { alpha } => {
                    let p = sample_dirichlet(&mut rng, alpha, k);
                    apportion(&p, n)
                        .into_iter()
                        .enumerate()
                        .flat_map(|(c, cnt)| std::iter::repeat_n(c, cnt))
                        .collect()
                }
            };
            labels.shuffle(&mut rng);
            let mut pooled = Samples::new(spec.feature_dim);
            let mut x = vec![0.0; spec.feature_dim];
            for &y in &labels {
                for (xi, mi) in x.iter_mut().zip(&means[y]) {
                    *xi = mi + rng.sample::<f64, _>(StandardNormal);
                }
                let protected = rng.random_bool(spec.protected_attribute_rate);
                pooled.push(&x, y, protected);
            }
            split_train_test(&mut rng, pooled, spec.test_fraction, i)
        })
        .collect()
}

/// Load a pooled CSV dataset and partition it across `num_clients`.
///
/// The header must contain a `label` column; an optional `protected` column
/// holds 0/1 flags; every other column is a numeric feature. IID partitions
/// deal shuffled rows round-robin; Dirichlet partitions split each class
/// across clients with proportions drawn from Dir(alpha).
pub fn load_csv<R: Read>(reader: R, spec: &DatasetSpec, num_clients: usize) -> Result<Vec<ClientDataset>> {
    if num_clients == 0 {
        return Err(Error::input("num_clients must be at least 1"));
    }
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::input(format!("csv header: {e}")))?
        .clone();
    let label_col = headers
        .iter()
        .position(|h| h.trim() == "label")
        .ok_or_else(|| Error::input("csv has no `label` column"))?;
    let protected_col = headers.iter().position(|h| h.trim() == "protected");
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| c != label_col && Some(c) != protected_col)
        .collect();
    if feature_cols.len() != spec.feature_dim {
        return Err(Error::input(format!(
            "csv has {} feature columns, dataset declares {}",
            feature_cols.len(),
            spec.feature_dim
        )));
    }
    let mut pooled = Samples::new(spec.feature_dim);
    let mut x = vec![0.0; spec.feature_dim];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::input(format!("csv row {}: {e}", line + 2)))?;
        let field = |c: usize| rec.get(c).unwrap_or("").trim();
        let label: usize = field(label_col)
            .parse()
            .map_err(|_| Error::input(format!("csv row {}: bad label", line + 2)))?;
        if label >= spec.num_classes {
            return Err(Error::input(format!(
                "csv row {}: label {label} outside [0, {})",
                line + 2,
                spec.num_classes
            )));
        }
        let protected = match protected_col {
            None => false,
            Some(c) => match field(c) {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::input(format!(
                        "csv row {}: protected must be 0 or 1, got {other:?}",
                        line + 2
                    )))
                }
            },
        };
        for (xi, &c) in x.iter_mut().zip(&feature_cols) {
            *xi = field(c)
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::input(format!("csv row {}: bad feature in column {c}", line + 2)))?;
        }
        pooled.push(&x, label, protected);
    }

    let mut rng = seed::stream(spec.seed, "csv-partition", &[]);
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); num_clients];
    match spec.partition {
        Partition::Iid => {
            let mut order: Vec<usize> = (0..pooled.len()).collect();
            order.shuffle(&mut rng);
            for (pos, r) in order.into_iter().enumerate() {
                assignment[pos % num_clients].push(r);
            }
        }
        Partition::Dirichlet { alpha } => {
            for c in 0..spec.num_classes {
                let mut rows: Vec<usize> = (0..pooled.len()).filter(|&r| pooled.labels[r] == c).collect();
                rows.shuffle(&mut rng);
                let p = sample_dirichlet(&mut rng, alpha, num_clients);
                let mut start = 0;
                for (client, cnt) in apportion(&p, rows.len()).into_iter().enumerate() {
                    assignment[client].extend_from_slice(&rows[start..start + cnt]);
                    start += cnt;
                }
            }
        }
    }
    assignment
        .into_iter()
        .enumerate()
        .map(|(i, rows)| split_train_test(&mut rng, pooled.select(&rows), spec.test_fraction, i))
        .collect()
}
