//! Minimal differentiable classifiers: multinomial logistic regression and a
//! one-hidden-layer ReLU MLP, both over a flat `f64` parameter vector.
//!
//! Parameter layout is row-major per layer, weights then biases:
//! logistic `[W (k×d), b (k)]`, MLP `[W1 (h×d), b1 (h), W2 (k×h), b2 (k)]`.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    LogisticRegression,
    #[serde(rename = "mlp-1h")]
    Mlp1h,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureDescriptor {
    pub kind: ModelKind,
    pub input_dim: usize,
    #[serde(default)]
    pub hidden_dim: usize,
    pub num_classes: usize,
}

impl ArchitectureDescriptor {
    pub fn logistic(input_dim: usize, num_classes: usize) -> Self {
        Self {
            kind: ModelKind::LogisticRegression,
            input_dim,
            hidden_dim: 0,
            num_classes,
        }
    }

    pub fn mlp(input_dim: usize, hidden_dim: usize, num_classes: usize) -> Self {
        Self {
            kind: ModelKind::Mlp1h,
            input_dim,
            hidden_dim,
            num_classes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::config("input_dim must be at least 1"));
        }
        if self.num_classes < 2 {
            return Err(Error::config("num_classes must be at least 2"));
        }
        match self.kind {
            ModelKind::LogisticRegression if self.hidden_dim != 0 => {
                Err(Error::config("logistic regression has no hidden layer"))
            }
            ModelKind::Mlp1h if self.hidden_dim == 0 => {
                Err(Error::config("mlp-1h needs hidden_dim >= 1"))
            }
            _ => Ok(()),
        }
    }

    pub fn param_count(&self) -> usize {
        let (d, h, k) = (self.input_dim, self.hidden_dim, self.num_classes);
        match self.kind {
            ModelKind::LogisticRegression => k * d + k,
            ModelKind::Mlp1h => h * d + h + k * h + k,
        }
    }

    /// Model family name as used by the algorithmic-transparency lookup.
    pub fn family_name(&self) -> &'static str {
        match self.kind {
            ModelKind::LogisticRegression => "LogisticRegression",
            ModelKind::Mlp1h => "MLP",
        }
    }

    pub fn activation(&self) -> Option<&'static str> {
        match self.kind {
            ModelKind::LogisticRegression => None,
            ModelKind::Mlp1h => Some("relu"),
        }
    }
}

/// One dense layer in unflattened form.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `out × in`, row-major.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    pub arch: ArchitectureDescriptor,
    pub values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    arch: ArchitectureDescriptor,
    values: Vec<f64>,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.arch, raw.values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientResult {
    pub loss: f64,
    pub param_grad: Vec<f64>,
}

/// Cached forward pass of a single sample.
struct Activations {
    hidden_pre: Vec<f64>,
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / s).collect()
}

impl ModelParams {
    pub fn new(arch: ArchitectureDescriptor, values: Vec<f64>) -> Result<Self> {
        arch.validate()?;
        if values.len() != arch.param_count() {
            return Err(Error::input(format!(
                "expected {} parameters for {:?}, got {}",
                arch.param_count(),
                arch.kind,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("model parameters must be finite"));
        }
        Ok(Self { arch, values })
    }

    pub fn zeros(arch: ArchitectureDescriptor) -> Result<Self> {
        arch.validate()?;
        Ok(Self {
            arch,
            values: vec![0.0; arch.param_count()],
        })
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init_random<R: Rng + ?Sized>(arch: ArchitectureDescriptor, rng: &mut R) -> Result<Self> {
        let mut p = Self::zeros(arch)?;
        let mut fill = |p: &mut Vec<f64>, start: usize, fan_out: usize, fan_in: usize| {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for v in &mut p[start..start + fan_out * fan_in] {
                *v = rng.random_range(-limit..limit);
            }
        };
        let (d, h, k) = (arch.input_dim, arch.hidden_dim, arch.num_classes);
        match arch.kind {
            ModelKind::LogisticRegression => fill(&mut p.values, 0, k, d),
            ModelKind::Mlp1h => {
                fill(&mut p.values, 0, h, d);
                fill(&mut p.values, h * d + h, k, h);
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Serialized size of the parameter vector in bytes (8 per value).
    pub fn wire_bytes(&self) -> u64 {
        (self.values.len() * std::mem::size_of::<f64>()) as u64
    }

    /// Split the flat vector into dense layers.
    pub fn layers(&self) -> Vec<Layer> {
        let (d, h, k) = (self.arch.input_dim, self.arch.hidden_dim, self.arch.num_classes);
        let shapes: Vec<(usize, usize)> = match self.arch.kind {
            ModelKind::LogisticRegression => vec![(k, d)],
            ModelKind::Mlp1h => vec![(h, d), (k, h)],
        };
        let mut offset = 0;
        shapes
            .into_iter()
            .map(|(out, inp)| {
                let weights = (0..out)
                    .map(|r| self.values[offset + r * inp..offset + (r + 1) * inp].to_vec())
                    .collect();
                offset += out * inp;
                let bias = self.values[offset..offset + out].to_vec();
                offset += out;
                Layer { weights, bias }
            })
            .collect()
    }

    /// Inverse of [`ModelParams::layers`].
    pub fn from_layers(arch: ArchitectureDescriptor, layers: &[Layer]) -> Result<Self> {
        let mut values = Vec::with_capacity(arch.param_count());
        for layer in layers {
            for row in &layer.weights {
                values.extend_from_slice(row);
            }
            values.extend_from_slice(&layer.bias);
        }
        Self::new(arch, values)
    }

    fn check_features(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.arch.input_dim {
            return Err(Error::input(format!(
                "feature vector has {} entries, model expects {}",
                x.len(),
                self.arch.input_dim
            )));
        }
        Ok(())
    }

    fn activations(&self, x: &[f64]) -> Activations {
        let (d, h, k) = (self.arch.input_dim, self.arch.hidden_dim, self.arch.num_classes);
        let v = &self.values;
        match self.arch.kind {
            ModelKind::LogisticRegression => {
                let bias = &v[k * d..];
                let logits = (0..k).map(|c| dot(&v[c * d..(c + 1) * d], x) + bias[c]).collect();
                Activations {
                    hidden_pre: Vec::new(),
                    hidden: Vec::new(),
                    logits,
                }
            }
            ModelKind::Mlp1h => {
                let b1 = &v[h * d..h * d + h];
                let w2 = &v[h * d + h..h * d + h + k * h];
                let b2 = &v[h * d + h + k * h..];
                let hidden_pre: Vec<f64> =
                    (0..h).map(|j| dot(&v[j * d..(j + 1) * d], x) + b1[j]).collect();
                let hidden: Vec<f64> = hidden_pre.iter().map(|&z| z.max(0.0)).collect();
                let logits = (0..k).map(|c| dot(&w2[c * h..(c + 1) * h], &hidden) + b2[c]).collect();
                Activations {
                    hidden_pre,
                    hidden,
                    logits,
                }
            }
        }
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_features(x)?;
        Ok(self.activations(x).logits)
    }

    /// Class-probability vector for one sample.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.logits(x)?))
    }

    /// Arg-max class; ties resolve to the lowest index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.logits(x)?))
    }

    /// Mean cross-entropy and its gradient over `features` (row-major,
    /// `labels.len() × input_dim`).
    pub fn loss_and_grad(&self, features: &[f64], labels: &[usize]) -> Result<GradientResult> {
        let idx: Vec<usize> = (0..labels.len()).collect();
        self.loss_and_grad_subset(features, labels, &idx)
    }

    /// Same as [`ModelParams::loss_and_grad`] restricted to the rows in `rows`.
    pub fn loss_and_grad_subset(
        &self,
        features: &[f64],
        labels: &[usize],
        rows: &[usize],
    ) -> Result<GradientResult> {
        let (d, h, k) = (self.arch.input_dim, self.arch.hidden_dim, self.arch.num_classes);
        if rows.is_empty() {
            return Err(Error::input("empty batch"));
        }
        if features.len() != labels.len() * d {
            return Err(Error::input(format!(
                "feature buffer has {} values, expected {}×{}",
                features.len(),
                labels.len(),
                d
            )));
        }
        let mut grad = vec![0.0; self.values.len()];
        let mut loss = 0.0;
        let mut dlogits = vec![0.0; k];
        for &r in rows {
            let y = *labels
                .get(r)
                .ok_or_else(|| Error::input(format!("row {r} out of range")))?;
            if y >= k {
                return Err(Error::input(format!("label {y} outside [0, {k})")));
            }
            let x = &features[r * d..(r + 1) * d];
            let act = self.activations(x);
            let lse = log_sum_exp(&act.logits);
            loss += lse - act.logits[y];
            for (c, (dl, l)) in dlogits.iter_mut().zip(&act.logits).enumerate() {
                *dl = (l - lse).exp() - if c == y { 1.0 } else { 0.0 };
            }
            match self.arch.kind {
                ModelKind::LogisticRegression => {
                    for c in 0..k {
                        let g = &mut grad[c * d..(c + 1) * d];
                        for i in 0..d {
                            g[i] += dlogits[c] * x[i];
                        }
                        grad[k * d + c] += dlogits[c];
                    }
                }
                ModelKind::Mlp1h => {
                    let w2_off = h * d + h;
                    let b2_off = w2_off + k * h;
                    for c in 0..k {
                        for j in 0..h {
                            grad[w2_off + c * h + j] += dlogits[c] * act.hidden[j];
                        }
                        grad[b2_off + c] += dlogits[c];
                    }
                    for j in 0..h {
                        // ReLU subgradient at 0 is 0.
                        if act.hidden_pre[j] <= 0.0 {
                            continue;
                        }
                        let dz: f64 = (0..k).map(|c| self.values[w2_off + c * h + j] * dlogits[c]).sum();
                        let g = &mut grad[j * d..(j + 1) * d];
                        for i in 0..d {
                            g[i] += dz * x[i];
                        }
                        grad[h * d + j] += dz;
                    }
                }
            }
        }
        let n = rows.len() as f64;
        grad.iter_mut().for_each(|g| *g /= n);
        Ok(GradientResult {
            loss: loss / n,
            param_grad: grad,
        })
    }

    /// Gradient with respect to the input of the margin
    /// `g(x) = logit_c(x) - logit_j(x)`.
    pub fn input_grad(&self, x: &[f64], c: usize, j: usize) -> Result<Vec<f64>> {
        self.check_features(x)?;
        let (d, h, k) = (self.arch.input_dim, self.arch.hidden_dim, self.arch.num_classes);
        if c >= k || j >= k || c == j {
            return Err(Error::input(format!("invalid class pair ({c}, {j}) for {k} classes")));
        }
        let v = &self.values;
        match self.arch.kind {
            ModelKind::LogisticRegression => Ok((0..d).map(|i| v[c * d + i] - v[j * d + i]).collect()),
            ModelKind::Mlp1h => {
                let act = self.activations(x);
                let w2_off = h * d + h;
                let mut out = vec![0.0; d];
                for u in 0..h {
                    if act.hidden_pre[u] <= 0.0 {
                        continue;
                    }
                    let coef = v[w2_off + c * h + u] - v[w2_off + j * h + u];
                    for i in 0..d {
                        out[i] += coef * v[u * d + i];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Mean loss and accuracy on a labelled set. Empty sets yield `(0, 0)`.
    pub fn evaluate(&self, features: &[f64], labels: &[usize]) -> Result<(f64, f64)> {
        if labels.is_empty() {
            return Ok((0.0, 0.0));
        }
        let d = self.arch.input_dim;
        let mut loss = 0.0;
        let mut correct = 0usize;
        for (r, &y) in labels.iter().enumerate() {
            let logits = self.logits(&features[r * d..(r + 1) * d])?;
            loss += log_sum_exp(&logits) - logits[y];
            let pred = argmax(&logits);
            if pred == y {
                correct += 1;
            }
        }
        let n = labels.len() as f64;
        Ok((loss / n, correct as f64 / n))
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
