//! Raw metric value → score in [0, 1].

use crate::error::{Error, Result};
use crate::metrics::{MetricId, RawValue};

/// Fixed scores of the supported aggregation algorithms.
pub const AGGREGATION_SCORES: &[(&str, f64)] = &[
    ("FedAvg", 0.8493),
    ("FedOpt", 0.8492),
    ("FedProx", 0.8477),
    ("FedBN", 0.8548),
    ("pFedMe", 0.8765),
    ("Ditto", 0.8661),
    ("FedEM", 0.8479),
];

/// Parameter-count bin edges for model size.
pub const MODEL_SIZE_BREAKPOINTS: [f64; 11] =
    [1.0, 10.0, 50.0, 100.0, 500.0, 1e3, 5e3, 1e4, 5e4, 1e5, 5e5];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NormalizeOptions {
    /// Reward large models instead of small ones.
    pub model_size_literal: bool,
}

/// A score plus an optional note when the raw value was outside its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub score: f64,
    pub warning: Option<String>,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

pub fn aggregation_score(name: &str) -> Result<f64> {
    AGGREGATION_SCORES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, s)| s)
        .ok_or_else(|| Error::input(format!("unsupported aggregation algorithm {name:?}")))
}

/// `raw/4` floored to the 0.05 grid. The epsilon keeps raw values that sit on
/// a grid point up to rounding error in their own bin.
pub fn clever_score(raw: f64) -> f64 {
    let k = (raw * 5.0 + 1e-9).floor().clamp(0.0, 20.0);
    k / 20.0
}

/// Log-decade bins: below 100 clients scores 0, each further decade adds 0.2.
pub fn federation_scale_score(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let decade = n.ilog10() as f64;
    clamp_unit((decade - 1.0) * 0.2)
}

/// Inverted by default: one parameter scores 1.0, each breakpoint strictly
/// below `n` costs 0.1.
pub fn model_size_score(n: u64, literal: bool) -> f64 {
    let k = MODEL_SIZE_BREAKPOINTS.iter().filter(|&&b| b < n as f64).count().min(10);
    if literal {
        k as f64 / 10.0
    } else {
        (10 - k) as f64 / 10.0
    }
}

pub fn transparency_score(raw: f64) -> f64 {
    clamp_unit((raw - 1.0) / 4.0)
}

/// `1 − clamp(cv, 0, 1)`.
pub fn dispersion_score(cv: f64) -> f64 {
    1.0 - clamp_unit(cv)
}

fn flag(id: MetricId, raw: &RawValue) -> Result<bool> {
    match raw {
        RawValue::Flag(b) => Ok(*b),
        RawValue::Count(c @ (0 | 1)) => Ok(*c == 1),
        other => Err(mismatch(id, "a flag", other)),
    }
}

fn real(id: MetricId, raw: &RawValue) -> Result<f64> {
    match raw {
        RawValue::Real(x) if !x.is_nan() => Ok(*x),
        RawValue::Count(c) => Ok(*c as f64),
        other => Err(mismatch(id, "a number", other)),
    }
}

fn count(id: MetricId, raw: &RawValue) -> Result<u64> {
    match raw {
        RawValue::Count(c) => Ok(*c),
        RawValue::Real(x) if *x >= 0.0 && x.fract() == 0.0 => Ok(*x as u64),
        other => Err(mismatch(id, "a count", other)),
    }
}

fn mismatch(id: MetricId, want: &str, got: &RawValue) -> Error {
    Error::input(format!("metric {id} expects {want}, got {got:?}"))
}

/// Clamp `x` into `[lo, hi]`, noting a warning when that changed it.
fn in_domain(id: MetricId, x: f64, lo: f64, hi: f64, warning: &mut Option<String>) -> f64 {
    if x < lo || x > hi {
        *warning = Some(format!("{id}: raw value {x} outside [{lo}, {hi}], clamped"));
        x.clamp(lo, hi)
    } else {
        x
    }
}

pub fn normalize(id: MetricId, raw: &RawValue, options: NormalizeOptions) -> Result<Normalized> {
    use MetricId::*;
    let mut warning = None;
    let score = match id {
        DifferentialPrivacy | Personalization | ClientSelector | Project | Participants | Data
        | Configuration | System => {
            if flag(id, raw)? {
                1.0
            } else {
                0.0
            }
        }
        Entropy | Performance | ClassImbalance => in_domain(id, real(id, raw)?, 0.0, 1.0, &mut warning),
        GlobalPrivacyRisk => 1.0 - in_domain(id, real(id, raw)?, 0.0, 1.0, &mut warning),
        CertifiedRobustness => {
            clever_score(in_domain(id, real(id, raw)?, 0.0, f64::INFINITY, &mut warning))
        }
        FederationScale => federation_scale_score(count(id, raw)?),
        ParticipationVariation | AccuracyVariation | FeatureImportance => {
            dispersion_score(in_domain(id, real(id, raw)?, 0.0, f64::INFINITY, &mut warning))
        }
        DiscriminationIndex => 1.0 - in_domain(id, real(id, raw)?, -1.0, 1.0, &mut warning).abs(),
        AlgorithmicTransparency => transparency_score(in_domain(id, real(id, raw)?, 1.0, 5.0, &mut warning)),
        ModelSize => model_size_score(count(id, raw)?, options.model_size_literal),
        AggregationAlgorithm => match raw {
            RawValue::Name(name) => aggregation_score(name)?,
            other => return Err(mismatch(id, "an algorithm name", other)),
        },
    };
    debug_assert!((0.0..=1.0).contains(&score));
    Ok(Normalized { score, warning })
}
