//! Normalization, weighted aggregation and the trust report.

mod aggregate;
mod normalize;
mod render;

pub use aggregate::{aggregate, MetricEntry, NotionScore, PillarScore, ScoreTree, WeightConfig};
pub use normalize::{
    aggregation_score, clever_score, dispersion_score, federation_scale_score, model_size_score, normalize,
    transparency_score, NormalizeOptions, Normalized, AGGREGATION_SCORES, MODEL_SIZE_BREAKPOINTS,
};
pub use render::{compare, render, render_comparison, Comparison, DeltaRow, Format};

use crate::error::Result;
use crate::metrics::MetricValue;
use crate::sim::FederationConfig;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: &str = "1.0";

/// Wall-clock facts; excluded when reports are compared for reproducibility.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportTiming {
    pub generated_at_unix_s: u64,
    pub avg_training_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustReport {
    pub schema_version: String,
    pub preset: String,
    pub global_score: f64,
    pub pillars: Vec<PillarScore>,
    pub warnings: Vec<String>,
    pub config: FederationConfig,
    pub weights: WeightConfig,
    pub factsheet_digest: String,
    pub timing: ReportTiming,
}

/// Fill `normalized` on every available metric. Out-of-domain raw values are
/// clamped and reported in the returned warnings.
pub fn normalize_all(metrics: &mut [MetricValue], options: NormalizeOptions) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    for m in metrics.iter_mut() {
        m.normalized = None;
        if !m.available {
            continue;
        }
        let Some(raw) = &m.raw else { continue };
        let n = normalize(m.id, raw, options)?;
        m.normalized = Some(n.score);
        warnings.extend(n.warning);
    }
    Ok(warnings)
}

/// Everything besides the metrics that goes into a report.
#[derive(Debug, Clone)]
pub struct ReportContext {
    pub preset: String,
    pub config: FederationConfig,
    pub weights: WeightConfig,
    pub factsheet_digest: String,
    pub timing: ReportTiming,
    pub options: NormalizeOptions,
}

pub fn build_report(mut metrics: Vec<MetricValue>, ctx: ReportContext) -> Result<TrustReport> {
    let warnings = normalize_all(&mut metrics, ctx.options)?;
    let tree = aggregate(&metrics, &ctx.weights)?;
    Ok(TrustReport {
        schema_version: REPORT_SCHEMA_VERSION.to_string(),
        preset: ctx.preset,
        global_score: tree.global_score,
        pillars: tree.pillars,
        warnings,
        config: ctx.config,
        weights: ctx.weights,
        factsheet_digest: ctx.factsheet_digest,
        timing: ctx.timing,
    })
}

impl TrustReport {
    pub fn pillar_score(&self, id: crate::metrics::Pillar) -> Option<f64> {
        self.pillars.iter().find(|p| p.id == id).map(|p| p.score)
    }

    pub fn metric(&self, id: crate::metrics::MetricId) -> Option<&MetricValue> {
        self.pillars
            .iter()
            .flat_map(|p| &p.notions)
            .flat_map(|n| &n.metrics)
            .map(|e| &e.value)
            .find(|m| m.id == id)
    }

    /// Copy with wall-clock fields zeroed.
    pub fn without_timing(&self) -> TrustReport {
        TrustReport {
            timing: ReportTiming::default(),
            ..self.clone()
        }
    }
}
