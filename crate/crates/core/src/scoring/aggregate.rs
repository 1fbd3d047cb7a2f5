//! Weighted roll-up metric → notion → pillar → global.

use crate::error::{Error, Result};
use crate::metrics::{MetricId, MetricValue, Notion, Pillar, TAXONOMY};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Relative weights per level. Missing entries default to 1; each group is
/// renormalized over its available members.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    #[serde(default)]
    pub metrics: BTreeMap<MetricId, f64>,
    #[serde(default)]
    pub notions: BTreeMap<Notion, f64>,
    #[serde(default)]
    pub pillars: BTreeMap<Pillar, f64>,
}

impl WeightConfig {
    pub fn validate(&self) -> Result<()> {
        let all = self
            .metrics
            .values()
            .chain(self.notions.values())
            .chain(self.pillars.values());
        for &w in all {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::config(format!("weights must be nonnegative and finite, got {w}")));
            }
        }
        Ok(())
    }

    pub fn metric(&self, id: MetricId) -> f64 {
        self.metrics.get(&id).copied().unwrap_or(1.0)
    }

    pub fn notion(&self, id: Notion) -> f64 {
        self.notions.get(&id).copied().unwrap_or(1.0)
    }

    pub fn pillar(&self, id: Pillar) -> f64 {
        self.pillars.get(&id).copied().unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricEntry {
    #[serde(flatten)]
    pub value: MetricValue,
    /// Share of the notion score; 0 when unavailable.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotionScore {
    pub id: Notion,
    pub score: Option<f64>,
    pub weight: f64,
    pub available: bool,
    pub metrics: Vec<MetricEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PillarScore {
    pub id: Pillar,
    pub score: f64,
    pub weight: f64,
    pub notions: Vec<NotionScore>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTree {
    pub global_score: f64,
    pub pillars: Vec<PillarScore>,
}

/// `Σ wᵢ sᵢ / Σ wᵢ` and the normalized shares, or `None` when no weight is
/// positive.
fn weighted_mean(items: &[(f64, f64)]) -> Option<(f64, Vec<f64>)> {
    let total: f64 = items.iter().map(|(w, _)| w).sum();
    if total <= 0.0 {
        return None;
    }
    let mean = items.iter().map(|(w, s)| w * s).sum::<f64>() / total;
    Some((mean, items.iter().map(|(w, _)| w / total).collect()))
}

/// Roll normalized metrics up the fixed taxonomy. Metrics that are
/// unavailable (or absent from `metrics`) drop out of their notion, empty
/// notions drop out of their pillar, and an empty pillar is an error.
pub fn aggregate(metrics: &[MetricValue], weights: &WeightConfig) -> Result<ScoreTree> {
    weights.validate()?;
    let by_id: BTreeMap<MetricId, &MetricValue> = metrics.iter().map(|m| (m.id, m)).collect();

    let mut pillars = Vec::with_capacity(TAXONOMY.len());
    for &(pillar, notions) in TAXONOMY {
        let mut notion_scores = Vec::with_capacity(notions.len());
        for &(notion, ids) in notions {
            let mut entries: Vec<MetricEntry> = ids
                .iter()
                .filter_map(|id| by_id.get(id))
                .map(|&m| MetricEntry { value: m.clone(), weight: 0.0 })
                .collect();
            let live: Vec<usize> = (0..entries.len())
                .filter(|&i| entries[i].value.available && entries[i].value.normalized.is_some())
                .collect();
            let items: Vec<(f64, f64)> = live
                .iter()
                .map(|&i| (weights.metric(entries[i].value.id), entries[i].value.normalized.unwrap()))
                .collect();
            let rolled = if live.is_empty() {
                None
            } else {
                let r = weighted_mean(&items)
                    .ok_or_else(|| Error::config(format!("notion {notion} has no positive metric weight")))?;
                Some(r)
            };
            let score = rolled.as_ref().map(|(s, shares)| {
                for (&i, &share) in live.iter().zip(shares) {
                    entries[i].weight = share;
                }
                *s
            });
            notion_scores.push(NotionScore {
                id: notion,
                score,
                weight: 0.0,
                available: score.is_some(),
                metrics: entries,
            });
        }

        let live: Vec<usize> = (0..notion_scores.len()).filter(|&i| notion_scores[i].available).collect();
        if live.is_empty() {
            return Err(Error::unavailable(pillar.name(), "pillar has no available metric"));
        }
        let items: Vec<(f64, f64)> = live
            .iter()
            .map(|&i| (weights.notion(notion_scores[i].id), notion_scores[i].score.unwrap()))
            .collect();
        let (score, shares) = weighted_mean(&items)
            .ok_or_else(|| Error::config(format!("pillar {pillar} has no positive notion weight")))?;
        for (&i, share) in live.iter().zip(shares) {
            notion_scores[i].weight = share;
        }
        pillars.push(PillarScore {
            id: pillar,
            score,
            weight: 0.0,
            notions: notion_scores,
        });
    }

    let items: Vec<(f64, f64)> = pillars.iter().map(|p| (weights.pillar(p.id), p.score)).collect();
    let (global_score, shares) =
        weighted_mean(&items).ok_or_else(|| Error::config("no positive pillar weight"))?;
    for (p, share) in pillars.iter_mut().zip(shares) {
        p.weight = share;
    }
    Ok(ScoreTree { global_score, pillars })
}
