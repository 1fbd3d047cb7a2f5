//! JSON and text rendering, and report comparison.

use super::TrustReport;
use crate::error::{Error, Result};
use crate::metrics::RawValue;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::input(format!("unknown format {other:?}, expected json or text"))),
        }
    }
}

fn score(s: Option<f64>) -> String {
    s.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"))
}

fn raw(r: &Option<RawValue>) -> String {
    match r {
        None => "n/a".to_string(),
        Some(RawValue::Flag(b)) => u8::from(*b).to_string(),
        Some(RawValue::Count(c)) => c.to_string(),
        Some(RawValue::Real(x)) => format!("{x:.4}"),
        Some(RawValue::Name(n)) => n.clone(),
    }
}

pub fn render(report: &TrustReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(r: &TrustReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Trust report: {}", r.preset);
    let _ = writeln!(out, "{:<40} {:>6}", "global", score(Some(r.global_score)));
    for p in &r.pillars {
        let _ = writeln!(out, "  {:<38} {:>6}", p.id.name(), score(Some(p.score)));
        for n in &p.notions {
            let _ = writeln!(out, "    {:<36} {:>6}", n.id.name(), score(n.score));
            for e in &n.metrics {
                let m = &e.value;
                let _ = writeln!(
                    out,
                    "      {:<34} {:>6}  raw {}",
                    m.id.name(),
                    score(m.normalized),
                    raw(&m.raw)
                );
            }
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub name: String,
    pub a: f64,
    pub b: f64,
    /// `b − a`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub rows: Vec<DeltaRow>,
}

/// Per-pillar and global deltas from `a` to `b`.
pub fn compare(a: &TrustReport, b: &TrustReport) -> Result<Comparison> {
    if a.schema_version != b.schema_version {
        return Err(Error::input(format!(
            "schema versions differ: {} vs {}",
            a.schema_version, b.schema_version
        )));
    }
    let mut rows = vec![DeltaRow {
        name: "global".into(),
        a: a.global_score,
        b: b.global_score,
        delta: b.global_score - a.global_score,
    }];
    for pa in &a.pillars {
        let pb = b
            .pillars
            .iter()
            .find(|p| p.id == pa.id)
            .ok_or_else(|| Error::input(format!("second report lacks pillar {}", pa.id)))?;
        rows.push(DeltaRow {
            name: pa.id.name().into(),
            a: pa.score,
            b: pb.score,
            delta: pb.score - pa.score,
        });
    }
    Ok(Comparison {
        a: a.preset.clone(),
        b: b.preset.clone(),
        rows,
    })
}

pub fn render_comparison(c: &Comparison, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(c).expect("comparison serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>8}", "", c.a, c.b, "delta");
            for r in &c.rows {
                let _ = writeln!(out, "{:<16} {:>8.2} {:>8.2} {:>+8.2}", r.name, r.a, r.b, r.delta);
            }
            out
        }
    }
}
