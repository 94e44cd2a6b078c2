//! Evaluation reports and their text / JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Technology;
use crate::error::Result;
use crate::evaluate::RanWeights;
use crate::fahp::ExtentAnalysis;
use crate::qos::{AppClass, Parameter, QosLevel, Thresholds, Unit};
use crate::rules::ApplicationMatrix;
use crate::weights::WeightVector;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Tolerance for the values printed as "no change" in what-if comparisons.
pub const DELTA_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightSource {
    /// Extent analysis over the rule-built comparison matrix.
    Derived,
    /// Explicit weights from the configuration.
    Override,
    /// Equal weights.
    Uniform,
    /// Proportional to user counts.
    Users,
    /// Only one child, weight 1.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricSource {
    Measured,
    Injected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterQos {
    pub parameter: Parameter,
    pub unit: Unit,
    pub mean: f64,
    pub samples: usize,
    pub score: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicationQos {
    pub id: String,
    pub class: AppClass,
    pub category: String,
    pub users: u64,
    pub source: MetricSource,
    pub parameters: Vec<ParameterQos>,
    pub qosam: f64,
    pub level: QosLevel,
    /// Weight of this application within its RAN.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RanQos {
    pub id: String,
    pub technology: Technology,
    pub applications: Vec<ApplicationQos>,
    pub app_weights: WeightVector,
    pub weight_source: WeightSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ApplicationMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<ExtentAnalysis>,
    pub qosrm: f64,
    pub level: QosLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub network: String,
    pub thresholds: Thresholds,
    pub rans: Vec<RanQos>,
    pub ran_weights: WeightVector,
    pub ran_weight_source: WeightSource,
    pub qoscm: f64,
    pub level: QosLevel,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl EvaluationReport {
    pub fn ran(&self, id: &str) -> Option<&RanQos> {
        self.rans.iter().find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Recomputes every layer from the report's own weights and child values.
    /// Returns a description of each mismatch larger than `tol`.
    pub fn consistency_errors(&self, tol: f64) -> Vec<String> {
        let mut errors = Vec::new();
        let check = |errors: &mut Vec<String>, what: String, reported: f64, recomputed: f64| {
            // NaN-safe: a missing weight shows up as NaN and must fail
            let within = (reported - recomputed).abs() <= tol;
            if !within {
                errors.push(format!(
                    "{what}: reported {reported}, recomputed {recomputed}"
                ));
            }
        };
        let level_of = |score: f64| self.thresholds.classify(score).ok();
        for ran in &self.rans {
            for app in &ran.applications {
                if app.source == MetricSource::Measured {
                    let sum: f64 = app.parameters.iter().map(|p| p.weight * p.score).sum();
                    check(
                        &mut errors,
                        format!("{}/{} qosam", ran.id, app.id),
                        app.qosam,
                        sum,
                    );
                    let wsum: f64 = app.parameters.iter().map(|p| p.weight).sum();
                    check(
                        &mut errors,
                        format!("{}/{} parameter weights", ran.id, app.id),
                        wsum,
                        1.0,
                    );
                }
                check(
                    &mut errors,
                    format!("{}/{} weight", ran.id, app.id),
                    app.weight,
                    ran.app_weights.get(&app.id).unwrap_or(f64::NAN),
                );
                if level_of(app.qosam) != Some(app.level) {
                    errors.push(format!("{}/{} level", ran.id, app.id));
                }
            }
            let sum: f64 = ran
                .applications
                .iter()
                .map(|a| ran.app_weights.get(&a.id).unwrap_or(f64::NAN) * a.qosam)
                .sum();
            check(&mut errors, format!("{} qosrm", ran.id), ran.qosrm, sum);
            check(
                &mut errors,
                format!("{} app weights", ran.id),
                ran.app_weights.sum(),
                1.0,
            );
            if ran.app_weights.len() != ran.applications.len() {
                errors.push(format!("{} app weights cover other applications", ran.id));
            }
            if level_of(ran.qosrm) != Some(ran.level) {
                errors.push(format!("{} level", ran.id));
            }
        }
        let sum: f64 = self
            .rans
            .iter()
            .map(|r| self.ran_weights.get(&r.id).unwrap_or(f64::NAN) * r.qosrm)
            .sum();
        check(&mut errors, "network qoscm".into(), self.qoscm, sum);
        check(
            &mut errors,
            "ran weights".into(),
            self.ran_weights.sum(),
            1.0,
        );
        if level_of(self.qoscm) != Some(self.level) {
            errors.push("network level".into());
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn render_report(report: &EvaluationReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => render_text(report),
    }
}

fn render_text(r: &EvaluationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "network {}: QoSCM {:.3} {}  (RAN weights: {})",
        r.network,
        r.qoscm,
        r.level,
        r.ran_weight_source.label()
    );
    for ran in &r.rans {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "RAN {} ({}) weight {:.3}: QoSRM {:.3} {}  (application weights: {})",
            ran.id,
            ran.technology,
            r.ran_weights.get(&ran.id).unwrap_or_default(),
            ran.qosrm,
            ran.level,
            ran.weight_source.label()
        );
        let width = ran
            .applications
            .iter()
            .map(|a| a.id.len())
            .max()
            .unwrap_or(0)
            .max("application".len());
        let _ = writeln!(
            out,
            "  {:<width$}  {:<6}  {:>6}  {:>6}  level",
            "application", "class", "weight", "QoSAM"
        );
        for app in &ran.applications {
            let _ = writeln!(
                out,
                "  {:<width$}  {:<6}  {:>6.3}  {:>6.3}  {}{}",
                app.id,
                app.class.name(),
                app.weight,
                app.qosam,
                app.level,
                if app.source == MetricSource::Injected {
                    "  (injected)"
                } else {
                    ""
                }
            );
            for p in &app.parameters {
                let _ = writeln!(
                    out,
                    "  {:<width$}    {:<11} {:>9.3} {:<7} score {:.3}  weight {:.3}",
                    "",
                    p.parameter.name(),
                    p.mean,
                    p.unit.name(),
                    p.score,
                    p.weight
                );
            }
        }
    }
    out
}

impl WeightSource {
    pub fn label(self) -> &'static str {
        match self {
            WeightSource::Derived => "derived",
            WeightSource::Override => "override",
            WeightSource::Uniform => "uniform",
            WeightSource::Users => "users",
            WeightSource::Single => "single",
        }
    }
}

/// Change of one metric between two evaluations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub id: String,
    pub baseline: f64,
    pub modified: f64,
    pub delta: f64,
}

impl MetricDelta {
    pub fn new(id: impl Into<String>, baseline: f64, modified: f64) -> Self {
        MetricDelta {
            id: id.into(),
            baseline,
            modified,
            delta: modified - baseline,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.abs() <= DELTA_EPSILON
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfDeltas {
    pub network: MetricDelta,
    pub rans: Vec<MetricDelta>,
    /// Application weight changes, keyed `ran/app`.
    pub app_weights: Vec<MetricDelta>,
}

impl WhatIfDeltas {
    pub fn is_unchanged(&self) -> bool {
        self.network.is_zero()
            && self.rans.iter().all(MetricDelta::is_zero)
            && self.app_weights.iter().all(MetricDelta::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfReport {
    pub schema_version: u32,
    pub directive: String,
    pub baseline: EvaluationReport,
    pub modified: EvaluationReport,
    pub deltas: WhatIfDeltas,
}

pub fn render_whatif(report: &WhatIfReport, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(report).expect("report serializes");
    }
    let mut out = String::new();
    let d = &report.deltas;
    let _ = writeln!(out, "what-if: {}", report.directive);
    if d.is_unchanged() {
        let _ = writeln!(out, "no change");
    }
    let _ = writeln!(
        out,
        "network {}: QoSCM {:.3} {} -> {:.3} {}  (delta {:+.3})",
        report.baseline.network,
        d.network.baseline,
        report.baseline.level,
        d.network.modified,
        report.modified.level,
        d.network.delta
    );
    for (delta, (before, after)) in d
        .rans
        .iter()
        .zip(report.baseline.rans.iter().zip(&report.modified.rans))
    {
        let _ = writeln!(
            out,
            "RAN {}: QoSRM {:.3} {} -> {:.3} {}  (delta {:+.3})",
            delta.id, delta.baseline, before.level, delta.modified, after.level, delta.delta
        );
    }
    for w in d.app_weights.iter().filter(|w| !w.is_zero()) {
        let _ = writeln!(
            out,
            "  weight {}: {:.3} -> {:.3}  (delta {:+.3})",
            w.id, w.baseline, w.modified, w.delta
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "--- baseline");
    out.push_str(&render_text(&report.baseline));
    let _ = writeln!(out);
    let _ = writeln!(out, "--- modified");
    out.push_str(&render_text(&report.modified));
    out
}

/// Renders the per-RAN comparison matrices and weight vectors.
pub fn render_weights(overview: &[RanWeights], format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(overview).expect("weights serialize");
    }
    let mut out = String::new();
    for (k, ran) in overview.iter().enumerate() {
        if k > 0 {
            let _ = writeln!(out);
        }
        let _ = writeln!(
            out,
            "RAN {}  (application weights: {})",
            ran.ran,
            ran.source.label()
        );
        let width = ran.weights.ids().map(str::len).max().unwrap_or(0);
        if let Some(m) = &ran.matrix {
            let matrix = &m.matrix;
            let _ = writeln!(out, "  comparison matrix:");
            for (i, id) in matrix.alternatives().iter().enumerate() {
                let cells: Vec<String> = (0..matrix.len())
                    .map(|j| format!("{:.3}", matrix.cell(i, j)))
                    .collect();
                let _ = writeln!(out, "    {id:<width$}  {}", cells.join("  "));
            }
        }
        if let Some(a) = &ran.analysis {
            let _ = writeln!(out, "  synthetic extents:");
            for e in &a.extents {
                let _ = writeln!(out, "    {:<width$}  {:.4}", e.alternative, e.extent);
            }
        }
        let _ = writeln!(out, "  weights:");
        for (id, w) in ran.weights.iter() {
            match ran.analysis.as_ref().and_then(|a| a.raw.get(id)) {
                Some(raw) => {
                    let _ = writeln!(out, "    {id:<width$}  {w:.3}  (raw {raw:.3})");
                }
                None => {
                    let _ = writeln!(out, "    {id:<width$}  {w:.3}");
                }
            }
        }
    }
    out
}
