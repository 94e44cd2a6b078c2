//! The evaluation pipeline: weights per RAN context, scores per application,
//! composed bottom-up into the network metric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{NetworkConfiguration, Ran, RanWeighting};
use crate::error::{Error, Result};
use crate::fahp::{analyze, ExtentAnalysis};
use crate::fuzzy::ImportanceLevel;
use crate::measurements::MeasurementSet;
use crate::qos::{application_metric, network_metric, normalize_parameter, ran_metric, Parameter};
use crate::report::{
    ApplicationQos, EvaluationReport, MetricDelta, MetricSource, ParameterQos, RanQos,
    WeightSource, WhatIfDeltas, WhatIfReport, REPORT_SCHEMA_VERSION,
};
use crate::rules::{
    build_application_matrix, AppContext, ApplicationMatrix, Judgment, JudgmentOverride,
};
use crate::weights::{normalize, RawWeights, WeightVector};

/// Evaluates one measurement window. Applications without measurements (or an
/// injected metric) are left out of their RAN entirely.
pub fn evaluate(
    cfg: &NetworkConfiguration,
    measurements: &MeasurementSet,
) -> Result<EvaluationReport> {
    let mut warnings = Vec::new();
    let mut rans = Vec::with_capacity(cfg.rans.len());
    for ran in &cfg.rans {
        rans.push(evaluate_ran(cfg, ran, measurements, &mut warnings)?);
    }

    let (ran_weights, ran_weight_source) = ran_weights(cfg, &rans)?;
    let metrics: Vec<(&str, f64)> = rans.iter().map(|r| (r.id.as_str(), r.qosrm)).collect();
    let (qoscm, level) = network_metric(&metrics, &ran_weights, &cfg.thresholds)?;
    for (id, w) in ran_weights.iter() {
        if w == 0.0 {
            warnings.push(format!("RAN `{id}` received weight 0"));
        }
    }

    Ok(EvaluationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        network: cfg.network.clone(),
        thresholds: cfg.thresholds,
        rans,
        ran_weights,
        ran_weight_source,
        qoscm,
        level,
        warnings,
    })
}

fn evaluate_ran(
    cfg: &NetworkConfiguration,
    ran: &Ran,
    measurements: &MeasurementSet,
    warnings: &mut Vec<String>,
) -> Result<RanQos> {
    let mut apps = Vec::new();
    for app in &ran.applications {
        let injected = cfg.injected_metric(&ran.id, &app.id);
        let measured = measurements.for_app(&ran.id, &app.id);
        let (source, parameters, qosam) = match (injected, measured) {
            (Some(v), _) => (MetricSource::Injected, Vec::new(), v),
            (None, Some(params)) => {
                let mut scored = Vec::new();
                let profiles = cfg.profiles_for(app.class);
                for (&parameter, agg) in params {
                    match profiles.get(&parameter) {
                        Some(profile) => {
                            let score = normalize_parameter(parameter, agg.mean, profile)?;
                            scored.push((parameter, agg, score));
                        }
                        None => warnings.push(format!(
                            "{}/{}: no {} profile for class {}, parameter dropped",
                            ran.id, app.id, parameter, app.class
                        )),
                    }
                }
                let all_weights = cfg.parameter_weight_vector(app.class)?;
                scored.retain(|(p, _, _)| {
                    let keep = all_weights.get(p.name()).is_some();
                    if !keep {
                        warnings.push(format!(
                            "{}/{}: no weight for {}, parameter dropped",
                            ran.id, app.id, p
                        ));
                    }
                    keep
                });
                let present: Vec<&str> = scored.iter().map(|(p, _, _)| p.name()).collect();
                if present.is_empty() {
                    return Err(Error::Measurement {
                        row: 0,
                        message: format!(
                            "application `{}` in RAN `{}` has no scorable parameters",
                            app.id, ran.id
                        ),
                    });
                }
                let missing: Vec<&str> =
                    all_weights.ids().filter(|p| !present.contains(p)).collect();
                if !missing.is_empty() {
                    warnings.push(format!(
                        "{}/{}: missing {}, remaining parameter weights renormalized",
                        ran.id,
                        app.id,
                        missing.join(", ")
                    ));
                }
                let weights = all_weights.restrict(&present)?;
                let scores: Vec<(Parameter, f64)> =
                    scored.iter().map(|(p, _, s)| (*p, *s)).collect();
                let qosam = application_metric(&scores, &weights)?;
                let parameters = scored
                    .iter()
                    .map(|(p, agg, score)| ParameterQos {
                        parameter: *p,
                        unit: p.unit(),
                        mean: agg.mean,
                        samples: agg.samples,
                        score: *score,
                        weight: weights.get(p.name()).unwrap_or_default(),
                    })
                    .collect();
                (MetricSource::Measured, parameters, qosam)
            }
            (None, None) => continue,
        };
        apps.push((app, source, parameters, qosam));
    }
    if apps.is_empty() {
        return Err(Error::EmptyRan(ran.id.clone()));
    }

    let contexts: Vec<AppContext> = apps
        .iter()
        .map(|(a, ..)| AppContext::new(a.id.clone(), a.category.clone(), a.users))
        .collect();
    let (app_weights, weight_source, matrix, analysis) = app_weights(cfg, &ran.id, &contexts)?;
    for (id, w) in app_weights.iter() {
        if w == 0.0 {
            warnings.push(format!("{}/{id}: application received weight 0", ran.id));
        }
    }

    let metrics: Vec<(&str, f64)> = apps
        .iter()
        .map(|(a, _, _, q)| (a.id.as_str(), *q))
        .collect();
    let qosrm = ran_metric(&metrics, &app_weights)?;
    let applications = apps
        .into_iter()
        .map(|(a, source, parameters, qosam)| {
            Ok(ApplicationQos {
                id: a.id.clone(),
                class: a.class,
                category: a.category.clone(),
                users: a.users,
                source,
                parameters,
                qosam,
                level: cfg.thresholds.classify(qosam)?,
                weight: app_weights.get(&a.id).unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RanQos {
        id: ran.id.clone(),
        technology: ran.technology,
        applications,
        app_weights,
        weight_source,
        matrix,
        analysis,
        qosrm,
        level: cfg.thresholds.classify(qosrm)?,
    })
}

type AppWeights = (
    WeightVector,
    WeightSource,
    Option<ApplicationMatrix>,
    Option<ExtentAnalysis>,
);

/// Application weights for one RAN over the given applications.
fn app_weights(cfg: &NetworkConfiguration, ran: &str, apps: &[AppContext]) -> Result<AppWeights> {
    if let Some(explicit) = cfg.overrides.app_weights.get(ran) {
        let raw = RawWeights::new(
            apps.iter()
                .map(|a| (a.id.clone(), explicit.get(&a.id).copied().unwrap_or(0.0)))
                .collect(),
        )?;
        return Ok((normalize(&raw)?, WeightSource::Override, None, None));
    }
    if apps.len() == 1 {
        let w = WeightVector::new(vec![(apps[0].id.clone(), 1.0)])?;
        return Ok((w, WeightSource::Single, None, None));
    }
    let built = build_application_matrix(apps, &cfg.weight_rules, Some(ran))?;
    let analysis = analyze(&built.matrix)?;
    Ok((
        analysis.weights.clone(),
        WeightSource::Derived,
        Some(built),
        Some(analysis),
    ))
}

fn ran_weights(
    cfg: &NetworkConfiguration,
    rans: &[RanQos],
) -> Result<(WeightVector, WeightSource)> {
    let ids = rans.iter().map(|r| r.id.clone());
    if !cfg.overrides.ran_weights.is_empty() {
        let raw = RawWeights::new(
            ids.map(|id| {
                let w = cfg.overrides.ran_weights.get(&id).copied().unwrap_or(0.0);
                (id, w)
            })
            .collect(),
        )?;
        return Ok((normalize(&raw)?, WeightSource::Override));
    }
    if rans.len() == 1 {
        return Ok((
            WeightVector::new(vec![(rans[0].id.clone(), 1.0)])?,
            WeightSource::Single,
        ));
    }
    match cfg.ran_weighting {
        RanWeighting::Uniform => Ok((WeightVector::uniform(ids)?, WeightSource::Uniform)),
        RanWeighting::Users => {
            let raw = RawWeights::new(
                rans.iter()
                    .map(|r| {
                        (
                            r.id.clone(),
                            r.applications.iter().map(|a| a.users as f64).sum(),
                        )
                    })
                    .collect(),
            )?;
            Ok((normalize(&raw)?, WeightSource::Users))
        }
    }
}

/// A pairwise importance judgment to apply in a what-if run:
/// `app` is `level` more important than `over`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Directive {
    pub app: String,
    pub level: ImportanceLevel,
    pub over: String,
}

impl Directive {
    pub fn new(app: impl Into<String>, level: &str, over: impl Into<String>) -> Result<Self> {
        Ok(Directive {
            app: app.into(),
            level: level.parse()?,
            over: over.into(),
        })
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({}) over {}",
            self.app,
            self.level,
            self.level.label(),
            self.over
        )
    }
}

impl FromStr for Directive {
    type Err = Error;

    /// `"<app> <scale> <app>"`, e.g. `"voice extreme-over vs"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            [app, level, over] => Directive::new(*app, level, *over),
            _ => Err(Error::InvalidDirective(format!(
                "expected `<app> <scale> <app>`, got `{s}`"
            ))),
        }
    }
}

// Applies the directive as a cell-level override in every RAN holding both
// applications, replacing earlier judgments of the same pair there.
fn apply_directive(
    cfg: &NetworkConfiguration,
    d: &Directive,
) -> Result<(NetworkConfiguration, Vec<String>)> {
    for id in [&d.app, &d.over] {
        if !cfg.has_application(id) {
            return Err(Error::UnknownApplication(id.clone()));
        }
    }
    if d.app == d.over {
        return Err(Error::InvalidDirective(format!(
            "`{}` compared with itself",
            d.app
        )));
    }
    let shared: Vec<&Ran> = cfg
        .rans
        .iter()
        .filter(|r| r.application(&d.app).is_some() && r.application(&d.over).is_some())
        .collect();
    if shared.is_empty() {
        return Err(Error::InvalidDirective(format!(
            "`{}` and `{}` never share a RAN",
            d.app, d.over
        )));
    }

    let mut modified = cfg.clone();
    let mut notes = Vec::new();
    let same_pair = |o: &JudgmentOverride| {
        (o.app == d.app && o.over == d.over) || (o.app == d.over && o.over == d.app)
    };
    modified
        .weight_rules
        .overrides
        .retain(|o| !(o.criterion.is_none() && same_pair(o)));
    for ran in &shared {
        if modified.overrides.app_weights.remove(&ran.id).is_some() {
            notes.push(format!(
                "{}: explicit application weights dropped so the directive takes effect",
                ran.id
            ));
        }
        modified.weight_rules.overrides.push(JudgmentOverride {
            app: d.app.clone(),
            over: d.over.clone(),
            criterion: None,
            judgment: Judgment::Scale(d.level),
            ran: Some(ran.id.clone()),
        });
    }
    Ok((modified, notes))
}

/// Evaluates the baseline and the configuration modified by `directive`.
pub fn whatif(
    cfg: &NetworkConfiguration,
    measurements: &MeasurementSet,
    directive: &Directive,
) -> Result<WhatIfReport> {
    let (modified_cfg, notes) = apply_directive(cfg, directive)?;
    let baseline = evaluate(cfg, measurements)?;
    let mut modified = evaluate(&modified_cfg, measurements)?;
    modified.warnings.extend(notes);

    let rans = baseline
        .rans
        .iter()
        .zip(&modified.rans)
        .map(|(b, m)| MetricDelta::new(b.id.clone(), b.qosrm, m.qosrm))
        .collect();
    let app_weights = baseline
        .rans
        .iter()
        .zip(&modified.rans)
        .flat_map(|(b, m)| {
            b.applications.iter().map(move |a| {
                MetricDelta::new(
                    format!("{}/{}", b.id, a.id),
                    a.weight,
                    m.app_weights.get(&a.id).unwrap_or_default(),
                )
            })
        })
        .collect();
    let deltas = WhatIfDeltas {
        network: MetricDelta::new(baseline.network.clone(), baseline.qoscm, modified.qoscm),
        rans,
        app_weights,
    };
    Ok(WhatIfReport {
        schema_version: REPORT_SCHEMA_VERSION,
        directive: directive.to_string(),
        baseline,
        modified,
        deltas,
    })
}

/// Weights each RAN would assign if every configured application were active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RanWeights {
    pub ran: String,
    pub weights: WeightVector,
    pub source: WeightSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ApplicationMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<ExtentAnalysis>,
}

pub fn weights_overview(cfg: &NetworkConfiguration) -> Result<Vec<RanWeights>> {
    cfg.rans
        .iter()
        .map(|ran| {
            let apps: Vec<AppContext> = ran
                .applications
                .iter()
                .map(|a| AppContext::new(a.id.clone(), a.category.clone(), a.users))
                .collect();
            let (weights, source, matrix, analysis) = app_weights(cfg, &ran.id, &apps)?;
            Ok(RanWeights {
                ran: ran.id.clone(),
                weights,
                source,
                matrix,
                analysis,
            })
        })
        .collect()
}
