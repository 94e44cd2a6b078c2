//! Network configuration: RANs, their applications, and evaluation policy.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qos::{default_parameter_weights, AppClass, Parameter, ProfileSet, Thresholds};
use crate::rules::WeightRuleConfig;
use crate::weights::{normalize, RawWeights, WeightVector};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Technology {
    #[serde(rename = "UMTS")]
    Umts,
    #[serde(rename = "WiMAX")]
    Wimax,
    #[serde(rename = "LTE")]
    Lte,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technology::Umts => "UMTS",
            Technology::Wimax => "WiMAX",
            Technology::Lte => "LTE",
            Technology::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Application {
    pub id: String,
    pub class: AppClass,
    pub category: String,
    pub users: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ran {
    pub id: String,
    pub technology: Technology,
    pub applications: Vec<Application>,
}

impl Ran {
    pub fn application(&self, id: &str) -> Option<&Application> {
        self.applications.iter().find(|a| a.id == id)
    }
}

/// How RAN weights are chosen when not overridden.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RanWeighting {
    #[default]
    Uniform,
    /// Proportional to the users of each RAN's measured applications.
    Users,
}

/// Explicit values that bypass derivation at any layer.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// RAN id to weight; normalized on load.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ran_weights: BTreeMap<String, f64>,
    /// RAN id to application weights; normalized over the measured applications.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub app_weights: BTreeMap<String, BTreeMap<String, f64>>,
    /// RAN id to application metrics injected in place of measurements.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub app_metrics: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfiguration {
    pub schema_version: u32,
    pub network: String,
    pub rans: Vec<Ran>,
    #[serde(default)]
    pub weight_rules: WeightRuleConfig,
    /// Per-class parameter profiles; merged over the shipped defaults on load.
    #[serde(default)]
    pub profiles: BTreeMap<AppClass, ProfileSet>,
    /// Per-class explicit parameter weights; classes without an entry use the
    /// shipped fuzzy comparison of delay, jitter and packet loss.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameter_weights: BTreeMap<AppClass, BTreeMap<Parameter, f64>>,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub ran_weighting: RanWeighting,
    #[serde(default)]
    pub overrides: Overrides,
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<NetworkConfiguration> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    NetworkConfiguration::from_json(&text)
}

impl NetworkConfiguration {
    /// Parses, fills defaults, and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: NetworkConfiguration = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                Error::Parse(inner)
            } else {
                Error::config(path, inner.to_string())
            }
        })?;
        cfg.fill_defaults();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    fn fill_defaults(&mut self) {
        for class in [AppClass::Vc, AppClass::Voice, AppClass::Vs, AppClass::Other] {
            let defaults = class.default_profiles();
            if defaults.is_empty() && !self.profiles.contains_key(&class) {
                continue;
            }
            let entry = self.profiles.entry(class).or_default();
            for (p, prof) in defaults {
                entry.entry(p).or_insert(prof);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!(
                    "unsupported version {}, expected {CONFIG_SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        if self.rans.is_empty() {
            return Err(Error::config("rans", "at least one RAN is required"));
        }
        let mut ran_ids = HashSet::new();
        let mut app_ids = HashSet::new();
        for (ri, ran) in self.rans.iter().enumerate() {
            if !ran_ids.insert(ran.id.as_str()) {
                return Err(Error::config(
                    format!("rans[{ri}].id"),
                    format!("duplicate RAN id `{}`", ran.id),
                ));
            }
            if ran.applications.is_empty() {
                return Err(Error::config(
                    format!("rans[{ri}].applications"),
                    format!("RAN `{}` has no applications", ran.id),
                ));
            }
            let mut in_ran = HashSet::new();
            for (ai, app) in ran.applications.iter().enumerate() {
                if !in_ran.insert(app.id.as_str()) {
                    return Err(Error::config(
                        format!("rans[{ri}].applications[{ai}].id"),
                        format!("duplicate application id `{}` in RAN `{}`", app.id, ran.id),
                    ));
                }
                if !self.weight_rules.categories.contains(&app.category) {
                    return Err(Error::config(
                        format!("rans[{ri}].applications[{ai}].category"),
                        format!("unknown service category `{}`", app.category),
                    ));
                }
                app_ids.insert(app.id.as_str());
            }
        }
        self.weight_rules
            .validate()
            .map_err(|e| Error::config("weight_rules", e.to_string()))?;
        for (i, o) in self.weight_rules.overrides.iter().enumerate() {
            for id in [&o.app, &o.over] {
                if !app_ids.contains(id.as_str()) {
                    return Err(Error::config(
                        format!("weight_rules.overrides[{i}]"),
                        format!("unknown application `{id}`"),
                    ));
                }
            }
            if let Some(r) = &o.ran {
                if !ran_ids.contains(r.as_str()) {
                    return Err(Error::config(
                        format!("weight_rules.overrides[{i}].ran"),
                        format!("unknown RAN `{r}`"),
                    ));
                }
            }
        }
        for (class, set) in &self.profiles {
            for (p, prof) in set {
                prof.validate(*p)
                    .map_err(|e| Error::config(format!("profiles.{class}.{p}"), e.to_string()))?;
            }
        }
        for (class, weights) in &self.parameter_weights {
            self.parameter_weight_vector(*class)
                .map_err(|e| Error::config(format!("parameter_weights.{class}"), e.to_string()))?;
            if weights.is_empty() {
                return Err(Error::config(
                    format!("parameter_weights.{class}"),
                    "no parameters listed",
                ));
            }
        }
        self.thresholds
            .validate()
            .map_err(|e| Error::config("thresholds", e.to_string()))?;
        self.validate_overrides()
    }

    fn validate_overrides(&self) -> Result<()> {
        let ov = &self.overrides;
        for (ran, w) in &ov.ran_weights {
            if self.ran(ran).is_none() {
                return Err(Error::config(
                    format!("overrides.ran_weights.{ran}"),
                    format!("unknown RAN `{ran}`"),
                ));
            }
            check_weight(&format!("overrides.ran_weights.{ran}"), *w)?;
        }
        if !ov.ran_weights.is_empty() {
            if ov.ran_weights.len() != self.rans.len() {
                return Err(Error::config(
                    "overrides.ran_weights",
                    "must list every RAN",
                ));
            }
            if ov.ran_weights.values().sum::<f64>() <= 0.0 {
                return Err(Error::config(
                    "overrides.ran_weights",
                    "weights are all zero",
                ));
            }
        }
        for (field, table) in [
            ("app_weights", &ov.app_weights),
            ("app_metrics", &ov.app_metrics),
        ] {
            for (ran_id, apps) in table {
                let ran = self.ran(ran_id).ok_or_else(|| {
                    Error::config(
                        format!("overrides.{field}.{ran_id}"),
                        format!("unknown RAN `{ran_id}`"),
                    )
                })?;
                for (app, v) in apps {
                    let path = format!("overrides.{field}.{ran_id}.{app}");
                    if ran.application(app).is_none() {
                        return Err(Error::config(
                            path,
                            format!("application `{app}` is not configured in RAN `{ran_id}`"),
                        ));
                    }
                    check_weight(&path, *v)?;
                    if field == "app_metrics" && *v > 1.0 {
                        return Err(Error::config(path, format!("metric {v} is outside [0, 1]")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ran(&self, id: &str) -> Option<&Ran> {
        self.rans.iter().find(|r| r.id == id)
    }

    /// True if any RAN configures an application with this id.
    pub fn has_application(&self, id: &str) -> bool {
        self.rans.iter().any(|r| r.application(id).is_some())
    }

    pub fn profiles_for(&self, class: AppClass) -> ProfileSet {
        self.profiles
            .get(&class)
            .cloned()
            .unwrap_or_else(|| class.default_profiles())
    }

    /// Explicit weights for the class, normalized, or the shipped default.
    pub fn parameter_weight_vector(&self, class: AppClass) -> Result<WeightVector> {
        match self.parameter_weights.get(&class) {
            Some(w) => normalize(&RawWeights::new(
                w.iter().map(|(p, v)| (p.to_string(), *v)).collect(),
            )?),
            None => Ok(default_parameter_weights()),
        }
    }

    /// An injected application metric, if any.
    pub fn injected_metric(&self, ran: &str, app: &str) -> Option<f64> {
        self.overrides.app_metrics.get(ran)?.get(app).copied()
    }
}

fn check_weight(path: &str, w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::config(
            path,
            format!("value {w} must be a nonnegative number"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qos::ParameterProfile;

    const N1: &str = r#"{
        "schema_version": 1,
        "network": "N1",
        "rans": [{
            "id": "r1",
            "technology": "UMTS",
            "applications": [
                {"id": "A1", "class": "VC", "category": "education", "users": 20},
                {"id": "A2", "class": "VS", "category": "entertainment", "users": 18}
            ]
        }]
    }"#;

    #[test]
    fn loads_table_one_network() {
        let cfg = NetworkConfiguration::from_json(N1).unwrap();
        assert_eq!(cfg.rans[0].applications.len(), 2);
        assert_eq!(cfg.rans[0].applications[0].users, 20);
        assert_eq!(cfg.thresholds, Thresholds::default());
    }

    #[test]
    fn fills_default_profiles() {
        let cfg = NetworkConfiguration::from_json(N1).unwrap();
        assert_eq!(
            cfg.profiles[&AppClass::Voice][&Parameter::Delay],
            ParameterProfile {
                best: 150.0,
                worst: 400.0
            }
        );
        assert_eq!(cfg.profiles[&AppClass::Vs], AppClass::Vs.default_profiles());
        assert!(!cfg.profiles.contains_key(&AppClass::Other));
    }

    #[test]
    fn partial_profile_merges_over_defaults() {
        let text = N1.replacen(
            "\"rans\"",
            r#""profiles": {"VS": {"delay": {"best": 100, "worst": 300}}}, "rans""#,
            1,
        );
        let cfg = NetworkConfiguration::from_json(&text).unwrap();
        let vs = &cfg.profiles[&AppClass::Vs];
        assert_eq!(
            vs[&Parameter::Delay],
            ParameterProfile {
                best: 100.0,
                worst: 300.0
            }
        );
        assert_eq!(
            vs[&Parameter::Jitter],
            ParameterProfile {
                best: 10.0,
                worst: 40.0
            }
        );
    }

    #[test]
    fn duplicate_application_names_id() {
        let text = N1.replace("\"id\": \"A2\"", "\"id\": \"A1\"");
        let err = NetworkConfiguration::from_json(&text).unwrap_err();
        match err {
            Error::Config { path, message } => {
                assert_eq!(path, "rans[0].applications[1].id");
                assert!(message.contains("A1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_category_is_reported() {
        let text = N1.replace("entertainment", "gaming");
        let err = NetworkConfiguration::from_json(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Config { path, .. } if path == "rans[0].applications[1].category")
        );
        assert!(err.to_string().contains("gaming"));
    }

    #[test]
    fn unknown_class_carries_field_path() {
        let text = N1.replace("\"class\": \"VS\"", "\"class\": \"IPTV\"");
        let err = NetworkConfiguration::from_json(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Config { path, .. } if path == "rans[0].applications[1].class"),
            "{err}"
        );
    }

    #[test]
    fn syntax_errors_are_parse_errors() {
        assert!(matches!(
            NetworkConfiguration::from_json("{"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn rejects_wrong_schema_version() {
        let text = N1.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(
            NetworkConfiguration::from_json(&text),
            Err(Error::Config { path, .. }) if path == "schema_version"
        ));
    }

    #[test]
    fn rejects_bad_overrides() {
        let text = N1.replacen(
            "\"rans\"",
            r#""overrides": {"app_metrics": {"r1": {"A3": 0.5}}}, "rans""#,
            1,
        );
        assert!(NetworkConfiguration::from_json(&text).is_err());
        let text = N1.replacen(
            "\"rans\"",
            r#""overrides": {"app_metrics": {"r1": {"A1": 1.5}}}, "rans""#,
            1,
        );
        assert!(NetworkConfiguration::from_json(&text).is_err());
        let text = N1.replacen(
            "\"rans\"",
            r#""overrides": {"ran_weights": {"r9": 1}}, "rans""#,
            1,
        );
        assert!(NetworkConfiguration::from_json(&text).is_err());
    }

    #[test]
    fn explicit_parameter_weights_are_normalized() {
        let text = N1.replacen(
            "\"rans\"",
            r#""parameter_weights": {"VS": {"delay": 2, "packet-loss": 2}}, "rans""#,
            1,
        );
        let cfg = NetworkConfiguration::from_json(&text).unwrap();
        let w = cfg.parameter_weight_vector(AppClass::Vs).unwrap();
        assert_eq!(w.get("delay"), Some(0.5));
        assert_eq!(
            cfg.parameter_weight_vector(AppClass::Voice).unwrap().len(),
            3
        );
    }

    #[test]
    fn roundtrips_through_json() {
        let cfg = NetworkConfiguration::from_json(N1).unwrap();
        let again = NetworkConfiguration::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }
}
