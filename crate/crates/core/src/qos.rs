//! Unified QoS metrics at the application, RAN and network layers.
//!
//! Raw measurements are mapped onto `[0, 1]` through a parameter profile. Each
//! layer is then a weighted sum of the layer beneath it: parameter scores form
//! the application metric, application metrics form the RAN metric, and RAN
//! metrics form the network metric.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fahp::{derive_weights, FuzzyComparisonMatrix};
use crate::fuzzy::ImportanceLevel;
use crate::weights::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parameter {
    Delay,
    Jitter,
    PacketLoss,
    Throughput,
}

impl Parameter {
    pub const ALL: [Parameter; 4] = [
        Parameter::Delay,
        Parameter::Jitter,
        Parameter::PacketLoss,
        Parameter::Throughput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Delay => "delay",
            Parameter::Jitter => "jitter",
            Parameter::PacketLoss => "packet-loss",
            Parameter::Throughput => "throughput",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Parameter::Delay | Parameter::Jitter => Unit::Ms,
            Parameter::PacketLoss => Unit::Percent,
            Parameter::Throughput => Unit::Kbps,
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Parameter::Throughput => Direction::HigherIsBetter,
            _ => Direction::LowerIsBetter,
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Ms,
    Percent,
    Kbps,
}

impl Unit {
    pub fn name(self) -> &'static str {
        match self {
            Unit::Ms => "ms",
            Unit::Percent => "percent",
            Unit::Kbps => "kbps",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ms" => Ok(Unit::Ms),
            "percent" => Ok(Unit::Percent),
            "kbps" => Ok(Unit::Kbps),
            _ => Err(format!("unknown unit `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LowerIsBetter,
    HigherIsBetter,
}

/// Acceptable range of a parameter: score 1 at or beyond `best`, 0 at or beyond `worst`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterProfile {
    pub best: f64,
    pub worst: f64,
}

impl ParameterProfile {
    pub fn new(parameter: Parameter, best: f64, worst: f64) -> Result<Self> {
        let p = ParameterProfile { best, worst };
        p.validate(parameter)?;
        Ok(p)
    }

    pub fn validate(&self, parameter: Parameter) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidProfile {
            parameter: parameter.to_string(),
            reason: reason.to_string(),
        };
        if !self.best.is_finite() || !self.worst.is_finite() {
            return Err(invalid("thresholds must be finite"));
        }
        match parameter.direction() {
            Direction::LowerIsBetter if self.best >= self.worst => Err(invalid(
                "best must be below worst for a lower-is-better parameter",
            )),
            Direction::HigherIsBetter if self.best <= self.worst => Err(invalid(
                "best must be above worst for a higher-is-better parameter",
            )),
            _ => Ok(()),
        }
    }
}

/// Piecewise-linear score of a raw measurement against its profile.
pub fn normalize_parameter(
    parameter: Parameter,
    value: f64,
    profile: &ParameterProfile,
) -> Result<f64> {
    profile.validate(parameter)?;
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidMeasurement {
            parameter: parameter.to_string(),
            value,
        });
    }
    let score = (profile.worst - value) / (profile.worst - profile.best);
    Ok(score.clamp(0.0, 1.0))
}

/// Profiles for one application class.
pub type ProfileSet = BTreeMap<Parameter, ParameterProfile>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AppClass {
    #[serde(rename = "VC", alias = "vc")]
    Vc,
    #[serde(rename = "voice", alias = "Voice")]
    Voice,
    #[serde(rename = "VS", alias = "vs")]
    Vs,
    #[serde(rename = "other", alias = "Other")]
    Other,
}

impl AppClass {
    pub fn name(self) -> &'static str {
        match self {
            AppClass::Vc => "VC",
            AppClass::Voice => "voice",
            AppClass::Vs => "VS",
            AppClass::Other => "other",
        }
    }

    /// Shipped acceptable ranges; none for `other` and none for throughput.
    pub fn default_profiles(self) -> ProfileSet {
        let ranges: &[(Parameter, f64, f64)] = match self {
            AppClass::Voice => &[
                (Parameter::Delay, 150.0, 400.0),
                (Parameter::Jitter, 20.0, 60.0),
                (Parameter::PacketLoss, 1.0, 10.0),
            ],
            AppClass::Vc | AppClass::Vs => &[
                (Parameter::Delay, 250.0, 500.0),
                (Parameter::Jitter, 10.0, 40.0),
                (Parameter::PacketLoss, 1.0, 8.0),
            ],
            AppClass::Other => &[],
        };
        ranges
            .iter()
            .map(|&(p, best, worst)| (p, ParameterProfile { best, worst }))
            .collect()
    }
}

impl fmt::Display for AppClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Delay is moderately more important than packet loss and jitter; loss and
/// jitter are judged equal.
pub fn default_parameter_matrix() -> FuzzyComparisonMatrix {
    let moderate = ImportanceLevel::Moderate.tfn();
    FuzzyComparisonMatrix::from_upper_triangle(
        vec![
            Parameter::Delay.to_string(),
            Parameter::Jitter.to_string(),
            Parameter::PacketLoss.to_string(),
        ],
        vec![
            vec![moderate, moderate],
            vec![ImportanceLevel::Equal.tfn()],
            vec![],
        ],
    )
    .expect("default parameter matrix is well formed")
}

pub fn default_parameter_weights() -> WeightVector {
    derive_weights(&default_parameter_matrix()).expect("default parameter matrix has weights")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QosLevel {
    Poor,
    Average,
    Good,
}

impl QosLevel {
    pub fn name(self) -> &'static str {
        match self {
            QosLevel::Poor => "poor",
            QosLevel::Average => "average",
            QosLevel::Good => "good",
        }
    }
}

impl fmt::Display for QosLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lower bounds of the `average` and `good` levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub average: f64,
    pub good: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            average: 0.5,
            good: 0.75,
        }
    }
}

impl Thresholds {
    pub fn new(average: f64, good: f64) -> Result<Self> {
        let t = Thresholds { average, good };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.average)
            || !(0.0..=1.0).contains(&self.good)
            || self.average > self.good
        {
            return Err(Error::InvalidThresholds {
                average: self.average,
                good: self.good,
            });
        }
        Ok(())
    }

    pub fn classify(&self, score: f64) -> Result<QosLevel> {
        check_score(score)?;
        Ok(if score >= self.good {
            QosLevel::Good
        } else if score >= self.average {
            QosLevel::Average
        } else {
            QosLevel::Poor
        })
    }
}

/// Classification with the default thresholds.
pub fn classify(score: f64) -> Result<QosLevel> {
    Thresholds::default().classify(score)
}

fn check_score(score: f64) -> Result<()> {
    if (0.0..=1.0).contains(&score) {
        Ok(())
    } else {
        Err(Error::ScoreOutOfRange(score))
    }
}

/// `Σ w_k · s_k` over identical key sets. Scores must lie in `[0, 1]`.
pub fn weighted_metric<K: AsRef<str>>(scores: &[(K, f64)], weights: &WeightVector) -> Result<f64> {
    if scores.len() != weights.len() {
        return Err(Error::KeyMismatch(format!(
            "{} scores but {} weights",
            scores.len(),
            weights.len()
        )));
    }
    let mut total = 0.0;
    for (key, score) in scores {
        let key = key.as_ref();
        check_score(*score)?;
        let w = weights
            .get(key)
            .ok_or_else(|| Error::KeyMismatch(format!("`{key}` has a score but no weight")))?;
        total += w * score;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Application metric from parameter scores.
pub fn application_metric(scores: &[(Parameter, f64)], weights: &WeightVector) -> Result<f64> {
    let keyed: Vec<(&str, f64)> = scores.iter().map(|(p, s)| (p.name(), *s)).collect();
    weighted_metric(&keyed, weights)
}

/// RAN metric from application metrics.
pub fn ran_metric<K: AsRef<str>>(
    app_metrics: &[(K, f64)],
    app_weights: &WeightVector,
) -> Result<f64> {
    weighted_metric(app_metrics, app_weights)
}

/// Network metric from RAN metrics, with its classification.
pub fn network_metric<K: AsRef<str>>(
    ran_metrics: &[(K, f64)],
    ran_weights: &WeightVector,
    thresholds: &Thresholds,
) -> Result<(f64, QosLevel)> {
    let score = weighted_metric(ran_metrics, ran_weights)?;
    Ok((score, thresholds.classify(score)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(pairs: &[(&str, f64)]) -> WeightVector {
        WeightVector::new(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let loss = ParameterProfile::new(Parameter::PacketLoss, 0.0, 10.0).unwrap();
        let s = normalize_parameter(Parameter::PacketLoss, 5.72, &loss).unwrap();
        assert!((s - 0.428).abs() < 1e-12);
        let delay = ParameterProfile::new(Parameter::Delay, 150.0, 400.0).unwrap();
        assert_eq!(
            normalize_parameter(Parameter::Delay, 150.0, &delay).unwrap(),
            1.0
        );
        assert_eq!(
            normalize_parameter(Parameter::Delay, 525.0, &delay).unwrap(),
            0.0
        );
        assert_eq!(
            normalize_parameter(Parameter::Delay, 20.0, &delay).unwrap(),
            1.0
        );
        assert!(
            (normalize_parameter(Parameter::Delay, 275.0, &delay).unwrap() - 0.5).abs() < 1e-12
        );
    }

    #[test]
    fn throughput_is_higher_is_better() {
        let p = ParameterProfile::new(Parameter::Throughput, 2000.0, 500.0).unwrap();
        assert_eq!(
            normalize_parameter(Parameter::Throughput, 2500.0, &p).unwrap(),
            1.0
        );
        assert_eq!(
            normalize_parameter(Parameter::Throughput, 100.0, &p).unwrap(),
            0.0
        );
        assert!(
            (normalize_parameter(Parameter::Throughput, 1250.0, &p).unwrap() - 0.5).abs() < 1e-12
        );
        assert!(ParameterProfile::new(Parameter::Throughput, 500.0, 2000.0).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let delay = ParameterProfile::new(Parameter::Delay, 150.0, 400.0).unwrap();
        assert!(normalize_parameter(Parameter::Delay, -1.0, &delay).is_err());
        assert!(normalize_parameter(Parameter::Delay, f64::NAN, &delay).is_err());
        assert!(ParameterProfile::new(Parameter::Delay, 400.0, 150.0).is_err());
        assert!(ParameterProfile::new(Parameter::Jitter, 10.0, 10.0).is_err());
    }

    #[test]
    fn application_metric_examples() {
        let w = wv(&[("packet-loss", 0.5), ("delay", 0.3), ("jitter", 0.2)]);
        let scores = [
            (Parameter::PacketLoss, 0.428),
            (Parameter::Delay, 0.8),
            (Parameter::Jitter, 0.9),
        ];
        assert!((application_metric(&scores, &w).unwrap() - 0.634).abs() < 1e-12);
        let uniform = WeightVector::uniform(["delay", "jitter", "packet-loss"]).unwrap();
        let ones = [
            (Parameter::Delay, 1.0),
            (Parameter::Jitter, 1.0),
            (Parameter::PacketLoss, 1.0),
        ];
        assert!((application_metric(&ones, &uniform).unwrap() - 1.0).abs() < 1e-12);
        let mismatch = [
            (Parameter::Delay, 1.0),
            (Parameter::Throughput, 1.0),
            (Parameter::PacketLoss, 1.0),
        ];
        assert!(matches!(
            application_metric(&mismatch, &uniform),
            Err(Error::KeyMismatch(_))
        ));
    }

    #[test]
    fn ran_metric_examples() {
        let metrics = [("voice", 0.62), ("vs", 1.0)];
        assert!(
            (ran_metric(&metrics, &wv(&[("voice", 0.5), ("vs", 0.5)])).unwrap() - 0.81).abs()
                < 1e-12
        );
        assert!(
            (ran_metric(&metrics, &wv(&[("voice", 1.0), ("vs", 0.0)])).unwrap() - 0.62).abs()
                < 1e-12
        );
        assert_eq!(
            ran_metric(&[("a", 0.37)], &wv(&[("a", 1.0)])).unwrap(),
            0.37
        );
        assert!(ran_metric(&metrics, &wv(&[("voice", 1.0)])).is_err());
        assert!(ran_metric(&[("voice", 1.2)], &wv(&[("voice", 1.0)])).is_err());
    }

    #[test]
    fn network_metric_examples() {
        let t = Thresholds::default();
        let (s, level) = network_metric(&[("r1", 0.81)], &wv(&[("r1", 1.0)]), &t).unwrap();
        assert_eq!((s, level), (0.81, QosLevel::Good));
        let (s, level) = network_metric(
            &[("r1", 0.9), ("r2", 0.5)],
            &wv(&[("r1", 0.5), ("r2", 0.5)]),
            &t,
        )
        .unwrap();
        assert!((s - 0.7).abs() < 1e-12);
        assert_eq!(level, QosLevel::Average);
        assert!(network_metric(&[("r1", 0.9)], &wv(&[("r2", 1.0)]), &t).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(0.81).unwrap(), QosLevel::Good);
        assert_eq!(classify(0.62).unwrap(), QosLevel::Average);
        assert_eq!(classify(0.0).unwrap(), QosLevel::Poor);
        assert_eq!(classify(0.75).unwrap(), QosLevel::Good);
        assert_eq!(classify(0.5).unwrap(), QosLevel::Average);
        assert!(classify(1.01).is_err());
        assert!(classify(-0.1).is_err());
        assert!(Thresholds::new(0.8, 0.6).is_err());
        let custom = Thresholds::new(0.3, 0.9).unwrap();
        assert_eq!(custom.classify(0.81).unwrap(), QosLevel::Average);
    }

    #[test]
    fn default_parameter_weights_are_uniform() {
        // k3 has modal value 1, so "moderately more important" leaves every
        // synthetic extent with the same mode.
        let w = default_parameter_weights();
        assert_eq!(w.len(), 3);
        for v in w.values() {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn default_profiles() {
        let voice = AppClass::Voice.default_profiles();
        assert_eq!(
            voice[&Parameter::Delay],
            ParameterProfile {
                best: 150.0,
                worst: 400.0
            }
        );
        let vs = AppClass::Vs.default_profiles();
        assert_eq!(
            vs[&Parameter::PacketLoss],
            ParameterProfile {
                best: 1.0,
                worst: 8.0
            }
        );
        assert!(!vs.contains_key(&Parameter::Throughput));
        assert!(AppClass::Other.default_profiles().is_empty());
        for class in [AppClass::Voice, AppClass::Vc, AppClass::Vs] {
            for (p, prof) in class.default_profiles() {
                prof.validate(p).unwrap();
            }
        }
    }
}
