//! Unified QoS evaluation for heterogeneous radio access networks.
//!
//! Application weights are derived per RAN with fuzzy pairwise comparisons
//! (extent analysis) from each application's service category and user count.
//! Parameter scores, application metrics, RAN metrics and the network metric
//! are then composed bottom-up as weighted sums.

pub mod config;
pub mod error;
pub mod evaluate;
pub mod fahp;
pub mod fuzzy;
pub mod measurements;
pub mod qos;
pub mod report;
pub mod rules;
pub mod weights;

pub use config::{load_config, NetworkConfiguration};
pub use error::{Error, Result};
pub use evaluate::{evaluate, weights_overview, whatif, Directive};
pub use fahp::{derive_weights, validate_matrix, FuzzyComparisonMatrix};
pub use fuzzy::{degree_of_possibility, ImportanceLevel, Tfn};
pub use measurements::{load_measurements, MeasurementSet};
pub use qos::{classify, QosLevel};
pub use report::{
    render_report, render_weights, render_whatif, EvaluationReport, Format, WhatIfReport,
};
pub use weights::{RawWeights, WeightVector};
