//! CSV measurement ingestion.
//!
//! Expected header: `ran_id,app_id,parameter,value,unit`. Rows are averaged per
//! `(ran, application, parameter)`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::NetworkConfiguration;
use crate::error::{Error, Result};
use crate::qos::{Parameter, Unit};

pub const MEASUREMENT_HEADER: [&str; 5] = ["ran_id", "app_id", "parameter", "value", "unit"];

/// Mean of one parameter over the evaluation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementSet {
    values: BTreeMap<(String, String), BTreeMap<Parameter, Aggregate>>,
}

impl MeasurementSet {
    /// Aggregated parameters of one application, in parameter order.
    pub fn for_app(&self, ran: &str, app: &str) -> Option<&BTreeMap<Parameter, Aggregate>> {
        self.values.get(&(ran.to_string(), app.to_string()))
    }

    pub fn get(&self, ran: &str, app: &str, parameter: Parameter) -> Option<Aggregate> {
        self.for_app(ran, app)?.get(&parameter).copied()
    }

    pub fn has_app(&self, ran: &str, app: &str) -> bool {
        self.for_app(ran, app).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Drops every row of one application.
    pub fn remove_app(&mut self, ran: &str, app: &str) {
        self.values.remove(&(ran.to_string(), app.to_string()));
    }

    /// Builds a set from already-aggregated values, for callers that do not
    /// ingest CSV.
    pub fn insert(&mut self, ran: &str, app: &str, parameter: Parameter, aggregate: Aggregate) {
        self.values
            .entry((ran.to_string(), app.to_string()))
            .or_default()
            .insert(parameter, aggregate);
    }
}

pub fn load_measurements(
    path: impl AsRef<Path>,
    cfg: &NetworkConfiguration,
) -> Result<MeasurementSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_measurements(file, cfg)
}

/// Parses and validates CSV rows against `cfg`. Row numbers in errors are
/// file line numbers, with the header on line 1.
pub fn parse_measurements<R: Read>(
    reader: R,
    cfg: &NetworkConfiguration,
) -> Result<MeasurementSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header_err = |message: String| Error::Measurement { row: 1, message };
    let headers = rdr
        .headers()
        .map_err(|e| header_err(e.to_string()))?
        .clone();
    if headers.iter().ne(MEASUREMENT_HEADER) {
        return Err(header_err(format!(
            "expected header `{}`, found `{}`",
            MEASUREMENT_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut sums: BTreeMap<(String, String), BTreeMap<Parameter, (f64, usize)>> = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Measurement {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let fail = |message: String| Error::Measurement { row, message };
        let field = |i: usize| record.get(i).unwrap_or_default();

        let (ran_id, app_id) = (field(0), field(1));
        let ran = cfg
            .ran(ran_id)
            .ok_or_else(|| fail(format!("unknown RAN `{ran_id}`")))?;
        if ran.application(app_id).is_none() {
            return Err(fail(format!(
                "unknown application `{app_id}` in RAN `{ran_id}`"
            )));
        }
        let parameter: Parameter = field(2).parse().map_err(fail)?;
        let value: f64 = field(3)
            .parse()
            .map_err(|_| fail(format!("value `{}` is not a number", field(3))))?;
        if !value.is_finite() || value < 0.0 {
            return Err(fail(format!("value {value} must be a nonnegative number")));
        }
        let unit: Unit = field(4).parse().map_err(fail)?;
        if unit != parameter.unit() {
            return Err(fail(format!(
                "{parameter} is measured in {}, not {unit}",
                parameter.unit()
            )));
        }
        let slot = sums
            .entry((ran_id.to_string(), app_id.to_string()))
            .or_default()
            .entry(parameter)
            .or_insert((0.0, 0));
        slot.0 += value;
        slot.1 += 1;
    }

    let values = sums
        .into_iter()
        .map(|(key, params)| {
            let params = params
                .into_iter()
                .map(|(p, (sum, n))| {
                    (
                        p,
                        Aggregate {
                            mean: sum / n as f64,
                            samples: n,
                        },
                    )
                })
                .collect();
            (key, params)
        })
        .collect();
    Ok(MeasurementSet { values })
}
