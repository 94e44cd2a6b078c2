//! Keyed weight vectors.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of a normalized weight vector's sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub id: String,
    pub weight: f64,
}

/// Unnormalized nonnegative weights, e.g. the minimum degrees of possibility
/// produced by extent analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeightEntry>", into = "Vec<WeightEntry>")]
pub struct RawWeights {
    entries: Vec<(String, f64)>,
}

impl RawWeights {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        check_ids(entries.iter().map(|(id, _)| id.as_str()))?;
        for (id, w) in &entries {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidWeight {
                    id: id.clone(),
                    weight: *w,
                });
            }
        }
        Ok(RawWeights { entries })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(id, w)| (id.as_str(), *w))
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == id).map(|(_, w)| w)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, w)| *w).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Divides every component by the total.
    pub fn normalize(&self) -> Result<WeightVector> {
        normalize(self)
    }
}

/// Nonnegative weights summing to one, in a stable key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeightEntry>", into = "Vec<WeightEntry>")]
pub struct WeightVector {
    entries: Vec<(String, f64)>,
}

impl WeightVector {
    /// Accepts already-normalized weights.
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        let raw = RawWeights::new(entries)?;
        let sum = raw.sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized(sum));
        }
        Ok(WeightVector {
            entries: raw.entries,
        })
    }

    pub fn uniform<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let raw = RawWeights::new(ids.into_iter().map(|id| (id, 1.0)).collect())?;
        normalize(&raw)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(id, w)| (id.as_str(), *w))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(id, _)| id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == id).map(|(_, w)| w)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, w)| *w).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Keeps only the listed keys and renormalizes over them.
    pub fn restrict(&self, keep: &[&str]) -> Result<WeightVector> {
        let kept = self
            .entries
            .iter()
            .filter(|(id, _)| keep.contains(&id.as_str()))
            .cloned()
            .collect();
        normalize(&RawWeights::new(kept)?)
    }
}

/// Divides each component by the sum. All-zero input has no ranking and is rejected.
pub fn normalize(raw: &RawWeights) -> Result<WeightVector> {
    if raw.is_empty() {
        return Err(Error::Empty("weight vector"));
    }
    let sum = raw.sum();
    if sum <= 0.0 {
        return Err(Error::ZeroWeights);
    }
    Ok(WeightVector {
        entries: raw
            .entries
            .iter()
            .map(|(id, w)| (id.clone(), w / sum))
            .collect(),
    })
}

fn check_ids<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

macro_rules! entry_conversions {
    ($ty:ident, $ctor:path) => {
        impl TryFrom<Vec<WeightEntry>> for $ty {
            type Error = Error;

            fn try_from(v: Vec<WeightEntry>) -> Result<Self> {
                $ctor(v.into_iter().map(|e| (e.id, e.weight)).collect())
            }
        }

        impl From<$ty> for Vec<WeightEntry> {
            fn from(w: $ty) -> Self {
                w.entries
                    .into_iter()
                    .map(|(id, weight)| WeightEntry { id, weight })
                    .collect()
            }
        }
    };
}

entry_conversions!(RawWeights, RawWeights::new);
entry_conversions!(WeightVector, WeightVector::new);
