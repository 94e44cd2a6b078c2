//! Context-driven application comparison matrices.
//!
//! Two criteria produce a fuzzy judgment for every pair of applications in a
//! RAN: the service category each application serves (purpose of usage) and how
//! many users it has. The two judgments are averaged into one matrix cell.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fahp::FuzzyComparisonMatrix;
use crate::fuzzy::{ImportanceLevel, Tfn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    PurposeOfUsage,
    NumberOfUsers,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::PurposeOfUsage, Criterion::NumberOfUsers];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::PurposeOfUsage => "purpose-of-usage",
            Criterion::NumberOfUsers => "number-of-users",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ranked service categories; rank 1 is the most important.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceCategoryPolicy {
    ranks: BTreeMap<String, u32>,
}

impl ServiceCategoryPolicy {
    pub fn new<I, S>(ranks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        let mut used = HashSet::new();
        for (name, rank) in ranks {
            let name = name.into();
            if rank == 0 {
                return Err(Error::InvalidRules(format!(
                    "category `{name}` has rank 0, ranks start at 1"
                )));
            }
            if !used.insert(rank) {
                return Err(Error::InvalidRules(format!(
                    "rank {rank} is assigned to more than one category"
                )));
            }
            if map.insert(name.clone(), rank).is_some() {
                return Err(Error::DuplicateId(name));
            }
        }
        Ok(ServiceCategoryPolicy { ranks: map })
    }

    pub fn rank(&self, category: &str) -> Result<u32> {
        self.ranks
            .get(category)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(category.to_string()))
    }

    pub fn contains(&self, category: &str) -> bool {
        self.ranks.contains_key(category)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.ranks.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl Default for ServiceCategoryPolicy {
    /// Health above education above entertainment, two rank steps apart.
    fn default() -> Self {
        ServiceCategoryPolicy::new([("health", 1), ("education", 3), ("entertainment", 5)])
            .expect("default policy is valid")
    }
}

impl Serialize for ServiceCategoryPolicy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ranks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ServiceCategoryPolicy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ranks = BTreeMap::<String, u32>::deserialize(d)?;
        ServiceCategoryPolicy::new(ranks).map_err(serde::de::Error::custom)
    }
}

/// Judgment applied once a rank difference reaches `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankStep {
    pub delta: u32,
    pub scale: u8,
}

/// Judgment applied once the user-count ratio reaches `ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBucket {
    pub ratio: f64,
    pub scale: u8,
}

/// A judgment given either by scale name or as an explicit fuzzy number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Judgment {
    Scale(ImportanceLevel),
    Fuzzy(Tfn),
}

impl Judgment {
    pub fn tfn(&self) -> Tfn {
        match self {
            Judgment::Scale(level) => level.tfn(),
            Judgment::Fuzzy(t) => *t,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JudgmentRepr {
    Name(String),
    Fuzzy(Tfn),
}

impl Serialize for Judgment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Judgment::Scale(level) => JudgmentRepr::Name(level.to_string()),
            Judgment::Fuzzy(t) => JudgmentRepr::Fuzzy(*t),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Judgment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match JudgmentRepr::deserialize(d)? {
            JudgmentRepr::Name(name) => name
                .parse()
                .map(Judgment::Scale)
                .map_err(serde::de::Error::custom),
            JudgmentRepr::Fuzzy(t) => Ok(Judgment::Fuzzy(t)),
        }
    }
}

/// Explicit judgment of `app` over `over`. With a criterion it replaces that
/// criterion's rule; without one it replaces the aggregated matrix cell.
/// A `ran` restricts it to one RAN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentOverride {
    pub app: String,
    pub over: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<Criterion>,
    pub judgment: Judgment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ran: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRuleConfig {
    #[serde(default)]
    pub categories: ServiceCategoryPolicy,
    #[serde(default = "default_rank_steps")]
    pub rank_steps: Vec<RankStep>,
    #[serde(default = "default_ratio_buckets")]
    pub user_ratio_buckets: Vec<RatioBucket>,
    #[serde(default)]
    pub overrides: Vec<JudgmentOverride>,
}

impl Default for WeightRuleConfig {
    fn default() -> Self {
        WeightRuleConfig {
            categories: ServiceCategoryPolicy::default(),
            rank_steps: default_rank_steps(),
            user_ratio_buckets: default_ratio_buckets(),
            overrides: Vec::new(),
        }
    }
}

/// Rank difference `d` maps to `k(2d+1)`, capped at `k9`.
fn default_rank_steps() -> Vec<RankStep> {
    [(1, 3), (2, 5), (3, 7), (4, 9)]
        .into_iter()
        .map(|(delta, scale)| RankStep { delta, scale })
        .collect()
}

fn default_ratio_buckets() -> Vec<RatioBucket> {
    [(1.25, 3), (2.0, 5), (3.0, 7), (4.0, 9)]
        .into_iter()
        .map(|(ratio, scale)| RatioBucket { ratio, scale })
        .collect()
}

impl WeightRuleConfig {
    pub fn validate(&self) -> Result<()> {
        let mut prev = 0;
        for step in &self.rank_steps {
            ImportanceLevel::from_index(step.scale)?;
            if step.delta <= prev {
                return Err(Error::InvalidRules(
                    "rank steps must have strictly increasing positive deltas".into(),
                ));
            }
            prev = step.delta;
        }
        let mut prev = 1.0;
        for bucket in &self.user_ratio_buckets {
            ImportanceLevel::from_index(bucket.scale)?;
            if !bucket.ratio.is_finite() || bucket.ratio <= prev {
                return Err(Error::InvalidRules(
                    "user ratio buckets must be strictly increasing and above 1".into(),
                ));
            }
            prev = bucket.ratio;
        }
        for o in &self.overrides {
            if o.app == o.over {
                return Err(Error::InvalidRules(format!(
                    "override compares `{}` with itself",
                    o.app
                )));
            }
            if let Some(criterion) = o.criterion {
                check_on_scale(criterion, &o.judgment.tfn())?;
            }
        }
        Ok(())
    }

    /// The most specific override for `app` over `over` (RAN-scoped beats global),
    /// already oriented so it reads as `app` over `over`.
    pub fn find_override(
        &self,
        ran: Option<&str>,
        criterion: Option<Criterion>,
        app: &str,
        over: &str,
    ) -> Option<Tfn> {
        let matching = |scoped: bool| {
            self.overrides.iter().rev().find_map(|o| {
                let in_scope = match (&o.ran, ran) {
                    (Some(r), Some(cur)) => scoped && r == cur,
                    (None, _) => !scoped,
                    (Some(_), None) => false,
                };
                if !in_scope || o.criterion != criterion {
                    return None;
                }
                if o.app == app && o.over == over {
                    Some(o.judgment.tfn())
                } else if o.app == over && o.over == app {
                    Some(o.judgment.tfn().reciprocal())
                } else {
                    None
                }
            })
        };
        matching(true).or_else(|| matching(false))
    }
}

fn check_on_scale(criterion: Criterion, t: &Tfn) -> Result<()> {
    match ImportanceLevel::classify(t) {
        Some(_) => Ok(()),
        None => Err(Error::OffScaleJudgment {
            criterion: criterion.to_string(),
            l: t.lower(),
            m: t.modal(),
            u: t.upper(),
        }),
    }
}

fn level(scale: u8) -> Tfn {
    ImportanceLevel::from_index(scale)
        .map(ImportanceLevel::tfn)
        .unwrap_or(Tfn::ONE)
}

/// Judgment of category `cat_i` over `cat_j` from their rank difference.
pub fn purpose_judgment(cat_i: &str, cat_j: &str, cfg: &WeightRuleConfig) -> Result<Tfn> {
    let ri = cfg.categories.rank(cat_i)?;
    let rj = cfg.categories.rank(cat_j)?;
    Ok(match ri.cmp(&rj) {
        Ordering::Equal => Tfn::ONE,
        Ordering::Less => {
            let delta = rj - ri;
            cfg.rank_steps
                .iter()
                .take_while(|s| s.delta <= delta)
                .last()
                .map_or(Tfn::ONE, |s| level(s.scale))
        }
        Ordering::Greater => purpose_judgment(cat_j, cat_i, cfg)?.reciprocal(),
    })
}

/// Judgment of an application with `n_i` users over one with `n_j` users.
pub fn users_judgment(n_i: u64, n_j: u64, cfg: &WeightRuleConfig) -> Result<Tfn> {
    if n_i == 0 && n_j == 0 {
        return Err(Error::NoUsers);
    }
    if n_i < n_j {
        return Ok(users_judgment(n_j, n_i, cfg)?.reciprocal());
    }
    let ratio = n_i.max(1) as f64 / n_j.max(1) as f64;
    Ok(cfg
        .user_ratio_buckets
        .iter()
        .take_while(|b| b.ratio <= ratio)
        .last()
        .map_or(Tfn::ONE, |b| level(b.scale)))
}

/// An application as seen by the weight rules.
#[derive(Debug, Clone, PartialEq)]
pub struct AppContext {
    pub id: String,
    pub category: String,
    pub users: u64,
}

impl AppContext {
    pub fn new(id: impl Into<String>, category: impl Into<String>, users: u64) -> Self {
        AppContext {
            id: id.into(),
            category: category.into(),
            users,
        }
    }
}

/// One criterion's judgment for an ordered pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionJudgment {
    pub criterion: Criterion,
    pub app: String,
    pub over: String,
    pub tfn: Tfn,
    #[serde(default)]
    pub overridden: bool,
}

/// Comparison matrix together with the judgments it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicationMatrix {
    pub matrix: FuzzyComparisonMatrix,
    /// Criterion judgments on the side of each pair that was aggregated.
    pub judgments: Vec<CriterionJudgment>,
}

fn criterion_judgment(
    criterion: Criterion,
    a: &AppContext,
    b: &AppContext,
    cfg: &WeightRuleConfig,
    ran: Option<&str>,
) -> Result<(Tfn, bool)> {
    if let Some(t) = cfg.find_override(ran, Some(criterion), &a.id, &b.id) {
        return Ok((t, true));
    }
    let t = match criterion {
        Criterion::PurposeOfUsage => purpose_judgment(&a.category, &b.category, cfg)?,
        Criterion::NumberOfUsers => users_judgment(a.users, b.users, cfg)?,
    };
    Ok((t, false))
}

// Orders candidate aggregates: higher modal value first, then larger support,
// then application id, so the choice never depends on input order.
fn favors(x: &Tfn, x_id: &str, y: &Tfn, y_id: &str) -> bool {
    let key = |t: &Tfn| (t.modal(), t.lower() + t.modal() + t.upper());
    match key(x).partial_cmp(&key(y)) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => x_id <= y_id,
    }
}

/// Builds the comparison matrix over `apps` for one RAN.
///
/// For each pair both criteria are judged in both orientations and averaged.
/// The averaged judgment on the favored side (higher modal value) becomes the
/// cell and the opposite cell is its reciprocal, so the matrix is reciprocal
/// and independent of the order of `apps`. A cell-level override replaces the
/// average outright.
pub fn build_application_matrix(
    apps: &[AppContext],
    cfg: &WeightRuleConfig,
    ran: Option<&str>,
) -> Result<ApplicationMatrix> {
    if apps.len() < 2 {
        return Err(Error::TooFewAlternatives(apps.len()));
    }
    cfg.validate()?;
    let n = apps.len();
    let ids: Vec<String> = apps.iter().map(|a| a.id.clone()).collect();
    let mut upper = vec![Vec::new(); n];
    let mut judgments = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&apps[i], &apps[j]);
            if let Some(cell) = cfg.find_override(ran, None, &a.id, &b.id) {
                upper[i].push(cell);
                continue;
            }
            let mut forward = Vec::with_capacity(2);
            let mut backward = Vec::with_capacity(2);
            for criterion in Criterion::ALL {
                let (fwd, fwd_over) = criterion_judgment(criterion, a, b, cfg, ran)?;
                let (bwd, bwd_over) = criterion_judgment(criterion, b, a, cfg, ran)?;
                forward.push((criterion, fwd, fwd_over));
                backward.push((criterion, bwd, bwd_over));
            }
            let tfns = |v: &[(Criterion, Tfn, bool)]| v.iter().map(|x| x.1).collect::<Vec<_>>();
            let mean_fwd = Tfn::mean(&tfns(&forward))?;
            let mean_bwd = Tfn::mean(&tfns(&backward))?;
            let (cell, side, (x, y)) = if favors(&mean_fwd, &a.id, &mean_bwd, &b.id) {
                (mean_fwd, forward, (a, b))
            } else {
                (mean_bwd.reciprocal(), backward, (b, a))
            };
            upper[i].push(cell);
            judgments.extend(side.into_iter().map(|(criterion, tfn, overridden)| {
                CriterionJudgment {
                    criterion,
                    app: x.id.clone(),
                    over: y.id.clone(),
                    tfn,
                    overridden,
                }
            }));
        }
    }
    let matrix = FuzzyComparisonMatrix::from_upper_triangle(ids, upper)?;
    Ok(ApplicationMatrix { matrix, judgments })
}
