//! Triangular fuzzy numbers and the importance scale used for pairwise judgments.
//!
//! A [`Tfn`] `(l, m, u)` has a membership function rising linearly from `l` to
//! the mode `m` and falling back to zero at `u`. Only strictly positive supports
//! are representable, so reciprocals and ratios are always defined.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing fuzzy numbers for structural checks.
pub const TFN_TOLERANCE: f64 = 1e-9;

/// Triangular fuzzy number with `0 < l <= m <= u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Tfn {
    l: f64,
    m: f64,
    u: f64,
}

impl Tfn {
    /// The identity judgment `(1, 1, 1)`.
    pub const ONE: Tfn = Tfn {
        l: 1.0,
        m: 1.0,
        u: 1.0,
    };

    pub fn new(l: f64, m: f64, u: f64) -> Result<Self> {
        let finite = l.is_finite() && m.is_finite() && u.is_finite();
        if !finite || l <= 0.0 || l > m || m > u {
            return Err(Error::InvalidTfn { l, m, u });
        }
        Ok(Tfn { l, m, u })
    }

    /// Degenerate fuzzy number `(x, x, x)`.
    pub fn crisp(x: f64) -> Result<Self> {
        Tfn::new(x, x, x)
    }

    // Only for compile-time scale constants known to be valid.
    const fn raw(l: f64, m: f64, u: f64) -> Self {
        Tfn { l, m, u }
    }

    pub fn lower(&self) -> f64 {
        self.l
    }

    pub fn modal(&self) -> f64 {
        self.m
    }

    pub fn upper(&self) -> f64 {
        self.u
    }

    pub fn components(&self) -> [f64; 3] {
        [self.l, self.m, self.u]
    }

    /// Component-wise fuzzy addition.
    pub fn add(&self, other: &Tfn) -> Tfn {
        Tfn {
            l: self.l + other.l,
            m: self.m + other.m,
            u: self.u + other.u,
        }
    }

    /// Multiplication by a strictly positive crisp factor.
    pub fn scale(&self, factor: f64) -> Result<Tfn> {
        Tfn::new(self.l * factor, self.m * factor, self.u * factor)
    }

    /// `(1/u, 1/m, 1/l)`.
    pub fn reciprocal(&self) -> Tfn {
        Tfn {
            l: 1.0 / self.u,
            m: 1.0 / self.m,
            u: 1.0 / self.l,
        }
    }

    /// Element-wise arithmetic mean of a non-empty list.
    pub fn mean(values: &[Tfn]) -> Result<Tfn> {
        let Some((first, rest)) = values.split_first() else {
            return Err(Error::Empty("fuzzy mean input"));
        };
        let sum = rest.iter().fold(*first, |acc, t| acc.add(t));
        let n = values.len() as f64;
        Ok(Tfn {
            l: sum.l / n,
            m: sum.m / n,
            u: sum.u / n,
        })
    }

    /// Membership grade of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.l || x > self.u {
            0.0
        } else if x == self.m {
            1.0
        } else if x < self.m {
            (x - self.l) / (self.m - self.l)
        } else {
            (self.u - x) / (self.u - self.m)
        }
    }

    /// Degree of possibility `V(self >= other)`.
    pub fn possibility_ge(&self, other: &Tfn) -> f64 {
        degree_of_possibility(self, other)
    }

    /// True when every component is within `tol` of `other`.
    pub fn approx_eq(&self, other: &Tfn, tol: f64) -> bool {
        (self.l - other.l).abs() <= tol
            && (self.m - other.m).abs() <= tol
            && (self.u - other.u).abs() <= tol
    }
}

impl TryFrom<[f64; 3]> for Tfn {
    type Error = Error;

    fn try_from([l, m, u]: [f64; 3]) -> Result<Self> {
        Tfn::new(l, m, u)
    }
}

impl From<Tfn> for [f64; 3] {
    fn from(t: Tfn) -> Self {
        t.components()
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.p$}, {:.p$}, {:.p$})", self.l, self.m, self.u),
            None => write!(f, "({}, {}, {})", self.l, self.m, self.u),
        }
    }
}

/// `V(b >= a)`: height of the intersection of the two membership functions,
/// taken on the side where `b` exceeds `a`.
pub fn degree_of_possibility(b: &Tfn, a: &Tfn) -> f64 {
    if b.m >= a.m {
        return 1.0;
    }
    if a.l >= b.u {
        return 0.0;
    }
    // Denominator is strictly negative here: m_b < m_a and l_a < u_b rule out
    // both slopes being vertical at once.
    let v = (a.l - b.u) / ((b.m - b.u) - (a.m - a.l));
    v.clamp(0.0, 1.0)
}

/// `min` over `others` of `V(b >= a)`.
pub fn min_degree_of_possibility(b: &Tfn, others: &[Tfn]) -> Result<f64> {
    if others.is_empty() {
        return Err(Error::Empty("comparison set"));
    }
    Ok(others
        .iter()
        .map(|a| degree_of_possibility(b, a))
        .fold(1.0, f64::min))
}

/// One of the nine levels of the fuzzy pairwise importance scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ImportanceLevel {
    Equal,
    EqualToModerate,
    Moderate,
    ModerateToStrong,
    Strong,
    StrongToVeryStrong,
    VeryStrong,
    VeryStrongToExtreme,
    Extreme,
}

const SCALE: [(ImportanceLevel, &str, Tfn); 9] = [
    (ImportanceLevel::Equal, "equal", Tfn::raw(1.0, 1.0, 1.0)),
    (
        ImportanceLevel::EqualToModerate,
        "intermediate",
        Tfn::raw(0.5, 0.75, 1.0),
    ),
    (
        ImportanceLevel::Moderate,
        "moderate",
        Tfn::raw(2.0 / 3.0, 1.0, 1.5),
    ),
    (
        ImportanceLevel::ModerateToStrong,
        "intermediate",
        Tfn::raw(1.0, 1.5, 2.0),
    ),
    (ImportanceLevel::Strong, "strong", Tfn::raw(1.5, 2.0, 2.5)),
    (
        ImportanceLevel::StrongToVeryStrong,
        "intermediate",
        Tfn::raw(2.0, 2.5, 3.0),
    ),
    (
        ImportanceLevel::VeryStrong,
        "very strong",
        Tfn::raw(2.5, 3.0, 3.5),
    ),
    (
        ImportanceLevel::VeryStrongToExtreme,
        "intermediate",
        Tfn::raw(3.0, 3.5, 4.0),
    ),
    (ImportanceLevel::Extreme, "extreme", Tfn::raw(3.5, 4.0, 4.5)),
];

impl ImportanceLevel {
    /// All levels in ascending order, `k1` through `k9`.
    pub const ALL: [ImportanceLevel; 9] = [
        ImportanceLevel::Equal,
        ImportanceLevel::EqualToModerate,
        ImportanceLevel::Moderate,
        ImportanceLevel::ModerateToStrong,
        ImportanceLevel::Strong,
        ImportanceLevel::StrongToVeryStrong,
        ImportanceLevel::VeryStrong,
        ImportanceLevel::VeryStrongToExtreme,
        ImportanceLevel::Extreme,
    ];

    /// Scale index in `1..=9`.
    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1..=9 => Ok(Self::ALL[usize::from(index - 1)]),
            _ => Err(Error::UnknownScale(format!("k{index}"))),
        }
    }

    pub fn tfn(self) -> Tfn {
        SCALE[self as usize].2
    }

    pub fn label(self) -> &'static str {
        SCALE[self as usize].1
    }

    /// The scale level (or reciprocal of one) that `t` equals, if any.
    pub fn classify(t: &Tfn) -> Option<(ImportanceLevel, bool)> {
        Self::ALL.iter().find_map(|&level| {
            let k = level.tfn();
            if t.approx_eq(&k, TFN_TOLERANCE) {
                Some((level, false))
            } else if t.approx_eq(&k.reciprocal(), TFN_TOLERANCE) {
                Some((level, true))
            } else {
                None
            }
        })
    }
}

impl fmt::Display for ImportanceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}", self.index())
    }
}

impl TryFrom<String> for ImportanceLevel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ImportanceLevel> for String {
    fn from(level: ImportanceLevel) -> Self {
        level.to_string()
    }
}

impl FromStr for ImportanceLevel {
    type Err = Error;

    /// Accepts `k1`..`k9` and the named levels (`equal`, `moderate`, `strong`,
    /// `very-strong`, `extreme`), optionally suffixed with `-over`.
    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let name = name.strip_suffix("-over").unwrap_or(&name);
        if let Some(idx) = name.strip_prefix('k') {
            if let Ok(i) = idx.parse::<u8>() {
                return ImportanceLevel::from_index(i);
            }
        }
        match name {
            "equal" => Ok(ImportanceLevel::Equal),
            "moderate" => Ok(ImportanceLevel::Moderate),
            "strong" => Ok(ImportanceLevel::Strong),
            "very-strong" => Ok(ImportanceLevel::VeryStrong),
            "extreme" => Ok(ImportanceLevel::Extreme),
            _ => Err(Error::UnknownScale(s.to_string())),
        }
    }
}
