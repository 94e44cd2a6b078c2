//! Fuzzy pairwise comparison matrices and extent analysis.
//!
//! Weights are derived in three steps:
//!
//! 1. Each row's fuzzy sum is multiplied by the reciprocal of the grand total,
//!    giving one synthetic extent per alternative.
//! 2. Each alternative's raw weight is the minimum degree of possibility that
//!    its extent is at least every other extent.
//! 3. Raw weights are normalized to sum to one.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{min_degree_of_possibility, Tfn};
use crate::weights::{normalize, RawWeights, WeightVector};

/// Component tolerance for the reciprocity check.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-6;

/// Square matrix of fuzzy judgments; cell `(i, j)` is the importance of
/// alternative `i` over alternative `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct FuzzyComparisonMatrix {
    alternatives: Vec<String>,
    cells: Vec<Vec<Tfn>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    alternatives: Vec<String>,
    cells: Vec<Vec<Tfn>>,
}

impl TryFrom<MatrixRepr> for FuzzyComparisonMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        FuzzyComparisonMatrix::new(r.alternatives, r.cells)
    }
}

impl From<FuzzyComparisonMatrix> for MatrixRepr {
    fn from(m: FuzzyComparisonMatrix) -> Self {
        MatrixRepr {
            alternatives: m.alternatives,
            cells: m.cells,
        }
    }
}

impl FuzzyComparisonMatrix {
    /// Builds a matrix from every cell. Only shape and identifiers are checked
    /// here; see [`validate_matrix`] for the judgment invariants.
    pub fn new(alternatives: Vec<String>, cells: Vec<Vec<Tfn>>) -> Result<Self> {
        let n = alternatives.len();
        if n < 2 {
            return Err(Error::TooFewAlternatives(n));
        }
        let mut seen = HashSet::new();
        for id in &alternatives {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        if cells.len() != n {
            return Err(Error::NotSquare {
                alternatives: n,
                row: cells.len(),
                len: 0,
            });
        }
        for (row, r) in cells.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    alternatives: n,
                    row,
                    len: r.len(),
                });
            }
        }
        Ok(FuzzyComparisonMatrix {
            alternatives,
            cells,
        })
    }

    /// Builds a reciprocal matrix from its strict upper triangle.
    /// `upper[i]` lists the judgments of alternative `i` over `i+1..n`.
    #[allow(clippy::needless_range_loop)] // writes both (i, j) and (j, i)
    pub fn from_upper_triangle(alternatives: Vec<String>, upper: Vec<Vec<Tfn>>) -> Result<Self> {
        let n = alternatives.len();
        if n < 2 {
            return Err(Error::TooFewAlternatives(n));
        }
        let mut cells = vec![vec![Tfn::ONE; n]; n];
        for i in 0..n {
            let row = upper.get(i).map(Vec::as_slice).unwrap_or(&[]);
            if row.len() != n - 1 - i {
                return Err(Error::NotSquare {
                    alternatives: n,
                    row: i,
                    len: row.len(),
                });
            }
            for (k, cell) in row.iter().enumerate() {
                let j = i + 1 + k;
                cells[i][j] = *cell;
                cells[j][i] = cell.reciprocal();
            }
        }
        FuzzyComparisonMatrix::new(alternatives, cells)
    }

    /// All judgments equal.
    pub fn uniform(alternatives: Vec<String>) -> Result<Self> {
        let n = alternatives.len();
        FuzzyComparisonMatrix::new(alternatives, vec![vec![Tfn::ONE; n]; n])
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn cell(&self, row: usize, col: usize) -> Tfn {
        self.cells[row][col]
    }

    pub fn rows(&self) -> &[Vec<Tfn>] {
        &self.cells
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a == id)
    }

    /// Reorders alternatives so that new position `k` holds old alternative `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let alternatives = order
            .iter()
            .map(|&i| self.alternatives[i].clone())
            .collect();
        let cells = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.cells[i][j]).collect())
            .collect();
        FuzzyComparisonMatrix::new(alternatives, cells)
    }

    /// Sets `(row, col)` and its mirror to the reciprocal.
    pub fn set_judgment(&mut self, row: usize, col: usize, judgment: Tfn) {
        if row == col {
            return;
        }
        self.cells[row][col] = judgment;
        self.cells[col][row] = judgment.reciprocal();
    }
}

/// A broken matrix invariant. Indices are zero-based; `Display` is one-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Diagonal {
        index: usize,
        found: Tfn,
    },
    Reciprocity {
        row: usize,
        col: usize,
        expected: Tfn,
        found: Tfn,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { index, found } => write!(
                f,
                "diagonal cell ({0}, {0}) is {found:.4}, expected (1, 1, 1)",
                index + 1
            ),
            Violation::Reciprocity {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "cell ({}, {}) is {found:.4}, expected reciprocal {expected:.4}",
                row + 1,
                col + 1
            ),
        }
    }
}

/// Outcome of [`validate_matrix`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatrixValidation {
    pub violations: Vec<Violation>,
}

impl MatrixValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Only reciprocity deviations, if any.
    pub fn is_structurally_valid(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Diagonal { .. }))
    }
}

/// Checks diagonal identity and reciprocity. Every violating cell is listed;
/// reciprocity is reported at the lower-triangle position.
pub fn validate_matrix(m: &FuzzyComparisonMatrix) -> MatrixValidation {
    let n = m.len();
    let mut violations = Vec::new();
    for i in 0..n {
        let d = m.cell(i, i);
        if d != Tfn::ONE {
            violations.push(Violation::Diagonal { index: i, found: d });
        }
    }
    for i in 1..n {
        for j in 0..i {
            let expected = m.cell(j, i).reciprocal();
            let found = m.cell(i, j);
            if !found.approx_eq(&expected, RECIPROCITY_TOLERANCE) {
                violations.push(Violation::Reciprocity {
                    row: i,
                    col: j,
                    expected,
                    found,
                });
            }
        }
    }
    MatrixValidation { violations }
}

/// Fuzzy share of one alternative's row in the whole matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticExtent {
    pub alternative: String,
    pub extent: Tfn,
}

fn require_identity_diagonal(m: &FuzzyComparisonMatrix) -> Result<()> {
    match (0..m.len()).find(|&i| m.cell(i, i) != Tfn::ONE) {
        Some(index) => Err(Error::NonIdentityDiagonal { index }),
        None => Ok(()),
    }
}

/// Row sum times the reciprocal of the grand total, per alternative.
pub fn synthetic_extents(m: &FuzzyComparisonMatrix) -> Result<Vec<SyntheticExtent>> {
    require_identity_diagonal(m)?;
    let row_sums: Vec<Tfn> = m
        .rows()
        .iter()
        .map(|row| row[1..].iter().fold(row[0], |acc, t| acc.add(t)))
        .collect();
    let total = row_sums[1..].iter().fold(row_sums[0], |acc, t| acc.add(t));
    row_sums
        .iter()
        .zip(m.alternatives())
        .map(|(s, id)| {
            Ok(SyntheticExtent {
                alternative: id.clone(),
                extent: Tfn::new(
                    s.lower() / total.upper(),
                    s.modal() / total.modal(),
                    s.upper() / total.lower(),
                )?,
            })
        })
        .collect()
}

/// Minimum degree of possibility of each extent over all others.
pub fn raw_weights(extents: &[SyntheticExtent]) -> Result<RawWeights> {
    if extents.len() < 2 {
        return Err(Error::TooFewAlternatives(extents.len()));
    }
    let mut entries = Vec::with_capacity(extents.len());
    for (i, e) in extents.iter().enumerate() {
        let others: Vec<Tfn> = extents
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| o.extent)
            .collect();
        entries.push((
            e.alternative.clone(),
            min_degree_of_possibility(&e.extent, &others)?,
        ));
    }
    RawWeights::new(entries)
}

/// Intermediate and final products of extent analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentAnalysis {
    pub extents: Vec<SyntheticExtent>,
    pub raw: RawWeights,
    pub weights: WeightVector,
}

/// Full extent analysis, keeping intermediate results.
pub fn analyze(m: &FuzzyComparisonMatrix) -> Result<ExtentAnalysis> {
    let extents = synthetic_extents(m)?;
    let raw = raw_weights(&extents)?;
    let weights = normalize(&raw)?;
    Ok(ExtentAnalysis {
        extents,
        raw,
        weights,
    })
}

/// Normalized weights of the matrix's alternatives.
pub fn derive_weights(m: &FuzzyComparisonMatrix) -> Result<WeightVector> {
    analyze(m).map(|a| a.weights)
}
