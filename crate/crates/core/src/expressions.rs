//! Bell expressions over two-setting, d-outcome bipartite scenarios.
//!
//! An expression is stored as a dense coefficient tensor indexed by
//! `(alice setting, bob setting, alice outcome, bob outcome)` and evaluated
//! as a plain contraction against a [`JointDistribution`]. The list of
//! correlator terms it was expanded from is kept alongside so the
//! correlator form can be used as an independent cross-check.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for normalization and positivity checks on tables.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Measurement setting index for either party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    One,
    Two,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::One, Setting::Two];

    pub fn index(self) -> usize {
        match self {
            Setting::One => 0,
            Setting::Two => 1,
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Which member of the family an expression was constructed as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Family {
    /// Four "+" correlators, local bound 3.
    #[value(name = "I")]
    I,
    /// The k = 0 bracket with "+" and "-" groups, local bound 2.
    #[value(name = "I3")]
    I3,
    /// The full weighted sum over k = 0 .. floor(d/2) - 1, local bound 2.
    #[value(name = "Id")]
    Id,
}

impl Family {
    /// Maximum over local deterministic strategies, as established by the
    /// constraint argument. Computed values are checked against this.
    pub fn local_bound(self) -> f64 {
        match self {
            Family::I => 3.0,
            Family::I3 | Family::Id => 2.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::I => "I",
            Family::I3 => "I3",
            Family::Id => "Id",
        };
        f.write_str(name)
    }
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(())
}

/// Inclusive bounds `(-floor(d/2), floor((d-1)/2))` of the canonical
/// representatives of Z_d.
pub fn canonical_interval(d: usize) -> (i64, i64) {
    let d = d as i64;
    (-(d / 2), (d - 1) / 2)
}

/// Reduces `x` mod `d` into the canonical interval.
pub fn canonical_difference(x: i64, d: usize) -> i64 {
    let di = d as i64;
    let m = x.rem_euclid(di);
    if m > (di - 1) / 2 {
        m - di
    } else {
        m
    }
}

/// Per-difference weight of the `Id` expression.
///
/// For `x >= 0` this is `1 - 2x/(d-1)`; for negative `x` it is
/// `-2x/(d-1) - (d+1)/(d-1)`. `x` must lie in the canonical interval.
pub fn weight_f(x: i64, d: usize) -> Result<f64> {
    check_dimension(d)?;
    let (lo, hi) = canonical_interval(d);
    if x < lo || x > hi {
        return Err(Error::OutsideInterval {
            value: x,
            dimension: d,
            lo,
            hi,
        });
    }
    let scale = (d - 1) as f64;
    let x = x as f64;
    Ok(if x >= 0.0 {
        -2.0 * x / scale + 1.0
    } else {
        -2.0 * x / scale - (d as f64 + 1.0) / scale
    })
}

/// One signed correlator `weight * P(A_alice = B_bob + shift)`.
///
/// Terms written with Bob first, `P(B_b = A_a + k)`, are stored with the
/// shift negated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorTerm {
    pub alice: Setting,
    pub bob: Setting,
    pub shift: i64,
    pub weight: f64,
}

/// The correlator terms of `family` at dimension `d`, in the order they are
/// written: the "+" group then the "-" group for each k.
pub fn correlator_terms(family: Family, d: usize) -> Result<Vec<CorrelatorTerm>> {
    use Setting::{One, Two};
    check_dimension(d)?;

    let term = |alice, bob, shift, weight| CorrelatorTerm {
        alice,
        bob,
        shift,
        weight,
    };
    let mut terms = Vec::new();
    let groups = match family {
        Family::I => {
            // P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)
            terms.push(term(One, One, 0, 1.0));
            terms.push(term(Two, One, -1, 1.0));
            terms.push(term(Two, Two, 0, 1.0));
            terms.push(term(One, Two, 0, 1.0));
            return Ok(terms);
        }
        Family::I3 => 1,
        Family::Id => d / 2,
    };
    for k in 0..groups as i64 {
        let w = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        // + [P(A1=B1+k) + P(B1=A2+k+1) + P(A2=B2+k) + P(B2=A1+k)]
        terms.push(term(One, One, k, w));
        terms.push(term(Two, One, -(k + 1), w));
        terms.push(term(Two, Two, k, w));
        terms.push(term(One, Two, -k, w));
        // - [P(A1=B1-k-1) + P(B1=A2-k) + P(A2=B2-k-1) + P(B2=A1-k-1)]
        terms.push(term(One, One, -k - 1, -w));
        terms.push(term(Two, One, k, -w));
        terms.push(term(Two, Two, -k - 1, -w));
        terms.push(term(One, Two, k + 1, -w));
    }
    Ok(terms)
}

#[inline]
fn flat_index(d: usize, a: usize, b: usize, j: usize, l: usize) -> usize {
    ((a * 2 + b) * d + j) * d + l
}

fn nested(d: usize, flat: &[f64]) -> Vec<Vec<Vec<Vec<f64>>>> {
    (0..2)
        .map(|a| {
            (0..2)
                .map(|b| {
                    (0..d)
                        .map(|j| {
                            let start = flat_index(d, a, b, j, 0);
                            flat[start..start + d].to_vec()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn flatten(nested: &[Vec<Vec<Vec<f64>>>]) -> Result<(usize, Vec<f64>)> {
    let bad = |msg: &str| Error::InvalidDistribution(msg.to_string());
    if nested.len() != 2 || nested.iter().any(|row| row.len() != 2) {
        return Err(bad("expected a 2 x 2 array of setting pairs"));
    }
    let d = nested[0][0].len();
    let mut flat = Vec::with_capacity(4 * d * d);
    for block in nested.iter().flatten() {
        if block.len() != d || block.iter().any(|row| row.len() != d) {
            return Err(bad("every setting pair must hold a d x d table"));
        }
        for row in block {
            flat.extend_from_slice(row);
        }
    }
    Ok((d, flat))
}

/// Coefficient tensor of a Bell expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpressionJson", into = "ExpressionJson")]
pub struct BellExpression {
    dimension: usize,
    family: Family,
    coefficients: Vec<f64>,
}

impl BellExpression {
    /// Expands every correlator term of `family` into its `d` joint-outcome
    /// coefficients.
    pub fn build(family: Family, d: usize) -> Result<Self> {
        let terms = correlator_terms(family, d)?;
        let mut coefficients = vec![0.0; 4 * d * d];
        for t in &terms {
            for j in 0..d {
                let l = (j as i64 - t.shift).rem_euclid(d as i64) as usize;
                coefficients[flat_index(d, t.alice.index(), t.bob.index(), j, l)] += t.weight;
            }
        }
        Ok(Self {
            dimension: d,
            family,
            coefficients,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Coefficient of `P(A_alice = j, B_bob = l)`.
    pub fn coefficient(&self, alice: Setting, bob: Setting, j: usize, l: usize) -> f64 {
        self.coefficients[flat_index(self.dimension, alice.index(), bob.index(), j, l)]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn terms(&self) -> Vec<CorrelatorTerm> {
        correlator_terms(self.family, self.dimension).expect("dimension validated at build")
    }

    /// Contraction of the coefficient tensor with the probability table.
    pub fn evaluate(&self, dist: &JointDistribution) -> Result<f64> {
        self.check_matches(dist)?;
        Ok(self
            .coefficients
            .iter()
            .zip(&dist.table)
            .map(|(c, p)| c * p)
            .sum())
    }

    /// Evaluates the expression as a weighted sum of correlators.
    pub fn evaluate_correlators(&self, dist: &JointDistribution) -> Result<f64> {
        self.check_matches(dist)?;
        Ok(self
            .terms()
            .iter()
            .map(|t| t.weight * dist.correlator(t.alice, t.bob, t.shift))
            .sum())
    }

    fn check_matches(&self, dist: &JointDistribution) -> Result<()> {
        if self.dimension != dist.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: dist.dimension,
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ExpressionJson {
    dimension: usize,
    family: Family,
    coefficients: Vec<Vec<Vec<Vec<f64>>>>,
}

impl From<BellExpression> for ExpressionJson {
    fn from(e: BellExpression) -> Self {
        Self {
            dimension: e.dimension,
            family: e.family,
            coefficients: nested(e.dimension, &e.coefficients),
        }
    }
}

impl TryFrom<ExpressionJson> for BellExpression {
    type Error = Error;

    fn try_from(json: ExpressionJson) -> Result<Self> {
        let (d, coefficients) = flatten(&json.coefficients)?;
        if d != json.dimension {
            return Err(Error::DimensionMismatch {
                expected: json.dimension,
                found: d,
            });
        }
        check_dimension(d)?;
        Ok(Self {
            dimension: d,
            family: json.family,
            coefficients,
        })
    }
}

/// Joint outcome probabilities `P(A_a = j, B_b = l)` for all four setting
/// pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionJson", into = "DistributionJson")]
pub struct JointDistribution {
    dimension: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    /// Validates a row-major `(a, b, j, l)` table.
    pub fn new(d: usize, table: Vec<f64>) -> Result<Self> {
        check_dimension(d)?;
        if table.len() != 4 * d * d {
            return Err(Error::InvalidDistribution(format!(
                "table has {} entries, expected {}",
                table.len(),
                4 * d * d
            )));
        }
        if let Some(p) = table
            .iter()
            .find(|p| !p.is_finite() || **p < -DISTRIBUTION_TOLERANCE)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {p} is negative or not finite"
            )));
        }
        for (pair, block) in table.chunks(d * d).enumerate() {
            let total: f64 = block.iter().sum();
            if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "setting pair ({}, {}) sums to {total}",
                    pair / 2 + 1,
                    pair % 2 + 1
                )));
            }
        }
        Ok(Self {
            dimension: d,
            table,
        })
    }

    /// Builds a table from `f(alice, bob, j, l)` and validates it.
    pub fn from_fn<F>(d: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(Setting, Setting, usize, usize) -> f64,
    {
        check_dimension(d)?;
        let mut table = Vec::with_capacity(4 * d * d);
        for a in Setting::BOTH {
            for b in Setting::BOTH {
                for j in 0..d {
                    for l in 0..d {
                        table.push(f(a, b, j, l));
                    }
                }
            }
        }
        Self::new(d, table)
    }

    /// Every outcome pair equally likely, the statistics of the maximally
    /// mixed state.
    pub fn uniform(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let p = 1.0 / (d * d) as f64;
        Ok(Self {
            dimension: d,
            table: vec![p; 4 * d * d],
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn probability(&self, alice: Setting, bob: Setting, j: usize, l: usize) -> f64 {
        self.table[flat_index(self.dimension, alice.index(), bob.index(), j, l)]
    }

    /// `P(A_alice = B_bob + k)`: total probability that the outcomes differ
    /// by `k` mod d, summed as `P(A = j, B = j - k)`.
    pub fn correlator(&self, alice: Setting, bob: Setting, k: i64) -> f64 {
        let d = self.dimension;
        (0..d)
            .map(|j| {
                let l = (j as i64 - k).rem_euclid(d as i64) as usize;
                self.probability(alice, bob, j, l)
            })
            .sum()
    }

    /// Convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, p: f64, other: &JointDistribution) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::NoiseOutOfRange(p));
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(x, y)| p * x + (1.0 - p) * y)
            .collect();
        Ok(Self {
            dimension: self.dimension,
            table,
        })
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &JointDistribution) -> f64 {
        self.table
            .iter()
            .zip(&other.table)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    dimension: usize,
    table: Vec<Vec<Vec<Vec<f64>>>>,
}

impl From<JointDistribution> for DistributionJson {
    fn from(dist: JointDistribution) -> Self {
        Self {
            dimension: dist.dimension,
            table: nested(dist.dimension, &dist.table),
        }
    }
}

impl TryFrom<DistributionJson> for JointDistribution {
    type Error = Error;

    fn try_from(json: DistributionJson) -> Result<Self> {
        let (d, table) = flatten(&json.table)?;
        if d != json.dimension {
            return Err(Error::DimensionMismatch {
                expected: json.dimension,
                found: d,
            });
        }
        JointDistribution::new(d, table)
    }
}
