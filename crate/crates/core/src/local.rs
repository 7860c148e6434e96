//! Local hidden-variable models and their maxima.
//!
//! A deterministic strategy fixes the outcomes of all four measurements.
//! The local bound of a Bell expression is its maximum over these
//! strategies, computed here in two independent ways: exhaustive
//! enumeration of the d^4 strategies, and enumeration of the cyclic
//! outcome differences `(A1-B1, B1-A2-1, A2-B2, B2-A1)` whose sum is
//! pinned to `-1 mod d`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expressions::{
    canonical_difference, canonical_interval, check_dimension, weight_f, BellExpression, Family,
    JointDistribution, Setting,
};

/// Default maximum number of strategies the brute-force search will visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Tolerance used to group equal strategy values.
pub const VALUE_TOLERANCE: f64 = 1e-12;

/// Outcomes assigned to A1, A2, B1, B2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
}

impl DeterministicStrategy {
    pub fn new(a1: usize, a2: usize, b1: usize, b2: usize) -> Self {
        Self { a1, a2, b1, b2 }
    }

    pub fn is_valid(&self, d: usize) -> bool {
        self.a1 < d && self.a2 < d && self.b1 < d && self.b2 < d
    }

    pub fn alice(&self, setting: Setting) -> usize {
        match setting {
            Setting::One => self.a1,
            Setting::Two => self.a2,
        }
    }

    pub fn bob(&self, setting: Setting) -> usize {
        match setting {
            Setting::One => self.b1,
            Setting::Two => self.b2,
        }
    }

    /// All d^4 strategies in lexicographic `(a1, a2, b1, b2)` order.
    pub fn all(d: usize) -> impl Iterator<Item = Self> {
        (0..d).flat_map(move |a1| {
            (0..d).flat_map(move |a2| {
                (0..d).flat_map(move |b1| (0..d).map(move |b2| Self::new(a1, a2, b1, b2)))
            })
        })
    }

    /// The joint table this strategy induces: a point mass in every
    /// setting-pair block.
    pub fn distribution(&self, d: usize) -> Result<JointDistribution> {
        if !self.is_valid(d) {
            return Err(Error::InvalidModel(format!(
                "strategy {self:?} has an outcome outside 0..{d}"
            )));
        }
        JointDistribution::from_fn(d, |a, b, j, l| {
            if j == self.alice(a) && l == self.bob(b) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Value of `expr` under this strategy, read directly from the four
    /// coefficients it selects.
    pub fn value(&self, expr: &BellExpression) -> f64 {
        use Setting::{One, Two};
        expr.coefficient(One, One, self.a1, self.b1)
            + expr.coefficient(One, Two, self.a1, self.b2)
            + expr.coefficient(Two, One, self.a2, self.b1)
            + expr.coefficient(Two, Two, self.a2, self.b2)
    }
}

/// The four links of the cycle `A1 = B1 + r, B1 = A2 + s + 1, A2 = B2 + t,
/// B2 = A1 + u`, each reduced into the canonical interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StrategyDifferences {
    pub a1_b1: i64,
    pub b1_a2: i64,
    pub a2_b2: i64,
    pub b2_a1: i64,
}

impl StrategyDifferences {
    pub fn as_array(&self) -> [i64; 4] {
        [self.a1_b1, self.b1_a2, self.a2_b2, self.b2_a1]
    }

    /// True iff the links sum to `-1 mod d` and all lie in the canonical
    /// interval.
    pub fn is_consistent(&self, d: usize) -> bool {
        let (lo, hi) = canonical_interval(d);
        let arr = self.as_array();
        arr.iter().all(|x| (lo..=hi).contains(x))
            && (arr.iter().sum::<i64>() + 1).rem_euclid(d as i64) == 0
    }

    /// Sum of the per-link weights, i.e. the `Id` value of any strategy
    /// realising these differences.
    pub fn id_value(&self, d: usize) -> Result<f64> {
        self.as_array()
            .iter()
            .map(|&x| weight_f(x, d))
            .sum::<Result<f64>>()
    }

    /// Number of strictly negative links.
    pub fn negatives(&self) -> usize {
        self.as_array().iter().filter(|&&x| x < 0).count()
    }
}

pub fn differences_of(strategy: &DeterministicStrategy, d: usize) -> StrategyDifferences {
    let (a1, a2, b1, b2) = (
        strategy.a1 as i64,
        strategy.a2 as i64,
        strategy.b1 as i64,
        strategy.b2 as i64,
    );
    StrategyDifferences {
        a1_b1: canonical_difference(a1 - b1, d),
        b1_a2: canonical_difference(b1 - a2 - 1, d),
        a2_b2: canonical_difference(a2 - b2, d),
        b2_a1: canonical_difference(b2 - a1, d),
    }
}

/// `Id` value of a strategy as the sum of per-link weights.
pub fn strategy_value(expr: &BellExpression, strategy: &DeterministicStrategy) -> Result<f64> {
    if expr.family() != Family::Id {
        return Err(Error::FamilyMismatch(expr.family()));
    }
    let d = expr.dimension();
    if !strategy.is_valid(d) {
        return Err(Error::InvalidModel(format!(
            "strategy {strategy:?} has an outcome outside 0..{d}"
        )));
    }
    differences_of(strategy, d).id_value(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceBound {
    pub max_value: f64,
    /// Every strategy attaining the maximum, lexicographically ordered.
    pub maximizers: Vec<DeterministicStrategy>,
    pub strategies_visited: u128,
}

pub fn local_bound_bruteforce(expr: &BellExpression) -> Result<BruteForceBound> {
    local_bound_bruteforce_with_cap(expr, DEFAULT_ENUMERATION_CAP)
}

pub fn local_bound_bruteforce_with_cap(
    expr: &BellExpression,
    cap: u128,
) -> Result<BruteForceBound> {
    let d = expr.dimension();
    let strategies = (d as u128).pow(4);
    if strategies > cap {
        return Err(Error::EnumerationCap { strategies, cap });
    }

    // one task per a1; each reports its own max and maximizers in order
    let partial: Vec<(f64, Vec<DeterministicStrategy>)> = (0..d)
        .into_par_iter()
        .map(|a1| {
            let mut best = f64::NEG_INFINITY;
            let mut argmax = Vec::new();
            for a2 in 0..d {
                for b1 in 0..d {
                    for b2 in 0..d {
                        let s = DeterministicStrategy::new(a1, a2, b1, b2);
                        let v = s.value(expr);
                        if v > best + VALUE_TOLERANCE {
                            best = v;
                            argmax.clear();
                            argmax.push(s);
                        } else if (v - best).abs() <= VALUE_TOLERANCE {
                            argmax.push(s);
                        }
                    }
                }
            }
            (best, argmax)
        })
        .collect();

    let max_value = partial
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let maximizers = partial
        .into_iter()
        .filter(|(v, _)| (v - max_value).abs() <= VALUE_TOLERANCE)
        .flat_map(|(_, s)| s)
        .collect();
    Ok(BruteForceBound {
        max_value,
        maximizers,
        strategies_visited: strategies,
    })
}

/// Outcome of the difference-space enumeration, grouped by how many of
/// the four links are negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseAnalysis {
    pub dimension: usize,
    pub max_value: f64,
    /// Distinct attainable values, descending.
    pub attainable: Vec<f64>,
    /// Indexed by number of negative links, 0 through 4.
    pub cases: Vec<SignCase>,
    pub tuples_visited: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCase {
    pub negatives: usize,
    /// Distinct values of the plain sum of the four links.
    pub link_sums: Vec<i64>,
    /// Distinct `Id` values, descending.
    pub values: Vec<f64>,
}

fn insert_value(values: &mut Vec<f64>, v: f64) {
    if !values.iter().any(|x| (x - v).abs() <= VALUE_TOLERANCE) {
        values.push(v);
    }
}

/// Enumerates every consistent difference tuple and tabulates its `Id`
/// value. Three links are free; the fourth is fixed by the sum constraint.
pub fn local_bound_cases(d: usize) -> Result<CaseAnalysis> {
    check_dimension(d)?;
    let (lo, hi) = canonical_interval(d);
    let mut cases: Vec<SignCase> = (0..=4)
        .map(|negatives| SignCase {
            negatives,
            link_sums: Vec::new(),
            values: Vec::new(),
        })
        .collect();
    let mut attainable = Vec::new();
    let mut tuples_visited = 0;

    for r in lo..=hi {
        for s in lo..=hi {
            for t in lo..=hi {
                let u = canonical_difference(-1 - r - s - t, d);
                let diffs = StrategyDifferences {
                    a1_b1: r,
                    b1_a2: s,
                    a2_b2: t,
                    b2_a1: u,
                };
                debug_assert!(diffs.is_consistent(d));
                let v = diffs.id_value(d)?;
                tuples_visited += 1;
                insert_value(&mut attainable, v);
                let case = &mut cases[diffs.negatives()];
                insert_value(&mut case.values, v);
                let sum = r + s + t + u;
                if !case.link_sums.contains(&sum) {
                    case.link_sums.push(sum);
                }
            }
        }
    }

    let desc = |v: &mut Vec<f64>| v.sort_by(|a, b| b.total_cmp(a));
    desc(&mut attainable);
    for case in &mut cases {
        desc(&mut case.values);
        case.link_sums.sort_unstable();
    }
    Ok(CaseAnalysis {
        dimension: d,
        max_value: attainable[0],
        attainable,
        cases,
        tuples_visited,
    })
}

/// A probability distribution `c_{jklm}` over deterministic strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel {
    dimension: usize,
    weights: BTreeMap<DeterministicStrategy, f64>,
}

impl LocalModel {
    pub fn new(d: usize, weights: BTreeMap<DeterministicStrategy, f64>) -> Result<Self> {
        check_dimension(d)?;
        if let Some((s, _)) = weights.iter().find(|(s, _)| !s.is_valid(d)) {
            return Err(Error::InvalidModel(format!(
                "strategy {s:?} has an outcome outside 0..{d}"
            )));
        }
        if let Some((s, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidModel(format!(
                "weight {w} on {s:?} is negative"
            )));
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > VALUE_TOLERANCE {
            return Err(Error::InvalidModel(format!("weights sum to {total}")));
        }
        Ok(Self {
            dimension: d,
            weights,
        })
    }

    pub fn point_mass(d: usize, strategy: DeterministicStrategy) -> Result<Self> {
        Self::new(d, BTreeMap::from([(strategy, 1.0)]))
    }

    pub fn uniform(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let w = 1.0 / (d as f64).powi(4);
        Self::new(d, DeterministicStrategy::all(d).map(|s| (s, w)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weights(&self) -> &BTreeMap<DeterministicStrategy, f64> {
        &self.weights
    }

    /// Marginal joint table `P(A_a = j, B_b = l) = sum of c over the other
    /// two outcomes`.
    pub fn distribution(&self) -> Result<JointDistribution> {
        let d = self.dimension;
        let mut table = vec![0.0; 4 * d * d];
        for (s, w) in &self.weights {
            for a in Setting::BOTH {
                for b in Setting::BOTH {
                    let idx = ((a.index() * 2 + b.index()) * d + s.alice(a)) * d + s.bob(b);
                    table[idx] += w;
                }
            }
        }
        JointDistribution::new(d, table)
    }
}

pub fn model_value(expr: &BellExpression, model: &LocalModel) -> Result<f64> {
    if expr.dimension() != model.dimension {
        return Err(Error::DimensionMismatch {
            expected: expr.dimension(),
            found: model.dimension,
        });
    }
    Ok(model.weights.iter().map(|(s, w)| w * s.value(expr)).sum())
}
