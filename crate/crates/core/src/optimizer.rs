//! Numerical search for measurement phases that maximise a Bell
//! expression on the two-qudit state.
//!
//! The search space is the four phase vectors (gauge-fixed so the phase of
//! `|0>` is zero), optionally with the Schmidt coefficients of the state.
//! Each restart starts from a seeded random point and runs either cyclic
//! coordinate ascent or a Nelder-Mead simplex (re-initialised around its
//! incumbent when it collapses).

use std::f64::consts::PI;
use std::io;

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expressions::{check_dimension, BellExpression, Family};
use crate::quantum::{
    born_rule_distribution, quantum_value, MeasurementPhases, PhaseVectors, QuantumSetup,
};

pub const DEFAULT_BUDGET: usize = 50_000;
pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_SEED: u64 = 2001;

/// Agreement required between a reported optimum and its recomputation.
pub const VERIFY_TOLERANCE: f64 = 1e-9;
/// Margin above the closed-form value before a result is flagged.
pub const EXCESS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeParameters {
    pub alice_phases: bool,
    pub bob_phases: bool,
    pub state_weights: bool,
}

impl FreeParameters {
    pub const PHASES: Self = Self {
        alice_phases: true,
        bob_phases: true,
        state_weights: false,
    };
}

/// Local search run inside each restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum SearchMethod {
    /// Cyclic coordinate ascent. Along a single phase the objective is
    /// `A + B cos x + C sin x`, so three evaluations locate the exact
    /// maximum on that coordinate; state weights use a shrinking step.
    Coordinate,
    /// Adaptive Nelder-Mead simplex.
    NelderMead,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub dimension: usize,
    pub family: Family,
    pub free: FreeParameters,
    /// Objective evaluations shared across all restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub method: SearchMethod,
}

impl OptimizationProblem {
    /// Phase-only search with the default budget, restarts and seed.
    pub fn phases_only(family: Family, dimension: usize) -> Self {
        Self {
            dimension,
            family,
            free: FreeParameters::PHASES,
            budget: DEFAULT_BUDGET,
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
            method: SearchMethod::Coordinate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dimension(self.dimension)?;
        if self.budget == 0 {
            return Err(Error::InvalidProblem("budget must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidProblem(
                "at least one restart is required".into(),
            ));
        }
        let f = self.free;
        if !(f.alice_phases || f.bob_phases || f.state_weights) {
            return Err(Error::InvalidProblem("no parameter block is free".into()));
        }
        Ok(())
    }

    fn phase_block(&self) -> usize {
        2 * (self.dimension - 1)
    }

    /// Length of the flat parameter vector: `2(d-1)` per free phase block
    /// and `d` for the state weights.
    pub fn parameter_count(&self) -> usize {
        let mut n = 0;
        if self.free.alice_phases {
            n += self.phase_block();
        }
        if self.free.bob_phases {
            n += self.phase_block();
        }
        if self.free.state_weights {
            n += self.dimension;
        }
        n
    }

    /// Splits a flat vector into phases and normalised state weights.
    /// Fixed blocks take the CGLMP phases and the uniform state.
    pub fn unpack(&self, params: &[f64]) -> Result<(MeasurementPhases, Vec<f64>)> {
        let expected = self.parameter_count();
        if params.len() != expected {
            return Err(Error::ParameterLength {
                expected,
                found: params.len(),
            });
        }
        let d = self.dimension;
        let default = MeasurementPhases::cglmp(d)?.to_vectors();
        let mut rest = params;
        let mut take_phases = |free: bool, fixed: [Vec<f64>; 2]| -> [Vec<f64>; 2] {
            if !free {
                return fixed;
            }
            let (block, tail) = rest.split_at(2 * (d - 1));
            rest = tail;
            [0, 1].map(|s| {
                std::iter::once(0.0)
                    .chain(block[s * (d - 1)..(s + 1) * (d - 1)].iter().copied())
                    .collect()
            })
        };
        let alice = take_phases(self.free.alice_phases, default.alice);
        let bob = take_phases(self.free.bob_phases, default.bob);
        let phases = MeasurementPhases::from_vectors(d, PhaseVectors { alice, bob })?;

        let weights = if self.free.state_weights {
            normalise_weights(rest)
        } else {
            vec![1.0 / (d as f64).sqrt(); d]
        };
        Ok((phases, weights))
    }

    /// Inverse of [`unpack`](Self::unpack) for the free blocks, after
    /// removing each vector's `|0>` phase.
    pub fn pack(&self, phases: &MeasurementPhases, weights: &[f64]) -> Result<Vec<f64>> {
        let d = self.dimension;
        if phases.dimension() != d || weights.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: phases.dimension(),
            });
        }
        let vectors = phases.to_vectors();
        let mut out = Vec::with_capacity(self.parameter_count());
        let mut push = |block: &[Vec<f64>; 2]| {
            for v in block {
                out.extend(v[1..].iter().map(|x| x - v[0]));
            }
        };
        if self.free.alice_phases {
            push(&vectors.alice);
        }
        if self.free.bob_phases {
            push(&vectors.bob);
        }
        if self.free.state_weights {
            out.extend_from_slice(weights);
        }
        Ok(out)
    }
}

fn normalise_weights(raw: &[f64]) -> Vec<f64> {
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        let d = raw.len();
        return vec![1.0 / (d as f64).sqrt(); d];
    }
    raw.iter().map(|x| x.abs() / norm).collect()
}

/// Value of `expr` on the Born-rule statistics of the given setup.
pub fn setup_value(
    expr: &BellExpression,
    phases: &MeasurementPhases,
    weights: &[f64],
) -> Result<f64> {
    let state = weights.iter().map(|&w| Complex::new(w, 0.0)).collect();
    let setup = QuantumSetup::new(state, phases.clone())?;
    expr.evaluate(&born_rule_distribution(&setup)?)
}

pub fn objective(problem: &OptimizationProblem, params: &[f64]) -> Result<f64> {
    problem.validate()?;
    let expr = BellExpression::build(problem.family, problem.dimension)?;
    let (phases, weights) = problem.unpack(params)?;
    setup_value(&expr, &phases, &weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation_index: usize,
    pub incumbent_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_phases: MeasurementPhases,
    pub best_state_weights: Vec<f64>,
    pub best_parameters: Vec<f64>,
    pub best_restart: usize,
    pub evaluations: usize,
    /// False when no evaluation beat the first one.
    pub improved: bool,
    /// Closed-form `Id` value, when the search space contains the CGLMP
    /// measurements on the maximally entangled state.
    pub reference_value: Option<f64>,
    pub exceeds_reference: bool,
    /// Global incumbent after each improvement, in evaluation order.
    pub trace: Vec<TracePoint>,
}

/// Simplex coefficients adapted to the dimension (Gao and Han).
struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn adaptive(n: usize) -> Self {
        let n = n.max(2) as f64;
        Self {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 1.0 / (2.0 * n),
            shrink: 1.0 - 1.0 / n,
        }
    }
}

/// Counts evaluations, keeps the best point seen and records improvements.
struct Tracker<F> {
    f: F,
    budget: usize,
    evaluations: usize,
    best_x: Vec<f64>,
    best_value: f64,
    trace: Vec<TracePoint>,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// Returns the negated objective, for minimisation.
    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.evaluations += 1;
        if v > self.best_value {
            self.best_value = v;
            self.best_x = x.to_vec();
            self.trace.push(TracePoint {
                evaluation_index: self.evaluations - 1,
                incumbent_value: v,
            });
        }
        -v
    }
}

/// One Nelder-Mead descent from a simplex around `start`. Stops when the
/// simplex collapses or the budget runs out.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(tracker: &mut Tracker<F>, start: &[f64], step: f64) {
    let n = start.len();
    let c = Coefficients::adaptive(n);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if tracker.exhausted() {
            return;
        }
        let mut x = start.to_vec();
        if i > 0 {
            x[i - 1] += step;
        }
        let fx = tracker.eval(&x);
        simplex.push((x, fx));
    }

    let point = |centroid: &[f64], worst: &[f64], coef: f64| -> Vec<f64> {
        centroid
            .iter()
            .zip(worst)
            .map(|(c, w)| c + coef * (c - w))
            .collect()
    };

    while !tracker.exhausted() {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < 1e-14 && size < 1e-8 {
            return;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = point(&centroid, &worst, c.reflect);
        let fr = tracker.eval(&reflected);

        if fr < simplex[0].1 {
            if tracker.exhausted() {
                simplex[n] = (reflected, fr);
                return;
            }
            let expanded = point(&centroid, &worst, c.reflect * c.expand);
            let fe = tracker.eval(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            if tracker.exhausted() {
                return;
            }
            let (contracted, fc) = if fr < simplex[n].1 {
                let x = point(&centroid, &worst, c.reflect * c.contract);
                let f = tracker.eval(&x);
                (x, f)
            } else {
                let x = point(&centroid, &worst, -c.contract);
                let f = tracker.eval(&x);
                (x, f)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    if tracker.exhausted() {
                        return;
                    }
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, v)| b + c.shrink * (v - b))
                        .collect();
                    let f = tracker.eval(&x);
                    *vertex = (x, f);
                }
            }
        }
    }
}

/// Cyclic coordinate ascent. The first `phase_params` coordinates are
/// angles and are maximised exactly from three equally spaced samples;
/// the rest take a step in either direction, halving it after a sweep
/// without progress.
fn coordinate_ascent<F: FnMut(&[f64]) -> f64>(
    tracker: &mut Tracker<F>,
    start: &[f64],
    phase_params: usize,
) {
    const THIRD: f64 = 2.0 * PI / 3.0;
    let mut x = start.to_vec();
    if tracker.exhausted() {
        return;
    }
    let mut fx = -tracker.eval(&x);
    let mut step = 0.25;

    loop {
        let before = fx;
        for i in 0..x.len() {
            if i < phase_params {
                let theta = x[i];
                let mut samples = [fx, 0.0, 0.0];
                for (m, sample) in samples.iter_mut().enumerate().skip(1) {
                    if tracker.exhausted() {
                        return;
                    }
                    x[i] = theta + THIRD * m as f64;
                    *sample = -tracker.eval(&x);
                }
                // first Fourier coefficient of the three samples
                let (c, s) = samples
                    .iter()
                    .enumerate()
                    .fold((0.0, 0.0), |(c, s), (m, v)| {
                        let a = THIRD * m as f64;
                        (c + v * a.cos(), s + v * a.sin())
                    });
                if tracker.exhausted() {
                    return;
                }
                x[i] = (theta + s.atan2(c)).rem_euclid(2.0 * PI);
                let v = -tracker.eval(&x);
                let (m, best) =
                    samples
                        .iter()
                        .enumerate()
                        .fold(
                            (0, f64::NEG_INFINITY),
                            |acc, (m, &v)| if v > acc.1 { (m, v) } else { acc },
                        );
                if v >= best {
                    fx = v;
                } else {
                    x[i] = (theta + THIRD * m as f64).rem_euclid(2.0 * PI);
                    fx = best;
                }
            } else {
                let old = x[i];
                for dir in [1.0, -1.0] {
                    if tracker.exhausted() {
                        return;
                    }
                    x[i] = old + dir * step;
                    let v = -tracker.eval(&x);
                    if v > fx {
                        fx = v;
                        break;
                    }
                    x[i] = old;
                }
            }
        }
        if fx - before < 1e-14 {
            if phase_params < x.len() && step > 1e-8 {
                step *= 0.5;
                continue;
            }
            return;
        }
    }
}

struct RestartOutcome {
    best_x: Vec<f64>,
    best_value: f64,
    evaluations: usize,
    trace: Vec<TracePoint>,
}

fn run_restart(
    problem: &OptimizationProblem,
    expr: &BellExpression,
    index: usize,
    budget: usize,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    rng.set_stream(index as u64);

    let n = problem.parameter_count();
    let phase_params = n - if problem.free.state_weights {
        problem.dimension
    } else {
        0
    };
    let start: Vec<f64> = (0..n)
        .map(|i| {
            if i < phase_params {
                rng.random_range(0.0..2.0 * PI)
            } else {
                rng.random_range(0.05..1.0)
            }
        })
        .collect();

    let f = |x: &[f64]| {
        let (phases, weights) = problem.unpack(x).expect("parameter length fixed by layout");
        setup_value(expr, &phases, &weights).unwrap_or(f64::NEG_INFINITY)
    };
    let mut tracker = Tracker {
        f,
        budget,
        evaluations: 0,
        best_x: start.clone(),
        best_value: f64::NEG_INFINITY,
        trace: Vec::new(),
    };

    match problem.method {
        SearchMethod::Coordinate => coordinate_ascent(&mut tracker, &start, phase_params),
        SearchMethod::NelderMead => {
            let mut step = 0.6;
            let mut last = f64::NEG_INFINITY;
            while !tracker.exhausted() {
                let from = tracker.best_x.clone();
                nelder_mead(&mut tracker, &from, step);
                if tracker.best_value - last < 1e-13 && step < 1e-3 {
                    break;
                }
                if tracker.best_value - last < 1e-13 {
                    step *= 0.3;
                } else {
                    step = 0.3;
                }
                last = tracker.best_value;
            }
        }
    }
    RestartOutcome {
        best_x: tracker.best_x,
        best_value: tracker.best_value,
        evaluations: tracker.evaluations,
        trace: tracker.trace,
    }
}

/// Seeded multi-start search. Restarts run in parallel; the merge is in
/// restart order, so results do not depend on scheduling.
pub fn maximize(problem: &OptimizationProblem) -> Result<OptimizationResult> {
    problem.validate()?;
    let expr = BellExpression::build(problem.family, problem.dimension)?;

    let base = problem.budget / problem.restarts;
    let extra = problem.budget % problem.restarts;
    let budgets: Vec<usize> = (0..problem.restarts)
        .map(|r| base + usize::from(r < extra))
        .collect();

    let outcomes: Vec<RestartOutcome> = budgets
        .par_iter()
        .enumerate()
        .filter(|(_, &b)| b > 0)
        .map(|(r, &b)| run_restart(problem, &expr, r, b))
        .collect();
    let indices: Vec<usize> = budgets
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0)
        .map(|(r, _)| r)
        .collect();

    let mut trace = Vec::new();
    let mut offset = 0;
    let mut best: Option<(usize, &RestartOutcome)> = None;
    for (&r, outcome) in indices.iter().zip(&outcomes) {
        for point in &outcome.trace {
            let incumbent = trace
                .last()
                .map_or(f64::NEG_INFINITY, |p: &TracePoint| p.incumbent_value);
            if point.incumbent_value > incumbent {
                trace.push(TracePoint {
                    evaluation_index: offset + point.evaluation_index,
                    incumbent_value: point.incumbent_value,
                });
            }
        }
        offset += outcome.evaluations;
        if best.is_none_or(|(_, b)| outcome.best_value > b.best_value) {
            best = Some((r, outcome));
        }
    }
    let (best_restart, outcome) = best.expect("budget >= 1 gives at least one restart");

    let (best_phases, best_state_weights) = problem.unpack(&outcome.best_x)?;
    let recomputed = verify(&expr, &best_phases, &best_state_weights)?;
    if (recomputed - outcome.best_value).abs() > VERIFY_TOLERANCE {
        return Err(Error::CrossCheck(format!(
            "reported optimum {} recomputes to {recomputed}",
            outcome.best_value
        )));
    }

    let reference_value = if problem.family == Family::Id && !problem.free.state_weights {
        Some(quantum_value(problem.dimension)?)
    } else {
        None
    };
    Ok(OptimizationResult {
        best_value: outcome.best_value,
        exceeds_reference: reference_value
            .is_some_and(|r| outcome.best_value > r + EXCESS_TOLERANCE),
        reference_value,
        best_parameters: outcome.best_x.clone(),
        best_phases,
        best_state_weights,
        best_restart,
        evaluations: offset,
        improved: trace.len() > 1,
        trace,
    })
}

/// Recomputes a value from the reported phases with a freshly built
/// expression.
fn verify(expr: &BellExpression, phases: &MeasurementPhases, weights: &[f64]) -> Result<f64> {
    let fresh = BellExpression::build(expr.family(), expr.dimension())?;
    setup_value(&fresh, phases, weights)
}

/// Writes `evaluation_index,incumbent_value` rows at full precision.
pub fn write_trace_csv<W: io::Write>(trace: &[TracePoint], writer: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::InvalidProblem(format!("trace export failed: {e}"));
    let mut w = csv::Writer::from_writer(writer);
    for point in trace {
        w.serialize(point).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidProblem(format!("trace export failed: {e}")))
}

pub fn read_trace_csv<R: io::Read>(reader: R) -> Result<Vec<TracePoint>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidProblem(format!("trace import failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cglmp_params(problem: &OptimizationProblem) -> Vec<f64> {
        let d = problem.dimension;
        let w = vec![1.0 / (d as f64).sqrt(); d];
        problem
            .pack(&MeasurementPhases::cglmp(d).unwrap(), &w)
            .unwrap()
    }

    #[test]
    fn objective_at_cglmp_phases() {
        let p = OptimizationProblem::phases_only(Family::Id, 3);
        assert_abs_diff_eq!(
            objective(&p, &cglmp_params(&p)).unwrap(),
            2.87293,
            epsilon = 5e-5
        );
        for d in 2..=8 {
            let p = OptimizationProblem::phases_only(Family::Id, d);
            assert_abs_diff_eq!(
                objective(&p, &cglmp_params(&p)).unwrap(),
                quantum_value(d).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn objective_at_zero_phases_is_two() {
        for d in 2..=9 {
            let p = OptimizationProblem::phases_only(Family::Id, d);
            let zeros = vec![0.0; p.parameter_count()];
            assert_abs_diff_eq!(objective(&p, &zeros).unwrap(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn objective_rejects_bad_length() {
        let p = OptimizationProblem::phases_only(Family::Id, 3);
        assert_eq!(
            objective(&p, &[0.0; 3]),
            Err(Error::ParameterLength {
                expected: 8,
                found: 3
            })
        );
    }

    #[test]
    fn problem_validation() {
        let mut p = OptimizationProblem::phases_only(Family::Id, 3);
        p.budget = 0;
        assert!(p.validate().is_err());
        let mut p = OptimizationProblem::phases_only(Family::Id, 3);
        p.free = FreeParameters {
            alice_phases: false,
            bob_phases: false,
            state_weights: false,
        };
        assert!(matches!(p.validate(), Err(Error::InvalidProblem(_))));
        assert!(OptimizationProblem::phases_only(Family::Id, 1)
            .validate()
            .is_err());
    }

    #[test]
    fn layout_with_state_weights() {
        let mut p = OptimizationProblem::phases_only(Family::Id, 3);
        p.free.state_weights = true;
        assert_eq!(p.parameter_count(), 11);
        let params = cglmp_params(&p);
        assert_abs_diff_eq!(
            objective(&p, &params).unwrap(),
            quantum_value(3).unwrap(),
            epsilon = 1e-12
        );
        // weights are normalised internally
        let mut scaled = params.clone();
        scaled[8..].iter_mut().for_each(|w| *w *= 7.0);
        assert_abs_diff_eq!(
            objective(&p, &scaled).unwrap(),
            quantum_value(3).unwrap(),
            epsilon = 1e-12
        );

        p.free.alice_phases = false;
        assert_eq!(p.parameter_count(), 7);
    }

    #[test]
    fn budget_of_one_returns_initial_point() {
        let mut p = OptimizationProblem::phases_only(Family::Id, 3);
        p.budget = 1;
        let r = maximize(&p).unwrap();
        assert_eq!(r.evaluations, 1);
        assert!(!r.improved);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn small_search_is_reproducible_and_monotone() {
        let mut p = OptimizationProblem::phases_only(Family::Id, 3);
        p.budget = 4000;
        p.restarts = 4;
        let a = maximize(&p).unwrap();
        let b = maximize(&p).unwrap();
        assert_eq!(a, b);
        assert!(a
            .trace
            .windows(2)
            .all(|w| w[0].incumbent_value < w[1].incumbent_value));
        assert!(a
            .trace
            .windows(2)
            .all(|w| w[0].evaluation_index < w[1].evaluation_index));
        assert!(a.evaluations <= 4000);
        assert_eq!(a.trace.last().unwrap().incumbent_value, a.best_value);
        assert_abs_diff_eq!(a.best_value, quantum_value(3).unwrap(), epsilon = 1e-3);
        assert!(!a.exceeds_reference);

        p.seed += 1;
        assert_ne!(maximize(&p).unwrap().trace, a.trace);
    }

    #[test]
    fn nelder_mead_reaches_closed_form() {
        for d in [2, 3] {
            let mut p = OptimizationProblem::phases_only(Family::Id, d);
            p.method = SearchMethod::NelderMead;
            p.restarts = 4;
            p.budget = 20_000;
            let r = maximize(&p).unwrap();
            assert_eq!(r, maximize(&p).unwrap());
            assert_abs_diff_eq!(r.best_value, quantum_value(d).unwrap(), epsilon = 1e-3);
            assert!(!r.exceeds_reference);
            assert!(r.evaluations <= p.budget);
        }
    }

    #[test]
    fn objective_ignores_global_phase() {
        let p = OptimizationProblem::phases_only(Family::Id, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: Vec<f64> = (0..p.parameter_count())
                .map(|_| rng.random_range(0.0..2.0 * PI))
                .collect();
            let (phases, weights) = p.unpack(&x).unwrap();
            let mut v = phases.to_vectors();
            let (ca, cb) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            v.alice.iter_mut().flatten().for_each(|x| *x += ca);
            v.bob.iter_mut().flatten().for_each(|x| *x += cb);
            let shifted = MeasurementPhases::from_vectors(4, v).unwrap();
            let expr = BellExpression::build(Family::Id, 4).unwrap();
            assert_abs_diff_eq!(
                objective(&p, &x).unwrap(),
                setup_value(&expr, &shifted, &weights).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn trace_csv_round_trip() {
        let trace = vec![
            TracePoint {
                evaluation_index: 0,
                incumbent_value: 1.234_567_890_123_456_7,
            },
            TracePoint {
                evaluation_index: 17,
                incumbent_value: 2.872_934_051_172_335,
            },
        ];
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("evaluation_index,incumbent_value\n"));
        assert_eq!(read_trace_csv(buf.as_slice()).unwrap(), trace);
    }
}
