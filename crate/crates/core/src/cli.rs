//! Command-line surface: argument parsing, report construction and
//! rendering as human tables, JSON or CSV.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expressions::{canonical_interval, BellExpression, Family};
use crate::local::{local_bound_bruteforce, local_bound_cases, DeterministicStrategy};
use crate::optimizer::{
    maximize, write_trace_csv, FreeParameters, OptimizationProblem, SearchMethod, TracePoint,
    DEFAULT_BUDGET, DEFAULT_RESTARTS, DEFAULT_SEED,
};
use crate::quantum::{
    asymptotic_value, correlator_q, family_noise_threshold, family_noisy_value,
    family_quantum_value, noise_threshold, quantum_value, quantum_value_i, NoiseModel,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Relative paths for `--output` and `--trace` are resolved against this
/// directory when it is set.
pub const OUTPUT_DIR_ENV: &str = "CGLMP_OUTPUT_DIR";

/// Relative tolerance for constants quoted to five significant digits.
pub const QUOTED_TOLERANCE: f64 = 5e-5;
/// Relative tolerance for closed-form expressions.
pub const SYMBOLIC_TOLERANCE: f64 = 1e-10;

/// Sweeps cross-check the case analysis by brute force up to this many
/// strategies.
const SWEEP_BRUTE_FORCE_CAP: u128 = 1_000_000;
const LISTED_MAXIMIZERS: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "cglmp",
    version,
    about = "Bell expressions for two qudits: local bounds, quantum values and noise thresholds"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local bound by brute force and by case analysis.
    Bound(Target),
    /// Quantum values and the correlator table at the CGLMP setup.
    Quantum(Target),
    /// Noise threshold, and the noisy value for a given visibility.
    Threshold {
        #[command(flatten)]
        target: Target,
        /// Probability that the state is unaffected by noise.
        #[arg(long, value_parser = parse_probability)]
        noise_p: Option<f64>,
    },
    /// One row per dimension: local bound, quantum value, noise threshold.
    Sweep(Target),
    /// Numerical search over measurement phases.
    Optimize {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SearchMethod::Coordinate)]
        method: SearchMethod,
        /// Also optimise the Schmidt coefficients of the state.
        #[arg(long)]
        free_state: bool,
        /// Where to write the optimisation trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Quoted constants next to freshly computed values.
    Reproduce,
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    #[arg(long, value_enum, default_value_t = Family::Id)]
    pub family: Family,
    /// A dimension `d` or an inclusive range `a..b`.
    #[arg(long, short, default_value = "3")]
    pub dimension: Dimensions,
}

/// Inclusive range of dimensions, each at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimensions {
    pub first: usize,
    pub last: usize,
}

impl Dimensions {
    pub fn single(self) -> Result<usize, CliError> {
        if self.first == self.last {
            Ok(self.first)
        } else {
            Err(CliError::Validation(format!(
                "this command takes a single dimension, got {}..{}",
                self.first, self.last
            )))
        }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

impl FromStr for Dimensions {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| -> Result<usize, String> {
            let d: usize = x
                .trim()
                .parse()
                .map_err(|_| format!("`{x}` is not a dimension"))?;
            if d < 2 {
                return Err(format!("dimension must be at least 2, got {d}"));
            }
            Ok(d)
        };
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let d = parse(s)?;
                (d, d)
            }
        };
        if first > last {
            return Err(format!("empty range {first}..{last}"));
        }
        Ok(Self { first, last })
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("noise weight must lie in [0, 1], got {p}"));
    }
    Ok(p)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::CrossCheck(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CrossCheck(msg) => CliError::CrossCheck(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceSummary {
    pub max_value: f64,
    pub maximizer_count: usize,
    /// The first few maximizers in lexicographic order.
    pub maximizers: Vec<DeterministicStrategy>,
    pub strategies_visited: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub max_value: f64,
    pub attainable: Vec<f64>,
    pub tuples_visited: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dimension: usize,
    pub family: Family,
    pub brute_force: Option<BruteForceSummary>,
    /// Why brute force was skipped, if it was.
    pub brute_force_skipped: Option<String>,
    /// Only defined for `Id`.
    pub case_analysis: Option<CaseSummary>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorRow {
    pub c: i64,
    pub q_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    pub dimension: usize,
    pub family: Family,
    /// The requested family on the closed-form table.
    pub family_value: f64,
    pub quantum_value: f64,
    pub quantum_value_i: f64,
    pub asymptotic_value: f64,
    pub correlators: Vec<CorrelatorRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub dimension: usize,
    pub family: Family,
    pub local_bound: f64,
    pub quantum_value: f64,
    pub noise_threshold: f64,
    pub noise_p: Option<f64>,
    pub noisy_value: Option<f64>,
    pub violated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub local_bound: f64,
    pub quantum_value: f64,
    pub noise_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: Family,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub dimension: usize,
    pub family: Family,
    pub best_value: f64,
    pub reference_value: Option<f64>,
    pub exceeds_reference: bool,
    pub improved: bool,
    pub best_restart: usize,
    pub evaluations: usize,
    pub alice_phases: [Vec<f64>; 2],
    pub bob_phases: [Vec<f64>; 2],
    pub state_weights: Vec<f64>,
    pub trace_path: Option<String>,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceRow {
    pub quantity: String,
    pub quoted: f64,
    pub computed: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub rows: Vec<ReproduceRow>,
}

impl ReproduceReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Bound(BoundReport),
    Quantum(QuantumReport),
    Threshold(ThresholdReport),
    Sweep(SweepReport),
    Optimize(OptimizeReport),
    Reproduce(ReproduceReport),
}

/// What every JSON report looks like on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: Report,
}

pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
    /// Lines for stderr.
    pub warnings: Vec<String>,
}

/// Resolves a relative path against `CGLMP_OUTPUT_DIR` when set.
pub fn resolve_output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut warnings = Vec::new();
    let mut exit_code = 0;
    let report = match &config.command {
        Command::Bound(target) => {
            let report = bound_report(target.family, target.dimension.single()?)?;
            if report.agree == Some(false) {
                return Err(CliError::CrossCheck(format!(
                    "brute force and case analysis disagree at d = {}",
                    report.dimension
                )));
            }
            Report::Bound(report)
        }
        Command::Quantum(target) => {
            Report::Quantum(quantum_report(target.family, target.dimension.single()?)?)
        }
        Command::Threshold { target, noise_p } => Report::Threshold(threshold_report(
            target.family,
            target.dimension.single()?,
            *noise_p,
        )?),
        Command::Sweep(target) => Report::Sweep(sweep_report(target.family, target.dimension)?),
        Command::Optimize {
            target,
            restarts,
            budget,
            seed,
            method,
            free_state,
            trace,
        } => {
            let d = target.dimension.single()?;
            let problem = OptimizationProblem {
                dimension: d,
                family: target.family,
                free: FreeParameters {
                    state_weights: *free_state,
                    ..FreeParameters::PHASES
                },
                budget: *budget,
                restarts: *restarts,
                seed: *seed,
                method: *method,
            };
            let trace_path = resolve_output_path(
                &trace
                    .clone()
                    .unwrap_or_else(|| format!("optimize_trace_d{d}_seed{seed}.csv").into()),
            );
            let report = optimize_report(&problem, Some(&trace_path))?;
            if report.exceeds_reference {
                warnings.push(format!(
                    "WARNING: search found {} which exceeds the closed-form value {} at d = {d}",
                    report.best_value,
                    report.reference_value.unwrap_or(f64::NAN)
                ));
            }
            if !report.improved {
                warnings.push("note: budget exhausted before any improvement".into());
            }
            Report::Optimize(report)
        }
        Command::Reproduce => {
            let report = reproduce_report()?;
            if !report.all_pass() {
                exit_code = 1;
            }
            Report::Reproduce(report)
        }
    };
    Ok(RunOutcome {
        report,
        exit_code,
        warnings,
    })
}

pub fn bound_report(family: Family, d: usize) -> Result<BoundReport, CliError> {
    let expr = BellExpression::build(family, d)?;
    let (brute_force, brute_force_skipped) = match local_bound_bruteforce(&expr) {
        Ok(b) => (
            Some(BruteForceSummary {
                max_value: b.max_value,
                maximizer_count: b.maximizers.len(),
                maximizers: b.maximizers.into_iter().take(LISTED_MAXIMIZERS).collect(),
                strategies_visited: b.strategies_visited as u64,
            }),
            None,
        ),
        Err(e @ Error::EnumerationCap { .. }) if family == Family::Id => {
            (None, Some(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let case_analysis = if family == Family::Id {
        let c = local_bound_cases(d)?;
        Some(CaseSummary {
            max_value: c.max_value,
            attainable: c.attainable,
            tuples_visited: c.tuples_visited,
        })
    } else {
        None
    };
    let agree = match (&brute_force, &case_analysis) {
        (Some(b), Some(c)) => Some((b.max_value - c.max_value).abs() <= 1e-12),
        _ => None,
    };
    Ok(BoundReport {
        dimension: d,
        family,
        brute_force,
        brute_force_skipped,
        case_analysis,
        agree,
    })
}

pub fn quantum_report(family: Family, d: usize) -> Result<QuantumReport, CliError> {
    let (lo, hi) = canonical_interval(d);
    let correlators = (lo..=hi)
        .map(|c| {
            Ok(CorrelatorRow {
                c,
                q_c: correlator_q(c, d)?,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(QuantumReport {
        dimension: d,
        family,
        family_value: family_quantum_value(family, d)?,
        quantum_value: quantum_value(d)?,
        quantum_value_i: quantum_value_i(d)?,
        asymptotic_value: asymptotic_value(),
        correlators,
    })
}

pub fn threshold_report(
    family: Family,
    d: usize,
    noise_p: Option<f64>,
) -> Result<ThresholdReport, CliError> {
    let local_bound = family.local_bound();
    let noisy_value = noise_p
        .map(|p| family_noisy_value(family, d, NoiseModel::new(p)?))
        .transpose()?;
    Ok(ThresholdReport {
        dimension: d,
        family,
        local_bound,
        quantum_value: family_quantum_value(family, d)?,
        noise_threshold: family_noise_threshold(family, d)?,
        noise_p,
        noisy_value,
        violated: noisy_value.map(|v| v > local_bound),
    })
}

fn sweep_row(family: Family, d: usize) -> Result<SweepRow, CliError> {
    let expr = BellExpression::build(family, d)?;
    let brute = |cap_ok: bool| -> Result<Option<f64>, CliError> {
        if !cap_ok {
            return Ok(None);
        }
        Ok(Some(local_bound_bruteforce(&expr)?.max_value))
    };
    let small = (d as u128).pow(4) <= SWEEP_BRUTE_FORCE_CAP;
    let local_bound = if family == Family::Id {
        let cases = local_bound_cases(d)?.max_value;
        if let Some(b) = brute(small)? {
            if (b - cases).abs() > 1e-12 {
                return Err(CliError::CrossCheck(format!(
                    "brute force gives {b} but case analysis gives {cases} at d = {d}"
                )));
            }
        }
        cases
    } else {
        brute(true)?.expect("brute force requested")
    };
    let (quantum_value, noise_threshold) = if family == Family::Id {
        (quantum_value(d)?, noise_threshold(d)?)
    } else {
        (
            family_quantum_value(family, d)?,
            family_noise_threshold(family, d)?,
        )
    };
    Ok(SweepRow {
        d,
        local_bound,
        quantum_value,
        noise_threshold,
    })
}

pub fn sweep_report(family: Family, dims: Dimensions) -> Result<SweepReport, CliError> {
    let rows = dims
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| sweep_row(family, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepReport { family, rows })
}

/// Runs the search and, when `trace_path` is given, writes the trace CSV
/// there.
pub fn optimize_report(
    problem: &OptimizationProblem,
    trace_path: Option<&Path>,
) -> Result<OptimizeReport, CliError> {
    let result = maximize(problem)?;
    if let Some(path) = trace_path {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        write_trace_csv(&result.trace, std::fs::File::create(path)?)?;
    }
    let vectors = result.best_phases.to_vectors();
    Ok(OptimizeReport {
        dimension: problem.dimension,
        family: problem.family,
        best_value: result.best_value,
        reference_value: result.reference_value,
        exceeds_reference: result.exceeds_reference,
        improved: result.improved,
        best_restart: result.best_restart,
        evaluations: result.evaluations,
        alice_phases: vectors.alice,
        bob_phases: vectors.bob,
        state_weights: result.best_state_weights,
        trace_path: trace_path.map(|p| p.display().to_string()),
        trace: result.trace,
    })
}

fn row(quantity: &str, quoted: f64, computed: f64, tolerance: f64) -> ReproduceRow {
    let relative_error = ((computed - quoted) / quoted).abs();
    ReproduceRow {
        quantity: quantity.to_string(),
        quoted,
        computed,
        relative_error,
        tolerance,
        pass: relative_error <= tolerance,
    }
}

/// Quoted decimals and closed forms against computed values.
pub fn reproduce_report() -> Result<ReproduceReport, CliError> {
    let sqrt2 = std::f64::consts::SQRT_2;
    let sqrt3 = 3f64.sqrt();
    let i3 = quantum_value(3)?;
    let i4 = quantum_value(4)?;
    let p3 = noise_threshold(3)?;
    let p4 = noise_threshold(4)?;
    let limit = asymptotic_value();
    let i_bound = local_bound_bruteforce(&BellExpression::build(Family::I, 2)?)?.max_value;
    let id_bound = local_bound_bruteforce(&BellExpression::build(Family::Id, 3)?)?.max_value;

    let rows = vec![
        row("I3_QM", 2.87293, i3, QUOTED_TOLERANCE),
        row("I4_QM", 2.89624, i4, QUOTED_TOLERANCE),
        row("pmin3", 0.69615, p3, QUOTED_TOLERANCE),
        row("pmin4", 0.69055, p4, QUOTED_TOLERANCE),
        row("limit", 2.6981, limit, QUOTED_TOLERANCE),
        row("pmin_limit", 0.67344, 2.0 / limit, QUOTED_TOLERANCE),
        row(
            "I3_QM_closed_form",
            4.0 / (-9.0 + 6.0 * sqrt3),
            i3,
            SYMBOLIC_TOLERANCE,
        ),
        row(
            "I4_QM_closed_form",
            2.0 / 3.0 * (sqrt2 + (10.0 - sqrt2).sqrt()),
            i4,
            SYMBOLIC_TOLERANCE,
        ),
        row(
            "pmin3_closed_form",
            (6.0 * sqrt3 - 9.0) / 2.0,
            p3,
            SYMBOLIC_TOLERANCE,
        ),
        row(
            "pmin4_closed_form",
            3.0 / (sqrt2 + (10.0 - sqrt2).sqrt()),
            p4,
            SYMBOLIC_TOLERANCE,
        ),
        row("I_local_bound_d2", 3.0, i_bound, SYMBOLIC_TOLERANCE),
        row("Id_local_bound_d3", 2.0, id_bound, SYMBOLIC_TOLERANCE),
    ];
    Ok(ReproduceReport { rows })
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        format!("{x:.5e}")
    } else {
        format!("{x:.*}", (5 - exp).max(0) as usize)
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), sig6)
}

pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Bound(r) => {
            let _ = writeln!(out, "family {}  d = {}", r.family, r.dimension);
            match &r.brute_force {
                Some(b) => {
                    let _ = writeln!(
                        out,
                        "brute force:   local bound = {}  ({} maximizers over {} strategies)",
                        sig6(b.max_value),
                        b.maximizer_count,
                        b.strategies_visited
                    );
                }
                None => {
                    let reason = r.brute_force_skipped.as_deref().unwrap_or("not run");
                    let _ = writeln!(out, "brute force:   skipped ({reason})");
                }
            }
            if let Some(c) = &r.case_analysis {
                let values: Vec<_> = c.attainable.iter().map(|v| sig6(*v)).collect();
                let _ = writeln!(
                    out,
                    "case analysis: local bound = {}  attainable values {{{}}}",
                    sig6(c.max_value),
                    values.join(", ")
                );
            }
            if let Some(agree) = r.agree {
                let _ = writeln!(out, "methods agree: {}", if agree { "yes" } else { "NO" });
            }
        }
        Report::Quantum(r) => {
            let _ = writeln!(out, "d = {}", r.dimension);
            let _ = writeln!(out, "{} (QM)       = {}", r.family, sig6(r.family_value));
            let _ = writeln!(out, "Id (QM)      = {}", sig6(r.quantum_value));
            let _ = writeln!(out, "I (QM) = 4q0 = {}", sig6(r.quantum_value_i));
            let _ = writeln!(out, "d -> inf     = {}", sig6(r.asymptotic_value));
            let _ = writeln!(out, "{:>6}  {:>12}", "c", "q_c");
            for c in &r.correlators {
                let _ = writeln!(out, "{:>6}  {:>12}", c.c, sig6(c.q_c));
            }
        }
        Report::Threshold(r) => {
            let _ = writeln!(out, "family {}  d = {}", r.family, r.dimension);
            let _ = writeln!(out, "local bound     = {}", sig6(r.local_bound));
            let _ = writeln!(out, "quantum value   = {}", sig6(r.quantum_value));
            let _ = writeln!(out, "noise threshold = {}", sig6(r.noise_threshold));
            if let (Some(p), Some(v), Some(violated)) = (r.noise_p, r.noisy_value, r.violated) {
                let _ = writeln!(out, "p = {}  noisy value = {}", sig6(p), sig6(v));
                let verdict = if violated { "violated" } else { "not violated" };
                let _ = writeln!(out, "verdict: {verdict}");
            }
        }
        Report::Sweep(r) => {
            let _ = writeln!(
                out,
                "{:>5}  {:>12}  {:>14}  {:>16}",
                "d", "local_bound", "quantum_value", "noise_threshold"
            );
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{:>5}  {:>12}  {:>14}  {:>16}",
                    row.d,
                    sig6(row.local_bound),
                    sig6(row.quantum_value),
                    sig6(row.noise_threshold)
                );
            }
        }
        Report::Optimize(r) => {
            let _ = writeln!(out, "family {}  d = {}", r.family, r.dimension);
            let _ = writeln!(out, "best value      = {}", sig6(r.best_value));
            let _ = writeln!(out, "closed form     = {}", opt(r.reference_value));
            let _ = writeln!(out, "evaluations     = {}", r.evaluations);
            let _ = writeln!(out, "best restart    = {}", r.best_restart);
            if r.exceeds_reference {
                let _ = writeln!(out, "!!! exceeds the closed-form value");
            }
            if let Some(path) = &r.trace_path {
                let _ = writeln!(out, "trace           = {path}");
            }
        }
        Report::Reproduce(r) => {
            let _ = writeln!(
                out,
                "{:<20}  {:>12}  {:>12}  {:>10}  {:>8}  result",
                "quantity", "quoted", "computed", "rel_err", "tol"
            );
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{:<20}  {:>12}  {:>12}  {:>10.2e}  {:>8.0e}  {}",
                    row.quantity,
                    sig6(row.quoted),
                    sig6(row.computed),
                    row.relative_error,
                    row.tolerance,
                    if row.pass { "PASS" } else { "FAIL" }
                );
            }
        }
    }
    out
}

pub fn render_json(report: &Report) -> String {
    let envelope = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        report: report.clone(),
    };
    serde_json::to_string_pretty(&envelope).expect("reports serialise")
}

pub fn parse_json(text: &str) -> serde_json::Result<ReportEnvelope> {
    serde_json::from_str(text)
}

pub fn render_csv(report: &Report) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report {
        Report::Sweep(r) => {
            for row in &r.rows {
                w.serialize(row)?;
            }
        }
        Report::Reproduce(r) => {
            for row in &r.rows {
                w.serialize(row)?;
            }
        }
        Report::Quantum(r) => {
            for row in &r.correlators {
                w.serialize(row)?;
            }
        }
        Report::Optimize(r) => {
            for point in &r.trace {
                w.serialize(point)?;
            }
        }
        Report::Threshold(r) => {
            w.write_record([
                "d",
                "family",
                "local_bound",
                "quantum_value",
                "noise_threshold",
                "noise_p",
                "noisy_value",
                "violated",
            ])?;
            let o = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                r.dimension.to_string(),
                r.family.to_string(),
                r.local_bound.to_string(),
                r.quantum_value.to_string(),
                r.noise_threshold.to_string(),
                o(r.noise_p),
                o(r.noisy_value),
                r.violated.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        Report::Bound(r) => {
            w.write_record(["d", "family", "method", "max_value"])?;
            if let Some(b) = &r.brute_force {
                w.write_record([
                    r.dimension.to_string(),
                    r.family.to_string(),
                    "brute_force".into(),
                    b.max_value.to_string(),
                ])?;
            }
            if let Some(c) = &r.case_analysis {
                w.write_record([
                    r.dimension.to_string(),
                    r.family.to_string(),
                    "case_analysis".into(),
                    c.max_value.to_string(),
                ])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(report: &Report, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Table => Ok(render_table(report)),
        OutputFormat::Json => Ok(render_json(report)),
        OutputFormat::Csv => render_csv(report).map_err(|e| CliError::Io(io::Error::other(e))),
    }
}
