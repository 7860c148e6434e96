//! CGLMP Bell expressions for two parties with two d-outcome measurements
//! each: construction, local bounds, quantum values under phased Fourier
//! measurements, noise thresholds and a numerical search over
//! measurement phases.

pub mod cli;
pub mod error;
pub mod expressions;
pub mod local;
pub mod optimizer;
pub mod quantum;

pub use error::{Error, Result};
pub use expressions::{BellExpression, Family, JointDistribution, Setting};
pub use local::{DeterministicStrategy, LocalModel, StrategyDifferences};
pub use optimizer::{OptimizationProblem, OptimizationResult};
pub use quantum::{MeasurementPhases, NoiseModel, QuantumSetup};
