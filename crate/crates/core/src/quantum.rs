//! The maximally entangled two-qudit state measured in phased Fourier
//! bases.
//!
//! Each party multiplies `|j>` by a setting-dependent phase, applies a
//! discrete Fourier transform (Alice) or its inverse (Bob), and reads out
//! in the computational basis. Joint probabilities are available from a
//! state-vector simulation ([`born_rule_distribution`]) and from the
//! closed form ([`closed_form_distribution`]); the two are independent
//! routes and are compared in the tests.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expressions::{
    canonical_interval, check_dimension, BellExpression, Family, JointDistribution, Setting,
};

/// Phase slopes of the optimal-looking measurements: alpha for Alice's
/// two settings, beta for Bob's.
pub const ALICE_SLOPES: [f64; 2] = [0.0, 0.5];
pub const BOB_SLOPES: [f64; 2] = [0.25, -0.25];

/// Per-outcome phase vectors, one per setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVectors {
    pub alice: [Vec<f64>; 2],
    pub bob: [Vec<f64>; 2],
}

/// Measurement phases `phi_a(j)` for Alice and `varphi_b(j)` for Bob.
///
/// Without explicit vectors the phases are linear:
/// `phi_a(j) = 2 pi alpha_a j / d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPhases {
    dimension: usize,
    alice_slopes: [f64; 2],
    bob_slopes: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vectors: Option<PhaseVectors>,
}

impl MeasurementPhases {
    pub fn linear(d: usize, alice_slopes: [f64; 2], bob_slopes: [f64; 2]) -> Result<Self> {
        check_dimension(d)?;
        Ok(Self {
            dimension: d,
            alice_slopes,
            bob_slopes,
            vectors: None,
        })
    }

    /// alpha = (0, 1/2), beta = (1/4, -1/4).
    pub fn cglmp(d: usize) -> Result<Self> {
        Self::linear(d, ALICE_SLOPES, BOB_SLOPES)
    }

    /// Explicit phases in radians, overriding the linear form.
    pub fn from_vectors(d: usize, vectors: PhaseVectors) -> Result<Self> {
        check_dimension(d)?;
        let all = vectors.alice.iter().chain(&vectors.bob);
        if let Some(v) = all.clone().find(|v| v.len() != d) {
            return Err(Error::InvalidSetup(format!(
                "phase vector has length {}, expected {d}",
                v.len()
            )));
        }
        if all.flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSetup("phase is not finite".into()));
        }
        Ok(Self {
            dimension: d,
            alice_slopes: [0.0; 2],
            bob_slopes: [0.0; 2],
            vectors: Some(vectors),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vectors(&self) -> Option<&PhaseVectors> {
        self.vectors.as_ref()
    }

    pub fn alice_phase(&self, setting: Setting, j: usize) -> f64 {
        match &self.vectors {
            Some(v) => v.alice[setting.index()][j],
            None => {
                2.0 * PI * self.alice_slopes[setting.index()] * j as f64 / self.dimension as f64
            }
        }
    }

    pub fn bob_phase(&self, setting: Setting, j: usize) -> f64 {
        match &self.vectors {
            Some(v) => v.bob[setting.index()][j],
            None => 2.0 * PI * self.bob_slopes[setting.index()] * j as f64 / self.dimension as f64,
        }
    }

    /// Materialises all four phase vectors.
    pub fn to_vectors(&self) -> PhaseVectors {
        let d = self.dimension;
        let alice = Setting::BOTH.map(|s| (0..d).map(|j| self.alice_phase(s, j)).collect());
        let bob = Setting::BOTH.map(|s| (0..d).map(|j| self.bob_phase(s, j)).collect());
        PhaseVectors { alice, bob }
    }
}

/// A shared state `sum_j w_j |j>|j>` together with the measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSetup {
    dimension: usize,
    state_weights: Vec<Complex<f64>>,
    phases: MeasurementPhases,
}

impl QuantumSetup {
    pub fn new(state_weights: Vec<Complex<f64>>, phases: MeasurementPhases) -> Result<Self> {
        let d = phases.dimension();
        if state_weights.len() != d {
            return Err(Error::InvalidSetup(format!(
                "{} Schmidt coefficients for dimension {d}",
                state_weights.len()
            )));
        }
        let norm: f64 = state_weights.iter().map(|w| w.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSetup(format!(
                "state has squared norm {norm}"
            )));
        }
        Ok(Self {
            dimension: d,
            state_weights,
            phases,
        })
    }

    pub fn maximally_entangled(phases: MeasurementPhases) -> Result<Self> {
        let d = phases.dimension();
        let w = Complex::new(1.0 / (d as f64).sqrt(), 0.0);
        Self::new(vec![w; d], phases)
    }

    /// Maximally entangled state with the CGLMP phases.
    pub fn cglmp(d: usize) -> Result<Self> {
        Self::maximally_entangled(MeasurementPhases::cglmp(d)?)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn state_weights(&self) -> &[Complex<f64>] {
        &self.state_weights
    }

    pub fn phases(&self) -> &MeasurementPhases {
        &self.phases
    }
}

/// `U[k][j] = exp(i (phase_j + sign 2 pi j k / d)) / sqrt(d)`: a diagonal
/// phase followed by the (inverse, for `sign = -1`) Fourier transform.
fn phased_fourier(phases: &[f64], sign: f64) -> DMatrix<Complex<f64>> {
    let d = phases.len();
    let norm = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |k, j| {
        let angle = phases[j] + sign * 2.0 * PI * ((j * k) % d) as f64 / d as f64;
        Complex::from_polar(norm, angle)
    })
}

/// Joint outcome probabilities from the Born rule.
///
/// The state's coefficient matrix `M` (here diagonal) evolves to
/// `U_A M U_B^T` under local unitaries; squared moduli of its entries are
/// the probabilities `P(A_a = k, B_b = l)`.
pub fn born_rule_distribution(setup: &QuantumSetup) -> Result<JointDistribution> {
    let d = setup.dimension;
    let state = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&setup.state_weights));
    let vectors = setup.phases.to_vectors();
    let alice: Vec<_> = vectors
        .alice
        .iter()
        .map(|p| phased_fourier(p, 1.0))
        .collect();
    let bob: Vec<_> = vectors
        .bob
        .iter()
        .map(|p| phased_fourier(p, -1.0))
        .collect();

    let mut blocks = [[None, None], [None, None]];
    for a in Setting::BOTH {
        for b in Setting::BOTH {
            let amplitudes = &alice[a.index()] * &state * bob[b.index()].transpose();
            blocks[a.index()][b.index()] = Some(amplitudes.map(|z| z.norm_sqr()));
        }
    }
    JointDistribution::from_fn(d, |a, b, k, l| {
        blocks[a.index()][b.index()].as_ref().expect("filled above")[(k, l)]
    })
}

/// `1 / (2 d^3 sin^2[pi (k - l + alpha_a + beta_b) / d])`.
pub fn closed_form_probability(alice: Setting, bob: Setting, k: usize, l: usize, d: usize) -> f64 {
    let offset = ALICE_SLOPES[alice.index()] + BOB_SLOPES[bob.index()];
    let x = k as f64 - l as f64 + offset;
    let s = (PI * x / d as f64).sin();
    1.0 / (2.0 * (d as f64).powi(3) * s * s)
}

pub fn closed_form_distribution(d: usize) -> Result<JointDistribution> {
    JointDistribution::from_fn(d, |a, b, k, l| closed_form_probability(a, b, k, l, d))
}

/// The correlator `q_c = P(A1 = B1 + c) = d P(A1 = c, B1 = 0)
/// = 1 / (2 d^2 sin^2[pi (c + 1/4) / d])`.
pub fn correlator_q(c: i64, d: usize) -> Result<f64> {
    check_dimension(d)?;
    let (lo, hi) = canonical_interval(d);
    if c < lo || c > hi {
        return Err(Error::OutsideInterval {
            value: c,
            dimension: d,
            lo,
            hi,
        });
    }
    let s = (PI * (c as f64 + 0.25) / d as f64).sin();
    Ok(1.0 / (2.0 * (d * d) as f64 * s * s))
}

/// `Id` at the CGLMP setup, `4 sum_k (1 - 2k/(d-1)) (q_k - q_{-(k+1)})`.
pub fn quantum_value(d: usize) -> Result<f64> {
    check_dimension(d)?;
    let mut total = 0.0;
    for k in 0..(d / 2) as i64 {
        let w = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        total += w * (correlator_q(k, d)? - correlator_q(-(k + 1), d)?);
    }
    Ok(4.0 * total)
}

/// `I` at the CGLMP setup, `4 q_0`.
pub fn quantum_value_i(d: usize) -> Result<f64> {
    let v = 4.0 * correlator_q(0, d)?;
    debug_assert!(v > 3.0, "I(QM) = {v} at d = {d}");
    Ok(v)
}

/// Any family evaluated on the closed-form table.
pub fn family_quantum_value(family: Family, d: usize) -> Result<f64> {
    BellExpression::build(family, d)?.evaluate(&closed_form_distribution(d)?)
}

const CATALAN_PAIRS: u64 = 1 << 22;

/// Kahan-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Catalan's constant `sum_k (-1)^k / (2k+1)^2`, summed in consecutive
/// pairs. The tail after `N` pairs is below `1 / (16 N^2)`.
pub fn catalan() -> f64 {
    static CATALAN: OnceLock<f64> = OnceLock::new();
    *CATALAN.get_or_init(|| {
        let mut acc = CompensatedSum::default();
        for k in 0..CATALAN_PAIRS {
            let a = (4 * k + 1) as f64;
            let b = (4 * k + 3) as f64;
            acc.add(1.0 / (a * a) - 1.0 / (b * b));
        }
        acc.sum
    })
}

/// Large-d limit of [`quantum_value`], `32 G / pi^2`.
pub fn asymptotic_value() -> f64 {
    32.0 * catalan() / (PI * PI)
}

/// Partial sum `(2/pi^2) sum_{k<terms} [1/(k+1/4)^2 - 1/(k+3/4)^2]`.
pub fn asymptotic_value_series(terms: u64) -> f64 {
    let mut acc = CompensatedSum::default();
    for k in 0..terms {
        let k = k as f64;
        acc.add(1.0 / ((k + 0.25) * (k + 0.25)) - 1.0 / ((k + 0.75) * (k + 0.75)));
    }
    2.0 * acc.sum / (PI * PI)
}

/// Isotropic noise: the state survives with probability `p` and is
/// replaced by the maximally mixed state otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::NoiseOutOfRange(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Statistics of the noisy state: `p` times the closed-form table plus
/// `1 - p` times the uniform table.
pub fn noisy_distribution(d: usize, noise: NoiseModel) -> Result<JointDistribution> {
    closed_form_distribution(d)?.mix(noise.p, &JointDistribution::uniform(d)?)
}

pub fn noisy_value(d: usize, noise: NoiseModel) -> Result<f64> {
    Ok(noise.p * quantum_value(d)?)
}

/// Smallest visibility `p` above which `Id` is still violated.
pub fn noise_threshold(d: usize) -> Result<f64> {
    Ok(Family::Id.local_bound() / quantum_value(d)?)
}

pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Checks that the four correlators around the chain A1, B1, A2, B2 agree:
/// P(A1 = B1 + c) = P(A2 = B1 - c - 1) = P(A2 = B2 + c) = P(A1 = B2 - c)
/// for every c.
pub fn symmetry_check(dist: &JointDistribution) -> bool {
    let d = dist.dimension() as i64;
    (0..d).all(|c| {
        let reference = dist.correlator(Setting::One, Setting::One, c);
        [
            dist.correlator(Setting::Two, Setting::One, -c - 1),
            dist.correlator(Setting::Two, Setting::Two, c),
            dist.correlator(Setting::One, Setting::Two, -c),
        ]
        .iter()
        .all(|v| (v - reference).abs() <= SYMMETRY_TOLERANCE)
    })
}

/// Any family evaluated on the noisy table.
pub fn family_noisy_value(family: Family, d: usize, noise: NoiseModel) -> Result<f64> {
    BellExpression::build(family, d)?.evaluate(&noisy_distribution(d, noise)?)
}

/// Visibility at which `family` reaches its local bound on the noisy
/// table. Unlike `Id`, the `I` expression is nonzero (4/d) on the uniform
/// table, so the threshold is `(bound - noise value) / (quantum value -
/// noise value)`.
pub fn family_noise_threshold(family: Family, d: usize) -> Result<f64> {
    let expr = BellExpression::build(family, d)?;
    let quantum = expr.evaluate(&closed_form_distribution(d)?)?;
    let mixed = expr.evaluate(&JointDistribution::uniform(d)?)?;
    Ok((family.local_bound() - mixed) / (quantum - mixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn symmetry_examples() {
        for d in 2..=16 {
            assert!(symmetry_check(&closed_form_distribution(d).unwrap()));
            assert!(symmetry_check(&JointDistribution::uniform(d).unwrap()));
        }
        let point = crate::local::DeterministicStrategy::new(0, 1, 0, 0)
            .distribution(3)
            .unwrap();
        assert!(!symmetry_check(&point));
    }

    #[test]
    fn family_thresholds() {
        for d in 2..=12 {
            assert_abs_diff_eq!(
                family_noise_threshold(Family::Id, d).unwrap(),
                noise_threshold(d).unwrap(),
                epsilon = 1e-12
            );
            let p = family_noise_threshold(Family::I, d).unwrap();
            let at = family_noisy_value(Family::I, d, NoiseModel::new(p).unwrap()).unwrap();
            assert_abs_diff_eq!(at, 3.0, epsilon = 1e-12);
            assert!(p > 0.0 && p < 1.0);
        }
        // I at d = 2 is CHSH in disguise: threshold 1/sqrt 2
        assert_abs_diff_eq!(
            family_noise_threshold(Family::I, 2).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }
    use Setting::{One, Two};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn born_rule_matches_closed_form() {
        for d in 2..=16 {
            let born = born_rule_distribution(&QuantumSetup::cglmp(d).unwrap()).unwrap();
            let closed = closed_form_distribution(d).unwrap();
            assert!(born.max_abs_diff(&closed) < 1e-12, "d={d}");
        }
    }

    #[test]
    fn flat_phases_give_perfect_correlation() {
        let phases = MeasurementPhases::linear(2, [0.0; 2], [0.0; 2]).unwrap();
        let dist =
            born_rule_distribution(&QuantumSetup::maximally_entangled(phases).unwrap()).unwrap();
        for a in Setting::BOTH {
            for b in Setting::BOTH {
                assert_abs_diff_eq!(dist.probability(a, b, 0, 0), 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(dist.probability(a, b, 1, 1), 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(dist.probability(a, b, 0, 1), 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(dist.probability(a, b, 1, 0), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn dimension_two_cell_probabilities() {
        // q_0 / d with q_0 = (2 + sqrt 2)/4
        let dist = born_rule_distribution(&QuantumSetup::cglmp(2).unwrap()).unwrap();
        assert_abs_diff_eq!(
            dist.probability(One, One, 0, 0),
            (2.0 + SQRT2) / 8.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            dist.probability(One, One, 0, 1),
            (2.0 - SQRT2) / 8.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn closed_form_is_translation_invariant() {
        for d in 2..=9 {
            let t = closed_form_distribution(d).unwrap();
            for a in Setting::BOTH {
                for b in Setting::BOTH {
                    for k in 0..d {
                        for l in 0..d {
                            for c in 1..d {
                                assert_abs_diff_eq!(
                                    t.probability(a, b, k, l),
                                    t.probability(a, b, (k + c) % d, (l + c) % d),
                                    epsilon = 1e-14
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn correlators_at_three() {
        let sqrt3 = 3f64.sqrt();
        let cell = closed_form_distribution(3)
            .unwrap()
            .probability(One, One, 0, 0);
        assert_abs_diff_eq!(cell, 2.0 * (2.0 + sqrt3) / 27.0, epsilon = 1e-14);
        let q0 = correlator_q(0, 3).unwrap();
        assert_abs_diff_eq!(q0, 3.0 * cell, epsilon = 1e-14);
        assert_abs_diff_eq!(q0, 0.829_345, epsilon = 5e-7);
        assert_abs_diff_eq!(correlator_q(-1, 3).unwrap(), 1.0 / 9.0, epsilon = 1e-14);
        assert!(correlator_q(2, 3).is_err());
        assert!(correlator_q(-2, 3).is_err());
    }

    #[test]
    fn correlators_partition_and_order() {
        for d in 2..=100 {
            let (lo, hi) = canonical_interval(d);
            let total: f64 = (lo..=hi).map(|c| correlator_q(c, d).unwrap()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);

            // q_0 > q_-1 > q_1 > q_-2 > q_2 > ...
            let mut chain = vec![0i64];
            for m in 1..=d as i64 {
                chain.push(-m);
                chain.push(m);
            }
            let chain: Vec<f64> = chain
                .into_iter()
                .filter(|c| (lo..=hi).contains(c))
                .map(|c| correlator_q(c, d).unwrap())
                .collect();
            assert_eq!(chain.len(), d);
            assert!(chain.windows(2).all(|w| w[0] > w[1]), "d={d}");
        }
    }

    #[test]
    fn correlators_match_table_sums() {
        for d in 2..=12 {
            let t = closed_form_distribution(d).unwrap();
            let (lo, hi) = canonical_interval(d);
            for c in lo..=hi {
                assert_abs_diff_eq!(
                    t.correlator(One, One, c),
                    correlator_q(c, d).unwrap(),
                    epsilon = 1e-13
                );
                // the other three links of the chain
                assert_abs_diff_eq!(
                    t.correlator(Two, One, -c - 1),
                    correlator_q(c, d).unwrap(),
                    epsilon = 1e-13
                );
                assert_abs_diff_eq!(
                    t.correlator(Two, Two, c),
                    correlator_q(c, d).unwrap(),
                    epsilon = 1e-13
                );
                assert_abs_diff_eq!(
                    t.correlator(One, Two, -c),
                    correlator_q(c, d).unwrap(),
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn quoted_quantum_values() {
        let sqrt3 = 3f64.sqrt();
        let i3 = 4.0 / (-9.0 + 6.0 * sqrt3);
        let i4 = 2.0 / 3.0 * (SQRT2 + (10.0 - SQRT2).sqrt());
        assert_abs_diff_eq!(quantum_value(3).unwrap(), i3, epsilon = 1e-12);
        assert_abs_diff_eq!(quantum_value(4).unwrap(), i4, epsilon = 1e-12);
        assert_abs_diff_eq!(quantum_value(3).unwrap(), 2.87293, epsilon = 5e-5);
        assert_abs_diff_eq!(quantum_value(4).unwrap(), 2.89624, epsilon = 5e-5);
        assert_abs_diff_eq!(quantum_value(2).unwrap(), 2.0 * SQRT2, epsilon = 1e-12);
    }

    #[test]
    fn quantum_value_matches_tensor_evaluation() {
        for d in 2..=16 {
            assert_abs_diff_eq!(
                quantum_value(d).unwrap(),
                family_quantum_value(Family::Id, d).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn value_of_i() {
        assert_abs_diff_eq!(quantum_value_i(2).unwrap(), 2.0 + SQRT2, epsilon = 1e-12);
        assert_abs_diff_eq!(
            family_quantum_value(Family::I, 2).unwrap(),
            2.0 + SQRT2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(quantum_value_i(3).unwrap(), 3.31738, epsilon = 5e-5);
        for d in 2..=1000 {
            assert!(quantum_value_i(d).unwrap() > 3.0);
        }
    }

    #[test]
    fn catalan_constant() {
        // reference value to 30 digits: 0.915965594177219015054603514932
        assert_abs_diff_eq!(catalan(), 0.915_965_594_177_219, epsilon = 1e-14);
        assert_relative_eq!(
            asymptotic_value_series(2_000_000),
            asymptotic_value(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(asymptotic_value(), 2.969_814_98, epsilon = 1e-8);
    }

    #[test]
    fn converges_to_limit() {
        assert_abs_diff_eq!(
            quantum_value(10_000).unwrap(),
            asymptotic_value(),
            epsilon = 1e-3
        );
        assert_abs_diff_eq!(2.0 / asymptotic_value(), 0.67344, epsilon = 5e-5);
    }

    #[test]
    fn thresholds() {
        let sqrt3 = 3f64.sqrt();
        assert_abs_diff_eq!(
            noise_threshold(3).unwrap(),
            (6.0 * sqrt3 - 9.0) / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            noise_threshold(4).unwrap(),
            3.0 / (SQRT2 + (10.0 - SQRT2).sqrt()),
            epsilon = 1e-12
        );
        for d in 2..100 {
            assert!(noise_threshold(d + 1).unwrap() < noise_threshold(d).unwrap());
        }
    }

    #[test]
    fn noise() {
        assert!(NoiseModel::new(1.2).is_err());
        assert!(NoiseModel::new(-0.1).is_err());
        for p in [0.0, 0.25, 0.5, 0.69, 1.0] {
            let noise = NoiseModel::new(p).unwrap();
            for d in 2..=8 {
                let e = BellExpression::build(Family::Id, d).unwrap();
                let direct = e.evaluate(&noisy_distribution(d, noise).unwrap()).unwrap();
                assert_abs_diff_eq!(direct, noisy_value(d, noise).unwrap(), epsilon = 1e-12);
            }
        }
        let at_threshold = noisy_value(3, NoiseModel::new(0.69615).unwrap()).unwrap();
        assert_abs_diff_eq!(at_threshold, 2.0, epsilon = 5e-5);
        assert_eq!(noisy_value(5, NoiseModel::new(0.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn setup_validation() {
        let phases = MeasurementPhases::cglmp(3).unwrap();
        assert!(QuantumSetup::new(vec![Complex::new(1.0, 0.0); 3], phases.clone()).is_err());
        assert!(QuantumSetup::new(vec![Complex::new(1.0, 0.0); 2], phases).is_err());
        let vectors = PhaseVectors {
            alice: [vec![0.0; 3], vec![0.0; 2]],
            bob: [vec![0.0; 3], vec![0.0; 3]],
        };
        assert!(MeasurementPhases::from_vectors(3, vectors).is_err());
    }

    #[test]
    fn product_state_has_no_correlation() {
        let d = 3;
        let mut w = vec![Complex::new(0.0, 0.0); d];
        w[0] = Complex::new(1.0, 0.0);
        let setup = QuantumSetup::new(w, MeasurementPhases::cglmp(d).unwrap()).unwrap();
        let dist = born_rule_distribution(&setup).unwrap();
        let uniform = JointDistribution::uniform(d).unwrap();
        assert!(dist.max_abs_diff(&uniform) < 1e-14);
    }
}
