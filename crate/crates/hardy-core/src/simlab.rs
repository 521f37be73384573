//! Monte Carlo model of the heralded photon-counting experiment: Poissonian
//! coincidence counts per projective filter, preparation/readout noise,
//! empirical frequency estimation, and the violation statistic for the
//! noncontextual bound.
//!
//! Each projector setting is a separate filtering run (the counts of
//! different settings are independent Poisson variables, as in the sequential
//! experiment), and every setting draws from its own labeled random stream,
//! so results depend only on the configuration and the label — never on
//! scheduling order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::hardy::{self, HardyAngle, JOINT_PATTERNS};
use crate::linalg::CMatrix;
use crate::noncontextual::{inequality_gap, HardyMarginals};
use crate::qstate::{born_probability, projector, tensor, DensityOperator, Subsystem};
use crate::streams::{labeled_rng, poisson_draw};

/// Labels of the four canonical joint-probability projectors, in table order.
pub const HARDY_LABELS: [&str; 4] = ["p1", "p2", "p3", "p4"];

/// Labels of the four spin-orbit basis-state projectors, in the global basis
/// ordering (`L`/`R` polarization, `±1` orbital quantum number).
pub const BASIS_LABELS: [&str; 4] = ["L+1", "L-1", "R+1", "R-1"];

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    InvalidRate { value: f64 },
    InvalidWindow { value: f64 },
    InvalidNoise { message: String },
    GammaOutOfRange { gamma: f64 },
    InvalidProjector { label: String },
    ZeroTotal,
    MissingLabel { label: String },
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidRate { value } => write!(f, "total rate must be positive, got {value}"),
            Self::InvalidWindow { value } => write!(f, "window must be positive, got {value}"),
            Self::InvalidNoise { message } => write!(f, "invalid noise model: {message}"),
            Self::GammaOutOfRange { gamma } => {
                write!(f, "gamma = {gamma} rad outside the analyzer domain [0, pi/2]")
            }
            Self::InvalidProjector { label } => {
                write!(f, "projector '{label}' failed validation")
            }
            Self::ZeroTotal => write!(f, "total count is zero; frequencies are undefined"),
            Self::MissingLabel { label } => write!(f, "missing expected entry '{label}'"),
            Self::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
        }
    }
}

impl core::error::Error for SimError {}

/// Preparation and readout imperfections.
///
/// `depolarizing_p` mixes the prepared state with the maximally mixed one;
/// `crosstalk_eps` leaks a fraction of every filter probability uniformly
/// across the projector set; `override_frequencies`, when present, replaces
/// the model probabilities outright (entry order matching the projector set).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseModel {
    #[cfg_attr(feature = "serde", serde(default))]
    pub depolarizing_p: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub crosstalk_eps: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub override_frequencies: Option<Vec<f64>>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            depolarizing_p: 0.0,
            crosstalk_eps: 0.0,
            override_frequencies: None,
        }
    }
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        use alloc::format;
        if !(0.0..=1.0).contains(&self.depolarizing_p) {
            return Err(SimError::InvalidNoise {
                message: format!("depolarizing_p = {} outside [0, 1]", self.depolarizing_p),
            });
        }
        if !(0.0..=1.0).contains(&self.crosstalk_eps) {
            return Err(SimError::InvalidNoise {
                message: format!("crosstalk_eps = {} outside [0, 1]", self.crosstalk_eps),
            });
        }
        if let Some(freqs) = &self.override_frequencies {
            for &q in freqs {
                if !(0.0..=1.0).contains(&q) {
                    return Err(SimError::InvalidNoise {
                        message: format!("override frequency {q} outside [0, 1]"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Depolarizing channel: `ρ → (1−p)ρ + p·I/d`. The output is physical
    /// for every `p` in `[0, 1]`.
    pub fn apply_to_state(&self, rho: &DensityOperator) -> DensityOperator {
        if self.depolarizing_p == 0.0 {
            return rho.clone();
        }
        let mixed = DensityOperator::maximally_mixed(rho.dim())
            .expect("density operators carry valid dimensions");
        rho.mix(&mixed, 1.0 - self.depolarizing_p)
    }

    /// Probability-vector stage: the override (if any) replaces the vector,
    /// then crosstalk leaks uniformly: `q → (1−ε)q + ε/n`.
    pub fn apply_to_probabilities(&self, q: &[f64]) -> Result<Vec<f64>, SimError> {
        let mut out: Vec<f64> = match &self.override_frequencies {
            Some(freqs) => {
                if freqs.len() != q.len() {
                    return Err(SimError::LengthMismatch {
                        expected: q.len(),
                        got: freqs.len(),
                    });
                }
                freqs.clone()
            }
            None => q.to_vec(),
        };
        if self.crosstalk_eps > 0.0 {
            let eps = self.crosstalk_eps;
            let uniform = 1.0 / out.len() as f64;
            for v in out.iter_mut() {
                *v = (1.0 - eps) * *v + eps * uniform;
            }
        }
        Ok(out)
    }

    /// Copy of this model with the override removed; used for runs whose job
    /// is to calibrate the total rate rather than reproduce reported
    /// frequencies.
    pub fn without_override(&self) -> Self {
        Self {
            override_frequencies: None,
            ..self.clone()
        }
    }
}

/// Full description of one simulated counting run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExperimentConfig {
    /// Entanglement angle, radians.
    pub gamma: f64,
    /// Total coincidence rate across a complete basis, counts per second.
    pub total_rate: f64,
    /// Counting window, seconds.
    pub window: f64,
    pub seed: u64,
    pub noise: NoiseModel,
}

impl ExperimentConfig {
    pub fn ideal(gamma: f64, total_rate: f64, window: f64, seed: u64) -> Self {
        Self {
            gamma,
            total_rate,
            window,
            seed,
            noise: NoiseModel::ideal(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.total_rate > 0.0) {
            return Err(SimError::InvalidRate { value: self.total_rate });
        }
        if !(self.window > 0.0) {
            return Err(SimError::InvalidWindow { value: self.window });
        }
        self.noise.validate()
    }
}

/// A named projective filter on the four-dimensional space.
#[derive(Clone, Debug)]
pub struct LabeledProjector {
    pub label: String,
    pub matrix: CMatrix,
}

/// Coincidence counts recorded behind one projective filter.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountRecord {
    pub label: String,
    pub counts: u64,
    /// Counting window, seconds.
    pub window: f64,
}

impl CountRecord {
    /// Coincidence rate in Hz.
    pub fn rate(&self) -> f64 {
        self.counts as f64 / self.window
    }
}

/// The four spin-orbit basis-state filters (eigenstates of the two
/// angular-momentum operators), a complete set.
pub fn spin_orbit_basis_projectors() -> Vec<LabeledProjector> {
    (0..4)
        .map(|k| LabeledProjector {
            label: String::from(BASIS_LABELS[k]),
            matrix: projector(
                &crate::qstate::StateVector::basis_state(4, k).expect("dimension 4 is valid"),
            ),
        })
        .collect()
}

/// The four product filters probing the joint probabilities `p1`…`p4`.
pub fn hardy_projectors(angle: HardyAngle) -> Vec<LabeledProjector> {
    JOINT_PATTERNS
        .iter()
        .map(|&(label, pol_setting, pol_outcome, oam_setting, oam_outcome)| {
            let (pol_plus, pol_minus) =
                hardy::analyzer_basis(angle, Subsystem::Polarization, pol_setting);
            let (oam_plus, oam_minus) = hardy::analyzer_basis(angle, Subsystem::Oam, oam_setting);
            let pol = match pol_outcome {
                crate::qstate::Outcome::Plus => pol_plus,
                crate::qstate::Outcome::Minus => pol_minus,
            };
            let oam = match oam_outcome {
                crate::qstate::Outcome::Plus => oam_plus,
                crate::qstate::Outcome::Minus => oam_minus,
            };
            let product = tensor(&pol, &oam).expect("qubit analyzer states");
            LabeledProjector {
                label: String::from(label),
                matrix: projector(&product),
            }
        })
        .collect()
}

/// Simulates one counting run: for each filter the (noise-transformed) Born
/// probability `q` yields `counts ~ Poisson(q · rate · window)`, drawn from
/// the stream addressed by `(seed, label)`.
pub fn simulate_counts(
    cfg: &ExperimentConfig,
    projectors: &[LabeledProjector],
) -> Result<Vec<CountRecord>, SimError> {
    cfg.validate()?;
    let rho = crate::hardy::hardy_density(cfg.gamma);
    let rho = cfg.noise.apply_to_state(&rho);

    let mut probabilities = Vec::with_capacity(projectors.len());
    for p in projectors {
        let q = born_probability(&rho, &p.matrix).map_err(|_| SimError::InvalidProjector {
            label: p.label.clone(),
        })?;
        probabilities.push(q);
    }
    let probabilities = cfg.noise.apply_to_probabilities(&probabilities)?;

    Ok(projectors
        .iter()
        .zip(probabilities.iter())
        .map(|(p, &q)| {
            let mean = q * cfg.total_rate * cfg.window;
            let mut rng = labeled_rng(cfg.seed, &p.label);
            CountRecord {
                label: p.label.clone(),
                counts: poisson_draw(mean, &mut rng),
                window: cfg.window,
            }
        })
        .collect())
}

/// Empirical frequency with its Poissonian standard deviation.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyEstimate {
    pub label: String,
    pub counts: u64,
    pub frequency: f64,
    /// `√counts / total`; Poisson propagation on the numerator only.
    pub sigma: f64,
    /// Zero counts give a vanishing σ; flagged so reports can warn.
    pub degenerate: bool,
}

/// Converts raw counts to frequencies against a total count, with
/// `σ_f = √counts / total`.
pub fn estimate_frequencies(
    records: &[CountRecord],
    total_counts: u64,
) -> Result<Vec<FrequencyEstimate>, SimError> {
    if total_counts == 0 {
        return Err(SimError::ZeroTotal);
    }
    let total = total_counts as f64;
    Ok(records
        .iter()
        .map(|r| FrequencyEstimate {
            label: r.label.clone(),
            counts: r.counts,
            frequency: r.counts as f64 / total,
            sigma: (r.counts as f64).sqrt() / total,
            degenerate: r.counts == 0,
        })
        .collect())
}

/// The violation statistic of one run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ViolationReport {
    /// The four frequency estimates in `p1`…`p4` order.
    pub frequencies: Vec<FrequencyEstimate>,
    /// `f4 − (f1 + f2 + f3)`; positive means the noncontextual bound fails.
    pub gap: f64,
    /// Root-sum-square of the four σ (independent-error propagation).
    pub gap_sigma: f64,
    /// `gap / gap_sigma`; infinite when the σ vanish but the gap does not.
    pub n_sigmas: f64,
    pub violated: bool,
}

/// Builds the violation statistic from four labeled frequency estimates.
///
/// The number of standard deviations is defined as the gap over the
/// root-sum-square of the four Poissonian σ; this definition is part of the
/// report contract.
pub fn violation_statistic(estimates: &[FrequencyEstimate]) -> Result<ViolationReport, SimError> {
    let mut ordered = Vec::with_capacity(4);
    for label in HARDY_LABELS {
        let found = estimates
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| SimError::MissingLabel { label: String::from(label) })?;
        ordered.push(found.clone());
    }

    let marginals = HardyMarginals {
        p1: ordered[0].frequency,
        p2: ordered[1].frequency,
        p3: ordered[2].frequency,
        p4: ordered[3].frequency,
    };
    let gap = inequality_gap(&marginals);
    let gap_sigma = ordered
        .iter()
        .map(|e| e.sigma * e.sigma)
        .sum::<f64>()
        .sqrt();
    let n_sigmas = if gap_sigma > 0.0 {
        gap / gap_sigma
    } else if gap > 0.0 {
        f64::INFINITY
    } else if gap < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    };

    Ok(ViolationReport {
        frequencies: ordered,
        gap,
        gap_sigma,
        n_sigmas,
        violated: gap > 0.0,
    })
}

/// Everything produced by one full simulated test: the basis-state
/// calibration run, the joint-probability run, and the violation statistic.
#[derive(Clone, Debug)]
pub struct HardyRun {
    pub basis_counts: Vec<CountRecord>,
    pub hardy_counts: Vec<CountRecord>,
    /// Total coincidences of the complete basis run; the frequency
    /// normalizer.
    pub n_tot: u64,
    pub report: ViolationReport,
}

/// Runs the full experiment: a complete basis run fixes the total count, a
/// second run filters on the four joint-probability projectors, and the
/// ratio of the two gives the empirical frequencies entering the violation
/// statistic.
///
/// A frequency override in the noise model applies to the joint-probability
/// run only; the calibration run always counts real (simulated) photons.
pub fn run_hardy_experiment(cfg: &ExperimentConfig) -> Result<HardyRun, SimError> {
    cfg.validate()?;
    let angle = HardyAngle::exploration(cfg.gamma)
        .map_err(|_| SimError::GammaOutOfRange { gamma: cfg.gamma })?;

    let basis_cfg = ExperimentConfig {
        noise: cfg.noise.without_override(),
        ..cfg.clone()
    };
    let basis_counts = simulate_counts(&basis_cfg, &spin_orbit_basis_projectors())?;
    let n_tot: u64 = basis_counts.iter().map(|r| r.counts).sum();

    let hardy_counts = simulate_counts(cfg, &hardy_projectors(angle))?;
    let estimates = estimate_frequencies(&hardy_counts, n_tot)?;
    let report = violation_statistic(&estimates)?;

    Ok(HardyRun {
        basis_counts,
        hardy_counts,
        n_tot,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::validate_physical;
    use alloc::format;
    use alloc::string::ToString;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn working_point() -> f64 {
        24.9 * PI / 180.0
    }

    fn paper_scale_config(seed: u64) -> ExperimentConfig {
        ExperimentConfig::ideal(working_point(), 120.0, 100.0, seed)
    }

    #[test]
    fn determinism_and_schedule_independence() {
        let cfg = paper_scale_config(7);
        let a = simulate_counts(&cfg, &spin_orbit_basis_projectors()).unwrap();
        let b = simulate_counts(&cfg, &spin_orbit_basis_projectors()).unwrap();
        assert_eq!(a, b);

        // Reversing the projector order must not change any per-label count.
        let mut reversed = spin_orbit_basis_projectors();
        reversed.reverse();
        let c = simulate_counts(&cfg, &reversed).unwrap();
        for record in &a {
            let mirrored = c.iter().find(|r| r.label == record.label).unwrap();
            assert_eq!(record, mirrored);
        }
    }

    #[test]
    fn zero_probability_filters_stay_silent() {
        // Ideal state at the working point never fires p1, p2, p3.
        let cfg = paper_scale_config(123);
        let angle = HardyAngle::paradox(working_point()).unwrap();
        let records = simulate_counts(&cfg, &hardy_projectors(angle)).unwrap();
        for r in &records {
            if r.label != "p4" {
                assert_eq!(r.counts, 0, "{} fired", r.label);
            }
        }
        assert!(records[3].counts > 0);
    }

    #[test]
    fn basis_count_fractions_match_the_state() {
        // Average fractions over many seeds against (0, cos²γ, sin²γ, 0).
        let gamma = working_point();
        let mut totals = [0u64; 4];
        let runs = 200;
        for seed in 0..runs {
            let cfg = paper_scale_config(seed);
            let records = simulate_counts(&cfg, &spin_orbit_basis_projectors()).unwrap();
            for (k, r) in records.iter().enumerate() {
                totals[k] += r.counts;
            }
        }
        let grand: u64 = totals.iter().sum();
        let fraction = |k: usize| totals[k] as f64 / grand as f64;
        assert_eq!(totals[0], 0);
        assert_eq!(totals[3], 0);
        // ~1.55e6 total counts; 5σ of a binomial fraction is ~1.5e-3.
        assert_abs_diff_eq!(fraction(1), gamma.cos().powi(2), epsilon = 2e-3);
        assert_abs_diff_eq!(fraction(2), gamma.sin().powi(2), epsilon = 2e-3);
    }

    #[test]
    fn frequency_estimates_match_hand_arithmetic() {
        let records = alloc::vec![CountRecord {
            label: "p4".to_string(),
            counts: 888,
            window: 100.0,
        }];
        let est = estimate_frequencies(&records, 12_000).unwrap();
        assert_abs_diff_eq!(est[0].frequency, 0.074, epsilon = 1e-12);
        // √888 / 12000
        assert_abs_diff_eq!(est[0].sigma, 0.002_483_277_4, epsilon = 1e-9);
        assert!(!est[0].degenerate);

        let zero = estimate_frequencies(
            &alloc::vec![CountRecord { label: "p1".to_string(), counts: 0, window: 1.0 }],
            10,
        )
        .unwrap();
        assert_eq!(zero[0].frequency, 0.0);
        assert_eq!(zero[0].sigma, 0.0);
        assert!(zero[0].degenerate);

        assert!(matches!(estimate_frequencies(&records, 0), Err(SimError::ZeroTotal)));
    }

    fn estimate(label: &str, frequency: f64, sigma: f64) -> FrequencyEstimate {
        FrequencyEstimate {
            label: label.to_string(),
            counts: 0,
            frequency,
            sigma,
            degenerate: false,
        }
    }

    #[test]
    fn violation_statistic_on_reported_frequencies() {
        // Frozen arithmetic: gap = 0.074 − 0.0355 = 0.0385,
        // σ = √(0.002² + 0.001² + 0.0006² + 0.001²) = 2.52190e-3.
        let estimates = alloc::vec![
            estimate("p1", 0.021, 0.001),
            estimate("p2", 0.010, 0.001),
            estimate("p3", 0.0045, 0.0006),
            estimate("p4", 0.074, 0.002),
        ];
        let report = violation_statistic(&estimates).unwrap();
        assert_abs_diff_eq!(report.gap, 0.0385, epsilon = 1e-12);
        assert_abs_diff_eq!(report.gap_sigma, 0.002_521_904_0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.n_sigmas, 15.266_243, epsilon = 1e-4);
        assert!(report.violated);
        assert!(report.n_sigmas >= 7.0);
    }

    #[test]
    fn violation_statistic_edge_cases() {
        let zeros: Vec<FrequencyEstimate> = HARDY_LABELS
            .iter()
            .map(|l| estimate(l, 0.0, 0.0))
            .collect();
        let report = violation_statistic(&zeros).unwrap();
        assert_eq!(report.gap, 0.0);
        assert_eq!(report.n_sigmas, 0.0);
        assert!(!report.violated);

        let missing = alloc::vec![estimate("p1", 0.0, 0.0)];
        assert!(matches!(
            violation_statistic(&missing),
            Err(SimError::MissingLabel { .. })
        ));
    }

    #[test]
    fn noise_transformations() {
        let rho = crate::hardy::hardy_density(working_point());

        // p = 0 leaves the state alone.
        let ideal = NoiseModel::ideal();
        assert!(ideal.apply_to_state(&rho).matrix().max_abs_diff(rho.matrix()) < 1e-15);

        // p = 1 sends every rank-1 filter probability to 1/4.
        let full = NoiseModel { depolarizing_p: 1.0, ..NoiseModel::ideal() };
        let mixed = full.apply_to_state(&rho);
        for p in spin_orbit_basis_projectors() {
            assert_abs_diff_eq!(
                born_probability(&mixed, &p.matrix).unwrap(),
                0.25,
                epsilon = 1e-12
            );
        }

        // p = 0.084 lifts the forbidden p1 filter to about 2.1%.
        let leak = NoiseModel { depolarizing_p: 0.084, ..NoiseModel::ideal() };
        let noisy = leak.apply_to_state(&rho);
        let angle = HardyAngle::paradox(working_point()).unwrap();
        let p1 = born_probability(&noisy, &hardy_projectors(angle)[0].matrix).unwrap();
        assert_abs_diff_eq!(p1, 0.021, epsilon = 5e-4);

        // Crosstalk mixes toward uniform.
        let cross = NoiseModel { crosstalk_eps: 0.5, ..NoiseModel::ideal() };
        let q = cross.apply_to_probabilities(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(q[0], 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(q[1], 0.125, epsilon = 1e-15);

        // Override replaces the vector.
        let over = NoiseModel {
            override_frequencies: Some(alloc::vec![0.1, 0.2, 0.3, 0.4]),
            ..NoiseModel::ideal()
        };
        let q = over.apply_to_probabilities(&[0.0; 4]).unwrap();
        assert_eq!(q, alloc::vec![0.1, 0.2, 0.3, 0.4]);
        assert!(over.apply_to_probabilities(&[0.0; 3]).is_err());
    }

    #[test]
    fn noise_validation() {
        let bad = NoiseModel { depolarizing_p: 1.5, ..NoiseModel::ideal() };
        assert!(bad.validate().is_err());
        let bad = NoiseModel { crosstalk_eps: -0.1, ..NoiseModel::ideal() };
        assert!(bad.validate().is_err());
        let bad = NoiseModel {
            override_frequencies: Some(alloc::vec![0.5, 2.0, 0.0, 0.0]),
            ..NoiseModel::ideal()
        };
        assert!(bad.validate().is_err());
        let cfg = ExperimentConfig::ideal(0.4, 0.0, 100.0, 1);
        assert!(matches!(cfg.validate(), Err(SimError::InvalidRate { .. })));
        let cfg = ExperimentConfig::ideal(0.4, 120.0, 0.0, 1);
        assert!(matches!(cfg.validate(), Err(SimError::InvalidWindow { .. })));
    }

    #[test]
    fn depolarizing_preserves_physicality() {
        let rho = crate::hardy::hardy_density(0.3);
        for k in 0..=10 {
            let noise = NoiseModel {
                depolarizing_p: k as f64 / 10.0,
                ..NoiseModel::ideal()
            };
            let out = noise.apply_to_state(&rho);
            assert!(validate_physical(out.matrix()).is_ok(), "p = {}", k as f64 / 10.0);
        }
    }

    #[test]
    fn mean_working_point_frequency_over_many_runs() {
        // Empirical mean of the p4 frequency across replicated noiseless runs
        // stays within 4 combined standard errors of the ideal probability.
        let runs = 1000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for seed in 0..runs {
            let run = run_hardy_experiment(&paper_scale_config(seed)).unwrap();
            let f4 = run.report.frequencies[3].frequency;
            sum += f4;
            sum_sq += f4 * f4;
        }
        let mean = sum / runs as f64;
        let var = (sum_sq / runs as f64 - mean * mean).max(0.0);
        let se = (var / runs as f64).sqrt();
        let ideal = crate::hardy::hardy_p4_closed_form(working_point());
        assert!(
            (mean - ideal).abs() <= 4.0 * se.max(1e-6),
            "mean {mean} vs ideal {ideal} (se {se})"
        );
    }

    #[test]
    fn complete_set_frequencies_sum_to_one_within_tolerance() {
        // Frequencies of a complete analyzer set (all four outcomes of the
        // plain/plain pair) against an independent basis-run total.
        let cfg = paper_scale_config(31);
        let angle = HardyAngle::paradox(working_point()).unwrap();

        let mut complete = Vec::new();
        for (pol_out, oam_out, tag) in [
            (crate::qstate::Outcome::Plus, crate::qstate::Outcome::Plus, "pp"),
            (crate::qstate::Outcome::Plus, crate::qstate::Outcome::Minus, "pm"),
            (crate::qstate::Outcome::Minus, crate::qstate::Outcome::Plus, "mp"),
            (crate::qstate::Outcome::Minus, crate::qstate::Outcome::Minus, "mm"),
        ] {
            let (pp, pm) = hardy::analyzer_basis(angle, Subsystem::Polarization, hardy::Setting::Plain);
            let (op, om) = hardy::analyzer_basis(angle, Subsystem::Oam, hardy::Setting::Plain);
            let pol = if pol_out == crate::qstate::Outcome::Plus { pp } else { pm };
            let oam = if oam_out == crate::qstate::Outcome::Plus { op } else { om };
            complete.push(LabeledProjector {
                label: format!("plain/plain:{tag}"),
                matrix: projector(&tensor(&pol, &oam).unwrap()),
            });
        }

        let basis = simulate_counts(&cfg, &spin_orbit_basis_projectors()).unwrap();
        let n_tot: u64 = basis.iter().map(|r| r.counts).sum();
        let records = simulate_counts(&cfg, &complete).unwrap();
        let sum_counts: u64 = records.iter().map(|r| r.counts).sum();
        let sum_freq = sum_counts as f64 / n_tot as f64;

        // Var(sum) ≈ sum·(1/ΣC + 1/N_tot) for two independent Poisson totals.
        let sigma = sum_freq * (1.0 / sum_counts as f64 + 1.0 / n_tot as f64).sqrt();
        assert!(
            (sum_freq - 1.0).abs() <= 3.0 * sigma,
            "sum {sum_freq} sigma {sigma}"
        );
    }

    #[test]
    fn full_run_violates_at_paper_scale() {
        let run = run_hardy_experiment(&paper_scale_config(5)).unwrap();
        assert!(run.n_tot > 10_000 && run.n_tot < 14_000);
        assert!(run.report.violated);
        assert!(run.report.n_sigmas >= 7.0);
    }

    #[test]
    fn override_reproduces_reported_statistics() {
        let mut cfg = paper_scale_config(17);
        cfg.noise.override_frequencies = Some(alloc::vec![0.021, 0.010, 0.0045, 0.074]);
        let run = run_hardy_experiment(&cfg).unwrap();
        assert!(run.report.violated);
        assert!(run.report.n_sigmas >= 7.0, "n_sigmas = {}", run.report.n_sigmas);
    }
}
