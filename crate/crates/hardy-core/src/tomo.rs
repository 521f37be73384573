//! Quantum state tomography for the spin-orbit space: an informationally
//! complete set of product filters built from the three mutually unbiased
//! bases of each qubit, Poissonian count simulation, and maximum-likelihood
//! reconstruction by a diluted fixed-point iteration.
//!
//! # Reconstruction
//!
//! With filters `Π_s`, counts `n_s`, and filter probabilities
//! `p_s = tr(ρ Π_s)`, the (profile) Poisson log-likelihood is maximized over
//! physical density operators by iterating
//!
//! ```text
//! R(ρ) = Σ_s (n_s / p_s(ρ)) Π_s / N ,    ρ ← R ρ R / tr(R ρ R) ,
//! ```
//!
//! which preserves Hermiticity, positivity, and trace at every step. When a
//! full step would lower the likelihood, the update is diluted to
//! `(I + εR)/(1 + ε)` with `ε` halved until the likelihood improves, which
//! restores monotonicity. The iteration requires the filter sum `Σ_s Π_s` to
//! be proportional to the identity; the standard setting set below satisfies
//! this (it sums to `9·I`).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::hardy::concurrence;
use crate::linalg::{c64, CMatrix, Complex64};
use crate::prep::{prepare_hardy, PrepError};
use crate::qstate::{
    born_probability, fidelity, projector, tensor, validate_physical, DensityOperator,
    StateVector,
};
use crate::simlab::{NoiseModel, SimError};
use crate::streams::{labeled_rng, mix_seed, poisson_draw};

/// Log-likelihood improvement below which the iteration stops.
pub const MLE_LOGL_TOL: f64 = 1e-10;
/// Iteration cap for the fixed-point solver.
pub const MLE_MAX_ITERATIONS: u32 = 5000;

#[derive(Clone, Debug, PartialEq)]
pub enum TomoError {
    /// counts_per_setting must be positive.
    InvalidCounts,
    /// The dataset and the settings disagree (missing or duplicated label).
    LabelMismatch { label: String },
    /// A dataset with no counts at all cannot be fit.
    ZeroCounts,
    /// The filter sum is not proportional to the identity.
    UnbalancedSettings,
    /// The settings do not span the space of Hermitian operators.
    NotInformationallyComplete { rank: usize },
    /// Dimension mismatch between the state and the settings.
    DimensionMismatch { expected: usize, got: usize },
    Preparation(PrepError),
    Noise(SimError),
}

impl fmt::Display for TomoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidCounts => write!(f, "counts per setting must be positive"),
            Self::LabelMismatch { label } => {
                write!(f, "dataset does not match the settings at '{label}'")
            }
            Self::ZeroCounts => write!(f, "dataset contains no counts"),
            Self::UnbalancedSettings => {
                write!(f, "setting projectors must sum to a multiple of the identity")
            }
            Self::NotInformationallyComplete { rank } => {
                write!(f, "settings span only rank {rank} of 16")
            }
            Self::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Self::Preparation(e) => write!(f, "preparation failed: {e}"),
            Self::Noise(e) => write!(f, "invalid noise model: {e}"),
        }
    }
}

impl core::error::Error for TomoError {}

impl From<PrepError> for TomoError {
    fn from(e: PrepError) -> Self {
        Self::Preparation(e)
    }
}

impl From<SimError> for TomoError {
    fn from(e: SimError) -> Self {
        Self::Noise(e)
    }
}

/// One tomography filter: a rank-1 product projector with a text label.
#[derive(Clone, Debug)]
pub struct TomographySetting {
    pub label: String,
    pub projector: CMatrix,
}

/// Counts recorded behind one tomography filter.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SettingCount {
    pub label: String,
    pub counts: u64,
}

/// The six single-qubit analyzer states: eigenstate pairs of the three
/// mutually unbiased bases, in the `[|+1⟩, |−1⟩]` ordering.
fn qubit_mub_states() -> [(&'static str, StateVector); 6] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mk = |a: Complex64, b: Complex64| StateVector::new(alloc::vec![a, b]).expect("normalized");
    [
        ("z+", mk(c64(1.0, 0.0), c64(0.0, 0.0))),
        ("z-", mk(c64(0.0, 0.0), c64(1.0, 0.0))),
        ("x+", mk(c64(h, 0.0), c64(h, 0.0))),
        ("x-", mk(c64(h, 0.0), c64(-h, 0.0))),
        ("y+", mk(c64(h, 0.0), c64(0.0, h))),
        ("y-", mk(c64(h, 0.0), c64(0.0, -h))),
    ]
}

/// The 36 product tomography settings: every pairing of the six polarization
/// analyzer states with the six orbital ones. Informationally complete for
/// the four-dimensional space, and the projectors sum to `9·I`.
pub fn tomography_settings() -> Vec<TomographySetting> {
    let states = qubit_mub_states();
    let mut settings = Vec::with_capacity(36);
    for (pol_name, pol) in &states {
        for (oam_name, oam) in &states {
            let product = tensor(pol, oam).expect("qubit states");
            settings.push(TomographySetting {
                label: format!("p:{pol_name}/o:{oam_name}"),
                projector: projector(&product),
            });
        }
    }
    settings
}

/// Orthonormal basis of Hermitian 4×4 operators (products of the identity
/// and the three Pauli operators on each slot, normalized by 1/2).
fn hermitian_basis() -> Vec<CMatrix> {
    let id = CMatrix::identity(2);
    let sx = CMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]);
    let sy = CMatrix::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]);
    let sz = CMatrix::from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]]);
    let singles = [id, sx, sy, sz];
    let mut basis = Vec::with_capacity(16);
    for a in &singles {
        for b in &singles {
            basis.push(crate::linalg::kron(a, b).scale(0.5));
        }
    }
    basis
}

/// Rank of the measurement map spanned by the settings, over the
/// 16-dimensional real space of Hermitian operators.
pub fn design_rank(settings: &[TomographySetting]) -> usize {
    let basis = hermitian_basis();
    // Gram matrix of the coefficient vectors, 16×16 real symmetric.
    let coeffs: Vec<Vec<f64>> = settings
        .iter()
        .map(|s| basis.iter().map(|b| s.projector.trace_product_re(b)).collect())
        .collect();
    let gram = CMatrix::from_fn(16, |i, j| {
        let g: f64 = coeffs.iter().map(|v| v[i] * v[j]).sum();
        c64(g, 0.0)
    });
    let eig = crate::linalg::hermitian_eigen(&gram);
    let scale = eig.values.last().copied().unwrap_or(0.0).max(1.0);
    eig.values.iter().filter(|&&x| x > scale * 1e-10).count()
}

/// Simulates one tomography acquisition: independent
/// `Poisson(p_s · counts_per_setting)` counts for every standard setting,
/// each drawn from the stream addressed by `(seed, label)`.
pub fn simulate_tomography(
    rho: &DensityOperator,
    counts_per_setting: u64,
    seed: u64,
) -> Result<Vec<SettingCount>, TomoError> {
    if counts_per_setting == 0 {
        return Err(TomoError::InvalidCounts);
    }
    if rho.dim() != 4 {
        return Err(TomoError::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    Ok(tomography_settings()
        .iter()
        .map(|s| {
            let p = born_probability(rho, &s.projector).expect("settings are projectors");
            let mean = p * counts_per_setting as f64;
            let mut rng = labeled_rng(seed, &s.label);
            SettingCount {
                label: s.label.clone(),
                counts: poisson_draw(mean, &mut rng),
            }
        })
        .collect())
}

/// Outcome of one accepted solver step.
#[derive(Clone, Copy, Debug)]
pub struct StepInfo {
    pub log_likelihood: f64,
    pub improvement: f64,
    /// Dilution factor used, if the full step had to be damped.
    pub dilution: Option<f64>,
}

/// The diluted fixed-point maximum-likelihood solver, exposed step by step
/// so convergence behavior (monotone likelihood, physical iterates) can be
/// inspected directly.
pub struct MleSolver {
    projectors: Vec<CMatrix>,
    counts: Vec<f64>,
    /// Σ n_s.
    total: f64,
    /// Profile estimate of the per-setting exposure.
    exposure: f64,
    /// Constant term Σ lgamma(n_s + 1) of the Poisson log-likelihood.
    lgamma_term: f64,
    state: CMatrix,
    log_likelihood: f64,
}

impl MleSolver {
    /// Validates the dataset against the settings and starts from the
    /// maximally mixed state.
    pub fn new(settings: &[TomographySetting], counts: &[SettingCount]) -> Result<Self, TomoError> {
        if counts.len() != settings.len() {
            return Err(TomoError::LabelMismatch {
                label: format!("{} settings vs {} counts", settings.len(), counts.len()),
            });
        }
        let mut aligned = Vec::with_capacity(settings.len());
        for s in settings {
            let found = counts
                .iter()
                .find(|c| c.label == s.label)
                .ok_or_else(|| TomoError::LabelMismatch { label: s.label.clone() })?;
            aligned.push(found.counts as f64);
        }
        let total: f64 = aligned.iter().sum();
        if total <= 0.0 {
            return Err(TomoError::ZeroCounts);
        }

        let dim = settings[0].projector.dim();
        let sum = settings
            .iter()
            .fold(CMatrix::zeros(dim), |acc, s| acc.add(&s.projector));
        let c = sum.trace().re / dim as f64;
        if sum.max_abs_diff(&CMatrix::identity(dim).scale(c)) > 1e-8 {
            return Err(TomoError::UnbalancedSettings);
        }
        let rank = design_rank(settings);
        if rank < dim * dim {
            return Err(TomoError::NotInformationallyComplete { rank });
        }

        let lgamma_term: f64 = aligned.iter().map(|&n| libm::lgamma(n + 1.0)).sum();
        let mut solver = Self {
            projectors: settings.iter().map(|s| s.projector.clone()).collect(),
            counts: aligned,
            total,
            exposure: total / c,
            lgamma_term,
            state: CMatrix::identity(dim).scale(1.0 / dim as f64),
            log_likelihood: 0.0,
        };
        solver.log_likelihood = solver.log_likelihood_of(&solver.state);
        Ok(solver)
    }

    fn probabilities(&self, state: &CMatrix) -> Vec<f64> {
        self.projectors
            .iter()
            .map(|p| state.trace_product_re(p).max(1e-12))
            .collect()
    }

    /// Poisson log-likelihood with the exposure profiled out of the data.
    pub fn log_likelihood_of(&self, state: &CMatrix) -> f64 {
        let mut acc = -self.lgamma_term;
        for (p, &n) in self.probabilities(state).iter().zip(self.counts.iter()) {
            let mean = self.exposure * p;
            acc -= mean;
            if n > 0.0 {
                acc += n * mean.ln();
            }
        }
        acc
    }

    fn gain_operator(&self, state: &CMatrix) -> CMatrix {
        let dim = state.dim();
        let probs = self.probabilities(state);
        let mut r = CMatrix::zeros(dim);
        for ((p, &n), proj) in probs.iter().zip(self.counts.iter()).zip(&self.projectors) {
            if n > 0.0 {
                r = r.add(&proj.scale(n / p));
            }
        }
        r.scale(1.0 / self.total)
    }

    fn normalized(m: &CMatrix) -> CMatrix {
        let h = m.hermitized();
        h.scale(1.0 / h.trace().re)
    }

    /// One monotone update. Tries the full fixed-point step first and backs
    /// off to diluted steps when the likelihood would decrease; a `None`
    /// improvement of zero means the iteration is at its numerical plateau.
    pub fn step(&mut self) -> StepInfo {
        let r = self.gain_operator(&self.state);
        let full = Self::normalized(&r.mul(&self.state).mul(&r));
        let full_ll = self.log_likelihood_of(&full);
        if full_ll >= self.log_likelihood {
            let improvement = full_ll - self.log_likelihood;
            self.state = full;
            self.log_likelihood = full_ll;
            return StepInfo { log_likelihood: full_ll, improvement, dilution: None };
        }

        let dim = self.state.dim();
        let mut eps = 0.5;
        while eps > 1e-9 {
            let m = CMatrix::identity(dim).add(&r.scale(eps)).scale(1.0 / (1.0 + eps));
            let candidate = Self::normalized(&m.mul(&self.state).mul(&m));
            let ll = self.log_likelihood_of(&candidate);
            if ll > self.log_likelihood {
                let improvement = ll - self.log_likelihood;
                self.state = candidate;
                self.log_likelihood = ll;
                return StepInfo { log_likelihood: ll, improvement, dilution: Some(eps) };
            }
            eps *= 0.5;
        }
        // No admissible step improves the likelihood: numerical fixed point.
        StepInfo {
            log_likelihood: self.log_likelihood,
            improvement: 0.0,
            dilution: Some(0.0),
        }
    }

    /// The current iterate as a validated density operator.
    pub fn current(&self) -> DensityOperator {
        validate_physical(&self.state).expect("iterates stay physical by construction")
    }

    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }
}

/// Maximum-likelihood reconstruction.
#[derive(Clone, Debug)]
pub struct TomographyResult {
    pub rho_hat: DensityOperator,
    pub log_likelihood: f64,
    pub iterations: u32,
    /// True when the likelihood improvement fell below [`MLE_LOGL_TOL`];
    /// false when the iteration cap was reached first.
    pub converged: bool,
}

/// Runs the diluted fixed-point iteration to convergence (likelihood
/// improvement below [`MLE_LOGL_TOL`]) or to the iteration cap. The result
/// is returned either way, with `converged` reporting which case occurred.
pub fn mle_reconstruct(
    settings: &[TomographySetting],
    counts: &[SettingCount],
) -> Result<TomographyResult, TomoError> {
    let mut solver = MleSolver::new(settings, counts)?;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MLE_MAX_ITERATIONS {
        let info = solver.step();
        iterations += 1;
        if info.improvement < MLE_LOGL_TOL {
            converged = true;
            break;
        }
    }
    Ok(TomographyResult {
        rho_hat: solver.current(),
        log_likelihood: solver.log_likelihood(),
        iterations,
        converged,
    })
}

/// One point of a reconstruction sweep over the entanglement angle.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CurvePoint {
    pub gamma: f64,
    /// Concurrence of the reconstructed state.
    pub concurrence: f64,
    /// Ideal value `sin 2γ` for the pure target.
    pub concurrence_theory: f64,
    /// Fidelity of the reconstruction to the ideal pure state.
    pub fidelity: f64,
}

/// Full pipeline per grid point: physical preparation, optional noise,
/// simulated counts, reconstruction, concurrence. Each point draws from its
/// own derived seed, so points can be evaluated in any order.
pub fn concurrence_curve(
    gamma_grid: &[f64],
    counts_per_setting: u64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<Vec<CurvePoint>, TomoError> {
    noise.validate()?;
    let mut points = Vec::with_capacity(gamma_grid.len());
    for (i, &gamma) in gamma_grid.iter().enumerate() {
        let target = prepare_hardy(gamma)?;
        let ideal = DensityOperator::from_pure(&target);
        let rho = noise.apply_to_state(&ideal);
        let counts = simulate_tomography(&rho, counts_per_setting, mix_seed(seed, i as u64))?;
        let result = mle_reconstruct(&tomography_settings(), &counts)?;
        let c = concurrence(&result.rho_hat).expect("reconstruction is two-qubit");
        let f = fidelity(&result.rho_hat, &ideal).expect("matching dimensions");
        points.push(CurvePoint {
            gamma,
            concurrence: c,
            concurrence_theory: (2.0 * gamma).sin(),
            fidelity: f,
        });
    }
    Ok(points)
}
