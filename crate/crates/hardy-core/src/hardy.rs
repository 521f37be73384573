//! The partially entangled spin-orbit state, the two pairs of dichotomic
//! observables measured against it, the four joint probabilities of the
//! all-versus-nothing argument, the closed form for the one nonvanishing
//! probability, its optimal entanglement angle, and Wootters concurrence.
//!
//! The state is
//!
//! ```text
//! |ψ(γ)⟩ = cos γ |L⟩_p |−1⟩_o − sin γ |R⟩_p |+1⟩_o ,
//! ```
//!
//! i.e. amplitudes `(0, cos γ, −sin γ, 0)` in the global basis ordering. For
//! `0 < γ < π/4` the analyzers below give three identically vanishing joint
//! probabilities while the fourth — which any noncontextual assignment would
//! force to vanish as well — stays strictly positive.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, c64, CMatrix, Complex64};
use crate::qstate::{
    born_probability, DensityOperator, Outcome, ProjectiveObservable, StateVector, Subsystem,
};

#[derive(Clone, Debug, PartialEq)]
pub enum HardyError {
    /// Paradox mode requires the open interval (0, π/4).
    GammaNotInParadoxRange { gamma: f64 },
    /// The analyzer parameterization takes square roots of sin γ and cos γ,
    /// so angles must stay in [0, π/2].
    GammaOutsideBasisDomain { gamma: f64 },
    /// Concurrence is defined here for two-qubit operators only.
    WrongDimension { got: usize },
}

impl fmt::Display for HardyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GammaNotInParadoxRange { gamma } => write!(
                f,
                "gamma = {gamma} rad is outside the open paradox interval (0, pi/4)"
            ),
            Self::GammaOutsideBasisDomain { gamma } => write!(
                f,
                "gamma = {gamma} rad is outside [0, pi/2]; analyzer states are undefined"
            ),
            Self::WrongDimension { got } => {
                write!(f, "expected a two-qubit (dimension 4) operator, got {got}")
            }
        }
    }
}

impl core::error::Error for HardyError {}

/// Entanglement angle with its admissible range checked at construction.
///
/// Paradox mode enforces the open interval `(0, π/4)` on which the
/// all-versus-nothing argument is available; exploration mode admits the full
/// `[0, π/2]` domain of the analyzer parameterization, covering separable
/// (`γ = 0`) and maximally entangled (`γ = π/4`) endpoints used for state
/// characterization sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyAngle {
    gamma: f64,
}

impl HardyAngle {
    pub fn paradox(gamma: f64) -> Result<Self, HardyError> {
        if gamma > 0.0 && gamma < FRAC_PI_4 {
            Ok(Self { gamma })
        } else {
            Err(HardyError::GammaNotInParadoxRange { gamma })
        }
    }

    pub fn exploration(gamma: f64) -> Result<Self, HardyError> {
        if (0.0..=FRAC_PI_2).contains(&gamma) {
            Ok(Self { gamma })
        } else {
            Err(HardyError::GammaOutsideBasisDomain { gamma })
        }
    }

    #[inline]
    pub fn gamma(self) -> f64 {
        self.gamma
    }

    pub fn in_paradox_range(self) -> bool {
        self.gamma > 0.0 && self.gamma < FRAC_PI_4
    }
}

/// Which of the two analyzer orientations of a subsystem is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Setting {
    Plain,
    Primed,
}

/// The spin-orbit state `cos γ |L⟩|−1⟩ − sin γ |R⟩|+1⟩`, valid for any real γ.
pub fn hardy_state(gamma: f64) -> StateVector {
    let (s, c) = gamma.sin_cos();
    StateVector::normalized(vec![
        Complex64::ZERO,
        c64(c, 0.0),
        c64(-s, 0.0),
        Complex64::ZERO,
    ])
    .expect("cos and sin cannot both vanish")
}

/// `ρ(γ) = |ψ(γ)⟩⟨ψ(γ)|`.
pub fn hardy_density(gamma: f64) -> DensityOperator {
    DensityOperator::from_pure(&hardy_state(gamma))
}

/// Analyzer basis pair `(|+⟩, |−⟩)` in the `[|+1⟩, |−1⟩]` ordering.
///
/// Plain setting, with `N = (sin γ + cos γ)^{−1/2}`:
///
/// ```text
/// |+⟩ = N (√(sin γ) |+1⟩ + √(cos γ) |−1⟩)
/// |−⟩ = N (−√(cos γ) |+1⟩ + √(sin γ) |−1⟩)
/// ```
///
/// Primed setting, with `N′ = (sin³γ + cos³γ)^{−1/2}`:
///
/// ```text
/// |+′⟩ = N′ (√(cos³γ) |+1⟩ + √(sin³γ) |−1⟩)
/// |−′⟩ = N′ (−√(sin³γ) |+1⟩ + √(cos³γ) |−1⟩)
/// ```
pub fn measurement_basis(angle: HardyAngle, setting: Setting) -> (StateVector, StateVector) {
    let (s, c) = angle.gamma().sin_cos();
    let (w_plus, w_minus) = match setting {
        Setting::Plain => (s, c),
        Setting::Primed => (c * c * c, s * s * s),
    };
    let norm = (w_plus + w_minus).sqrt().recip();
    let a = w_plus.sqrt() * norm;
    let b = w_minus.sqrt() * norm;
    let plus = StateVector::new(vec![c64(a, 0.0), c64(b, 0.0)]).expect("normalized by N");
    let minus = StateVector::new(vec![c64(-b, 0.0), c64(a, 0.0)]).expect("normalized by N");
    (plus, minus)
}

/// Analyzer basis pair for a specific slot of the product space.
///
/// The polarization slot uses [`measurement_basis`] as written. In the
/// orbital slot the roles of the two angular-momentum eigenstates are
/// exchanged (components swapped), because the entangled state pairs its
/// cos-weighted arm with `|+1⟩` in polarization but with `|−1⟩` in OAM. This
/// alignment is what makes the three exclusion probabilities vanish
/// identically; without it they do not.
pub fn analyzer_basis(
    angle: HardyAngle,
    subsystem: Subsystem,
    setting: Setting,
) -> (StateVector, StateVector) {
    let (plus, minus) = measurement_basis(angle, setting);
    match subsystem {
        Subsystem::Polarization => (plus, minus),
        Subsystem::Oam => (swap_components(&plus), swap_components(&minus)),
    }
}

fn swap_components(s: &StateVector) -> StateVector {
    let a = s.amplitudes();
    StateVector::new(vec![a[1], a[0]]).expect("permutation preserves the norm")
}

/// The dichotomic observable for one subsystem and setting, embedded into the
/// four-dimensional product space by tensoring the identity on the other
/// slot.
pub fn observable(
    angle: HardyAngle,
    subsystem: Subsystem,
    setting: Setting,
) -> ProjectiveObservable {
    let (plus, minus) = analyzer_basis(angle, subsystem, setting);
    ProjectiveObservable::from_basis(&plus, &minus)
        .expect("analyzer pairs are orthonormal by construction")
        .embed(subsystem)
        .expect("analyzer observables are qubit-sized")
}

/// Joint probability of observing the given outcomes when measuring the
/// selected polarization and OAM settings on `|ψ(γ)⟩`: the Born probability
/// of the product of the two (commuting) outcome projectors.
pub fn joint_probability(
    angle: HardyAngle,
    pol_setting: Setting,
    pol_outcome: Outcome,
    oam_setting: Setting,
    oam_outcome: Outcome,
) -> f64 {
    let rho = hardy_density(angle.gamma());
    let pol = observable(angle, Subsystem::Polarization, pol_setting);
    let oam = observable(angle, Subsystem::Oam, oam_setting);
    let product = pol.projector(pol_outcome).mul(oam.projector(oam_outcome));
    born_probability(&rho, &product.hermitized())
        .expect("product of commuting projectors is a projector")
}

/// One labeled entry of the four joint probabilities probed in the test.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JointEntry {
    /// Canonical label `p1`…`p4`.
    pub label: &'static str,
    pub spin_setting: Setting,
    pub spin_outcome: i8,
    pub orbit_setting: Setting,
    pub orbit_outcome: i8,
    pub probability: f64,
}

/// The four joint probabilities of the all-versus-nothing chain:
///
/// | label | event                              | ideal value        |
/// |-------|------------------------------------|--------------------|
/// | `p1`  | spin = +1 and orbit = +1           | 0                  |
/// | `p2`  | spin = −1 and orbit′ = −1          | 0                  |
/// | `p3`  | spin′ = −1 and orbit = −1          | 0                  |
/// | `p4`  | spin′ = −1 and orbit′ = −1         | strictly positive  |
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JointProbabilityTable {
    pub entries: [JointEntry; 4],
}

/// The `(setting, outcome)` pattern for each labeled entry, polarization
/// first. Shared by predictions, projector sets, and count labeling.
pub const JOINT_PATTERNS: [(&str, Setting, Outcome, Setting, Outcome); 4] = [
    ("p1", Setting::Plain, Outcome::Plus, Setting::Plain, Outcome::Plus),
    ("p2", Setting::Plain, Outcome::Minus, Setting::Primed, Outcome::Minus),
    ("p3", Setting::Primed, Outcome::Minus, Setting::Plain, Outcome::Minus),
    ("p4", Setting::Primed, Outcome::Minus, Setting::Primed, Outcome::Minus),
];

impl JointProbabilityTable {
    /// Quantum predictions for all four entries at the given angle.
    pub fn quantum(angle: HardyAngle) -> Self {
        let entries = JOINT_PATTERNS.map(|(label, ps, po, os, oo)| JointEntry {
            label,
            spin_setting: ps,
            spin_outcome: po.value() as i8,
            orbit_setting: os,
            orbit_outcome: oo.value() as i8,
            probability: joint_probability(angle, ps, po, os, oo),
        });
        Self { entries }
    }

    /// The probabilities in label order `[p1, p2, p3, p4]`.
    pub fn values(&self) -> [f64; 4] {
        [
            self.entries[0].probability,
            self.entries[1].probability,
            self.entries[2].probability,
            self.entries[3].probability,
        ]
    }
}

/// Closed form of the one nonvanishing joint probability:
/// `[sin 4γ / (4 (cos³γ + sin³γ))]²`.
pub fn hardy_p4_closed_form(gamma: f64) -> f64 {
    let (s, c) = gamma.sin_cos();
    let x = (4.0 * gamma).sin() / (4.0 * (c * c * c + s * s * s));
    x * x
}

/// Angular tolerance of the optimizer.
pub const OPTIMIZER_TOL: f64 = 1e-9;

/// Maximizes [`hardy_p4_closed_form`] over the paradox interval `(0, π/4)`
/// by golden-section search; returns `(γ*, p*)` with `p*` evaluated exactly
/// at the returned angle. The objective is smooth and unimodal there, so the
/// bracketing search cannot fail.
pub fn optimal_gamma() -> (f64, f64) {
    let (gamma, _) = golden_section_max(hardy_p4_closed_form, 0.0, FRAC_PI_4, OPTIMIZER_TOL);
    (gamma, hardy_p4_closed_form(gamma))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// narrowing the bracket below `tol`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    // (√5 − 1) / 2
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `σ_y ⊗ σ_y` in the global basis ordering.
fn spin_flip_operator() -> CMatrix {
    let sy = CMatrix::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]);
    linalg::kron(&sy, &sy)
}

/// Wootters concurrence of a two-qubit state.
///
/// With `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, the concurrence is
/// `max(0, λ₁ − λ₂ − λ₃ − λ₄)` where the `λ` are the decreasing square roots
/// of the eigenvalues of `ρ ρ̃`. Those are computed here as the eigenvalues
/// of the Hermitian `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn concurrence(rho: &DensityOperator) -> Result<f64, HardyError> {
    if rho.dim() != 4 {
        return Err(HardyError::WrongDimension { got: rho.dim() });
    }
    let flip = spin_flip_operator();
    let rho_tilde = flip.mul(&rho.matrix().conj()).mul(&flip);
    let sqrt_rho = linalg::sqrt_psd(rho.matrix());
    let m = sqrt_rho.mul(&rho_tilde).mul(&sqrt_rho).hermitized();
    let mut lambdas: Vec<f64> = linalg::hermitian_eigen(&m)
        .values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}
