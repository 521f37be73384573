//! Quantum-state primitives for the spin-orbit Hilbert spaces: normalized
//! state vectors, density operators with enforced physicality, dichotomic
//! projective observables, the Born rule, Uhlmann fidelity, and partial
//! traces.
//!
//! Dimensions are restricted to 2 (one qubit subspace) and 4 (the joint
//! polarization ⊗ orbital space); see the crate docs for the fixed basis
//! ordering. All functions are pure: no shared state, safe to call
//! concurrently.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, CMatrix, Complex64};

/// Entrywise tolerance for Hermiticity and unit-trace checks.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue a density operator may carry.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance used when deciding whether a matrix is a projector.
pub const PROJECTOR_TOL: f64 = 1e-10;
/// Clamping slack for Born probabilities.
pub const PROBABILITY_CLAMP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum QstateError {
    /// Dimension is not 2 or 4, or two operands disagree.
    InvalidDimension { expected: usize, got: usize },
    /// Amplitudes are not normalized within tolerance.
    NotNormalized { norm_sqr: f64 },
    /// A vector with vanishing norm cannot be normalized.
    ZeroNorm,
    /// The matrix fails the projector checks (Hermitian + idempotent).
    NotAProjector { violation: f64 },
    /// A basis pair handed to an observable is not orthonormal.
    NotOrthogonal { overlap: f64 },
}

impl fmt::Display for QstateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidDimension { expected, got } => {
                write!(f, "invalid dimension: expected {expected}, got {got}")
            }
            Self::NotNormalized { norm_sqr } => {
                write!(f, "state not normalized: |amplitudes|^2 = {norm_sqr}")
            }
            Self::ZeroNorm => write!(f, "cannot normalize a zero vector"),
            Self::NotAProjector { violation } => {
                write!(f, "matrix is not a projector (violation {violation:.3e})")
            }
            Self::NotOrthogonal { overlap } => {
                write!(f, "basis states are not orthogonal (|<a|b>| = {overlap:.3e})")
            }
        }
    }
}

impl core::error::Error for QstateError {}

/// Which qubit slot of the four-dimensional product space is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Subsystem {
    /// Polarization (spin angular momentum) qubit; the slower-varying index.
    Polarization,
    /// Orbital-angular-momentum qubit; the faster-varying index.
    Oam,
}

/// Measurement outcome of a dichotomic observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

fn check_dim(dim: usize) -> Result<(), QstateError> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(QstateError::InvalidDimension { expected: 2, got: dim })
    }
}

/// Normalized pure state over the fixed basis ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QstateError> {
        check_dim(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(QstateError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary amplitudes; fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, QstateError> {
        check_dim(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(QstateError::ZeroNorm);
        }
        let inv = norm_sqr.sqrt().recip();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self, QstateError> {
        check_dim(dim)?;
        let mut amplitudes = alloc::vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    /// Real-amplitude convenience constructor (normalizes).
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QstateError> {
        Self::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Names of the ordered basis kets this vector is expressed in.
    pub fn basis_label(&self) -> &'static [&'static str] {
        match self.dim() {
            2 => &["|+1>", "|-1>"],
            _ => &["|+1>p|+1>o", "|+1>p|-1>o", "|-1>p|+1>o", "|-1>p|-1>o"],
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`, the ray overlap.
    pub fn overlap_sq(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Phase-blind equality: true when `|⟨self|other⟩|² ≥ 1 − tol`.
    /// Global phase is unobservable, so states are never compared
    /// amplitude-by-amplitude.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && self.overlap_sq(other) >= 1.0 - tol
    }
}

/// Tensor product of two qubit states into the four-dimensional product
/// space (polarization slot first). The result is renormalized.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector, QstateError> {
    if a.dim() != 2 {
        return Err(QstateError::InvalidDimension { expected: 2, got: a.dim() });
    }
    if b.dim() != 2 {
        return Err(QstateError::InvalidDimension { expected: 2, got: b.dim() });
    }
    StateVector::normalized(linalg::kron_vec(a.amplitudes(), b.amplitudes()))
}

/// Rank-1 projector `|s⟩⟨s|`.
pub fn projector(s: &StateVector) -> CMatrix {
    let n = s.dim();
    CMatrix::from_fn(n, |i, j| s.amplitudes()[i] * s.amplitudes()[j].conj())
}

/// How far `m` is from being a projector: worst of the Hermiticity gap and
/// the idempotency defect `max |m² − m|`.
pub fn projector_violation(m: &CMatrix) -> f64 {
    let herm = m.hermiticity_gap();
    let idem = m.mul(m).max_abs_diff(m);
    herm.max(idem)
}

/// Hermitian, unit-trace, positive-semidefinite operator on dimension 2 or 4.
///
/// Values of this type are only obtainable through validating or manifestly
/// physical constructors, so downstream code can rely on physicality.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// `|s⟩⟨s|` for a normalized pure state.
    pub fn from_pure(s: &StateVector) -> Self {
        Self { matrix: projector(s) }
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self, QstateError> {
        check_dim(dim)?;
        Ok(Self {
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
        })
    }

    /// Convex mixture `w·self + (1−w)·other`.
    pub fn mix(&self, other: &DensityOperator, w: f64) -> DensityOperator {
        debug_assert!((0.0..=1.0).contains(&w));
        DensityOperator {
            matrix: self.matrix.scale(w).add(&other.matrix.scale(1.0 - w)),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).values
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product_re(&self.matrix)
    }
}

/// Report of which physicality invariants a matrix violates and by how much.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalityDiagnostics {
    /// `max |a_ij − conj(a_ji)|`; must be ≤ 1e-12.
    pub hermiticity_gap: f64,
    /// `|tr − 1|`; must be ≤ 1e-12.
    pub trace_error: f64,
    /// Smallest eigenvalue of the Hermitian part; must be ≥ −1e-10.
    pub min_eigenvalue: f64,
    pub failures: Vec<String>,
}

impl PhysicalityDiagnostics {
    pub fn is_physical(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PhysicalityDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_physical() {
            return write!(f, "physical density operator");
        }
        write!(f, "not a physical density operator: ")?;
        for (i, failure) in self.failures.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{failure}")?;
        }
        Ok(())
    }
}

/// Checks the density-operator invariants, returning either a validated
/// operator or diagnostics naming each failed invariant and its margin.
pub fn validate_physical(m: &CMatrix) -> Result<DensityOperator, PhysicalityDiagnostics> {
    use alloc::format;

    let hermiticity_gap = m.hermiticity_gap();
    let trace_error = (m.trace() - Complex64::ONE).norm();
    let min_eigenvalue = linalg::hermitian_eigen(m)
        .values
        .first()
        .copied()
        .unwrap_or(0.0);

    let mut failures = Vec::new();
    if hermiticity_gap > HERMITICITY_TOL {
        failures.push(format!(
            "hermiticity violated by {hermiticity_gap:.3e} (tolerance {HERMITICITY_TOL:.0e})"
        ));
    }
    if trace_error > HERMITICITY_TOL {
        failures.push(format!(
            "trace deviates from 1 by {trace_error:.3e} (tolerance {HERMITICITY_TOL:.0e})"
        ));
    }
    if min_eigenvalue < -PSD_TOL {
        failures.push(format!(
            "negative eigenvalue {min_eigenvalue:.3e} (tolerance -{PSD_TOL:.0e})"
        ));
    }

    if failures.is_empty() {
        Ok(DensityOperator { matrix: m.clone() })
    } else {
        Err(PhysicalityDiagnostics {
            hermiticity_gap,
            trace_error,
            min_eigenvalue,
            failures,
        })
    }
}

/// Born probability `tr(ρ P)` for a projector `P`, clamped to `[0, 1]`.
pub fn born_probability(rho: &DensityOperator, proj: &CMatrix) -> Result<f64, QstateError> {
    if rho.dim() != proj.dim() {
        return Err(QstateError::InvalidDimension {
            expected: rho.dim(),
            got: proj.dim(),
        });
    }
    let violation = projector_violation(proj);
    if violation > PROJECTOR_TOL {
        return Err(QstateError::NotAProjector { violation });
    }
    let p = rho.matrix().trace_product_re(proj);
    debug_assert!(
        p > -PROBABILITY_CLAMP_TOL && p < 1.0 + PROBABILITY_CLAMP_TOL,
        "born probability {p} outside clamp tolerance"
    );
    Ok(p.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `F(ρ, σ) = (tr √(√ρ σ √ρ))²`.
///
/// For a pure `σ = |ψ⟩⟨ψ|` this reduces to `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, QstateError> {
    if rho.dim() != sigma.dim() {
        return Err(QstateError::InvalidDimension {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let sr = linalg::sqrt_psd(rho.matrix());
    let inner = sr.mul(sigma.matrix()).mul(&sr);
    let root_sum: f64 = linalg::hermitian_eigen(&inner)
        .values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Partial trace of a two-qubit operator down to the kept subsystem.
pub fn partial_trace(
    rho: &DensityOperator,
    keep: Subsystem,
) -> Result<DensityOperator, QstateError> {
    if rho.dim() != 4 {
        return Err(QstateError::InvalidDimension { expected: 4, got: rho.dim() });
    }
    let m = rho.matrix();
    // Composite index (j, k) -> 2j + k with j polarization, k OAM.
    let reduced = match keep {
        Subsystem::Polarization => CMatrix::from_fn(2, |i, j| {
            m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1)
        }),
        Subsystem::Oam => CMatrix::from_fn(2, |i, j| {
            m.get(i, j) + m.get(2 + i, 2 + j)
        }),
    };
    Ok(DensityOperator { matrix: reduced })
}

/// Dichotomic observable given by a pair of orthogonal projectors with
/// outcomes ±1.
#[derive(Clone, Debug)]
pub struct ProjectiveObservable {
    plus: CMatrix,
    minus: CMatrix,
}

impl ProjectiveObservable {
    /// Builds the observable projecting onto an orthonormal basis pair.
    pub fn from_basis(plus: &StateVector, minus: &StateVector) -> Result<Self, QstateError> {
        if plus.dim() != minus.dim() {
            return Err(QstateError::InvalidDimension {
                expected: plus.dim(),
                got: minus.dim(),
            });
        }
        let overlap = plus.inner(minus).norm();
        if overlap > 1e-12 {
            return Err(QstateError::NotOrthogonal { overlap });
        }
        Ok(Self {
            plus: projector(plus),
            minus: projector(minus),
        })
    }

    /// Accepts raw projectors after checking idempotency, mutual
    /// orthogonality, and completeness on their space.
    pub fn from_projectors(plus: CMatrix, minus: CMatrix) -> Result<Self, QstateError> {
        let violation = projector_violation(&plus).max(projector_violation(&minus));
        if violation > 1e-12 {
            return Err(QstateError::NotAProjector { violation });
        }
        let cross = plus.mul(&minus).max_abs();
        if cross > 1e-12 {
            return Err(QstateError::NotOrthogonal { overlap: cross });
        }
        let completeness = plus
            .add(&minus)
            .max_abs_diff(&CMatrix::identity(plus.dim()));
        if completeness > 1e-12 {
            return Err(QstateError::NotAProjector { violation: completeness });
        }
        Ok(Self { plus, minus })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn projector(&self, outcome: Outcome) -> &CMatrix {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }

    /// The observable operator `P₊ − P₋` (eigenvalues ±1).
    pub fn operator(&self) -> CMatrix {
        self.plus.sub(&self.minus)
    }

    /// Embeds a qubit observable into the product space, acting on the given
    /// slot and leaving the other untouched (tensor with identity).
    pub fn embed(&self, slot: Subsystem) -> Result<ProjectiveObservable, QstateError> {
        if self.dim() != 2 {
            return Err(QstateError::InvalidDimension { expected: 2, got: self.dim() });
        }
        let id = CMatrix::identity(2);
        let lift = |p: &CMatrix| match slot {
            Subsystem::Polarization => linalg::kron(p, &id),
            Subsystem::Oam => linalg::kron(&id, p),
        };
        Ok(ProjectiveObservable {
            plus: lift(&self.plus),
            minus: lift(&self.minus),
        })
    }

    /// Outcome probabilities `(p₊, p₋)` in the given state.
    pub fn probabilities(&self, rho: &DensityOperator) -> Result<(f64, f64), QstateError> {
        Ok((
            born_probability(rho, &self.plus)?,
            born_probability(rho, &self.minus)?,
        ))
    }

    /// Expectation value `p₊ − p₋`.
    pub fn expectation(&self, rho: &DensityOperator) -> Result<f64, QstateError> {
        let (p, m) = self.probabilities(rho)?;
        Ok(p - m)
    }
}
