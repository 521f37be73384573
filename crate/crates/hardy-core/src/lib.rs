//! Simulation and statistical verification of a single-photon Hardy test in
//! the joint polarization / orbital-angular-momentum (spin-orbit) Hilbert
//! space.
//!
//! The crate models the full chain of such an experiment:
//!
//! - [`qstate`] — complex linear algebra and quantum-state primitives for the
//!   two- and four-dimensional Hilbert spaces involved (Born rule, fidelity,
//!   partial trace, physicality validation);
//! - [`hardy`] — the partially entangled spin-orbit state, the two pairs of
//!   dichotomic observables it is tested against, the four joint
//!   probabilities of the all-versus-nothing argument, and the entanglement
//!   angle that maximizes the paradoxical event;
//! - [`prep`] — the physical preparation pipeline: Jones calculus for the
//!   wave-plate sequence and the q-plate spin-orbit conversion;
//! - [`noncontextual`] — the 16-outcome noncontextual realistic model, its
//!   marginals, and the exact bound it places on the paradoxical event;
//! - [`simlab`] — Monte Carlo photon counting with Poissonian statistics,
//!   noise models, frequency estimation, and the violation statistic;
//! - [`tomo`] — mutually-unbiased-basis tomography settings, Poissonian count
//!   simulation, and diluted fixed-point maximum-likelihood reconstruction.
//!
//! All angles are radians; degree conversion belongs to user interfaces.
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables standard-library float intrinsics and error trait
//! integration.
//!
//! # Basis convention
//!
//! One ordering is used everywhere. Single-qubit spaces are ordered
//! `[|+1⟩, |−1⟩]` (angular-momentum eigenvalue, ħ units); for polarization
//! `|+1⟩` is left-circular `|L⟩` and `|−1⟩` is right-circular `|R⟩`. The
//! four-dimensional product space puts the polarization slot first:
//! `[|+1⟩_p|+1⟩_o, |+1⟩_p|−1⟩_o, |−1⟩_p|+1⟩_o, |−1⟩_p|−1⟩_o]`.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod hardy;
pub mod linalg;
pub mod noncontextual;
pub mod prep;
pub mod qstate;
pub mod simlab;
pub mod streams;
pub mod tomo;

pub use linalg::{CMatrix, Complex64};
pub use qstate::{DensityOperator, Outcome, StateVector, Subsystem};
