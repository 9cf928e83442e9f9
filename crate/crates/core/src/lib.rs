//! Quantum Brownian oscillator coupled to a Drude bath: equilibrium
//! statistics, strong-coupling thermodynamics, stability classification
//! and exact dissipative dynamics.
//!
//! Units: Ω_S is the natural energy scale; ħ = k_B = 1 throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bath;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod matsubara;
pub mod quadrature;
pub mod response;
pub mod series;
pub mod special;
pub mod stability;
pub mod thermo;

pub use bath::{
    correlation_modes, phi_tilde, phi_tilde_imag, reorganization_energy, BathMode, DrudeBath, MatsubaraExpansion,
    ModeCount, SpectralFunction,
};
pub use dynamics::{discretized_bath_oracle, evolve_covariance, evolve_mean, GaussianState, MeanTrajectoryState};
pub use equilibrium::{effective_frequency, entanglement_entropy, equilibrium_variances, EquilibriumState};
pub use error::{Error, Result};
pub use response::{
    characteristic_roots, chi_tilde, chi_tilde_imag, propagator, solve_monic_cubic, CubicRoots, ModelParams, Propagator,
};
pub use stability::{classify, routh_hurwitz, Classification, RouthArray, StabilityReport};
pub use thermo::{
    canonical_reference, hybridization_free_energy_quadrature, hybridization_free_energy_reorg,
    hybridization_free_energy_spectral, internal_energy, subdivision_potential, vartheta, CanonicalReference,
    ThermoReport,
};
