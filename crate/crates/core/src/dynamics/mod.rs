//! Exact open-system dynamics from a factorized initial state.

mod covariance;
mod mean;
mod oracle;

pub use covariance::{evolve_covariance, evolve_covariance_with_tol, CovarianceTrajectory, DEFAULT_MODE_TOL};
pub use mean::{evolve_mean, MeanTrajectory, DEFAULT_MEAN_TOL};
pub use oracle::discretized_bath_oracle;

use crate::error::{Error, Result};
use crate::response::ModelParams;

/// Any moment beyond this magnitude ends a trajectory as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// First moments and symmetrized covariance of the system.
///
/// σ_qp is ½⟨q̂p̂ + p̂q̂⟩ − q̄p̄; the commutator part i/2 is never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState {
    pub q_mean: f64,
    pub p_mean: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_qp: f64,
}

impl GaussianState {
    /// Displaced thermal state of the bare oscillator.
    pub fn thermal(params: &ModelParams, q_mean: f64, p_mean: f64) -> Self {
        let v = 0.5 / (0.5 * params.beta * params.omega_s).tanh();
        Self {
            q_mean,
            p_mean,
            sigma_qq: v,
            sigma_pp: v,
            sigma_qp: 0.0,
        }
    }

    /// σ_qqσ_pp − σ_qp², at least ¼ for a physical state.
    pub fn uncertainty_product(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_qp * self.sigma_qp
    }

    pub fn validate(&self) -> Result<()> {
        let values = [self.q_mean, self.p_mean, self.sigma_qq, self.sigma_pp, self.sigma_qp];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "initial",
                reason: "moments must be finite".into(),
            });
        }
        if !(self.sigma_qq > 0.0 && self.sigma_pp > 0.0) || self.uncertainty_product() < 0.25 - 1e-12 {
            return Err(Error::InvalidParameter {
                name: "initial",
                reason: format!(
                    "covariance violates the uncertainty relation (product {})",
                    self.uncertainty_product()
                ),
            });
        }
        Ok(())
    }

    fn max_abs(&self) -> f64 {
        [self.q_mean, self.p_mean, self.sigma_qq, self.sigma_pp, self.sigma_qp]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// State of the mean-value equations: q̄, p̄, the memory variable φ and
/// the Matsubara auxiliaries θ_n (θ_n decays at ϖ_n = 2πn/β).
#[derive(Clone, Debug, PartialEq)]
pub struct MeanTrajectoryState {
    pub q_mean: f64,
    pub p_mean: f64,
    pub phi: f64,
    pub theta: Vec<f64>,
}

impl MeanTrajectoryState {
    /// Factorized start: φ = θ_n = 0.
    pub fn factorized(q_mean: f64, p_mean: f64) -> Self {
        Self {
            q_mean,
            p_mean,
            phi: 0.0,
            theta: Vec::new(),
        }
    }
}

pub(crate) fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "must not be empty".into(),
        });
    }
    if !(t_grid[0] >= 0.0) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "times must be finite and start at t >= 0".into(),
        });
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "times must be strictly increasing".into(),
        });
    }
    Ok(())
}

/// n + 1 equally spaced times on [0, t_max].
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}
