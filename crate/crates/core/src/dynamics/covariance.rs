//! Symmetrized covariance of (q, p) under the exact Gaussian dynamics.
//!
//! The memory kernel is carried by the local variable φ, so y = (q, p, φ)
//! obeys ẏ = Ay − bF(t) with F the free bath force. Each exponential
//! component r_k e^{−ν_k|τ|} of Re C(τ) contributes to the covariance P
//! of y through the linear moment system
//!     Ẋ_k = (A − ν_k)X_k + b r_k,   Ṗ = AP + PAᵀ + Σ_k (bX_kᵀ + X_k bᵀ),
//! advanced with exact matrix-exponential steps. Matsubara components
//! beyond the retained count act as white noise 2Δδ(τ).

use super::{check_grid, GaussianState, DIVERGENCE_LIMIT};
use crate::bath::{correlation_modes, ModeCount};
use crate::error::{Error, Result};
use crate::response::ModelParams;
use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

type Mat9x3 = SMatrix<f64, 9, 3>;
type Vec9 = SVector<f64, 9>;

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<GaussianState>,
    pub diverged_at: Option<f64>,
    /// Matsubara modes treated explicitly (the Drude mode is extra).
    pub n_matsubara: usize,
    /// White-noise weight of the remaining Matsubara modes.
    pub tail_weight: f64,
    pub warnings: Vec<String>,
}

const ADAPTIVE_START: usize = 64;
const ADAPTIVE_CAP: usize = 1 << 14;
/// Default relative agreement required between successive mode counts.
pub const DEFAULT_MODE_TOL: f64 = 1e-6;

/// Evolves a factorized initial state (system Gaussian ⊗ thermal bath).
///
/// `ModeCount::Adaptive` doubles the Matsubara count from 64 until
/// no second moment on the grid changes by more than 1e−6·max(1, |σ|);
/// `ModeCount::Fixed(n)` uses n modes including the Drude mode and
/// checks the same criterion against half as many.
pub fn evolve_covariance(
    initial: &GaussianState,
    params: &ModelParams,
    t_grid: &[f64],
    n_modes: ModeCount,
) -> Result<CovarianceTrajectory> {
    evolve_covariance_with_tol(initial, params, t_grid, n_modes, DEFAULT_MODE_TOL)
}

/// [`evolve_covariance`] with a custom mode-convergence tolerance.
pub fn evolve_covariance_with_tol(
    initial: &GaussianState,
    params: &ModelParams,
    t_grid: &[f64],
    n_modes: ModeCount,
    tol: f64,
) -> Result<CovarianceTrajectory> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive and finite, got {tol}"),
        });
    }
    check_grid(t_grid)?;
    initial.validate()?;
    let converged = |a: &CovarianceTrajectory, b: &CovarianceTrajectory| {
        a.times.len() == b.times.len()
            && a.states.iter().zip(&b.states).all(|(x, y)| {
                [
                    (x.sigma_qq, y.sigma_qq),
                    (x.sigma_pp, y.sigma_pp),
                    (x.sigma_qp, y.sigma_qp),
                ]
                .iter()
                .all(|(u, v)| (u - v).abs() <= tol * u.abs().max(1.0))
            })
    };
    match n_modes {
        ModeCount::Fixed(0) => Err(Error::InvalidParameter {
            name: "n_modes",
            reason: "at least one mode is required".into(),
        }),
        ModeCount::Fixed(n) => {
            let run = evolve_with(initial, params, t_grid, n - 1)?;
            let reference = evolve_with(initial, params, t_grid, if n == 1 { 1 } else { (n - 1) / 2 })?;
            if !converged(&run, &reference) {
                return Err(Error::InsufficientModes(n));
            }
            Ok(run)
        }
        ModeCount::Adaptive => {
            let mut k = ADAPTIVE_START;
            let mut previous = evolve_with(initial, params, t_grid, k)?;
            while k < ADAPTIVE_CAP {
                k *= 2;
                let next = evolve_with(initial, params, t_grid, k)?;
                if converged(&next, &previous) {
                    return Ok(next);
                }
                previous = next;
            }
            Err(Error::InsufficientModes(k + 1))
        }
    }
}

fn drift_matrix(params: &ModelParams) -> Matrix3<f64> {
    let (w, g) = (params.omega_s, params.gamma());
    let eta = params.effective_eta();
    Matrix3::new(0.0, w, 0.0, -w, 0.0, -1.0, -2.0 * eta * g, 0.0, -g)
}

const B: [f64; 3] = [0.0, -1.0, 0.0];

/// Generator of (vec P, X, 1) for one mode of rate ν and unit amplitude.
fn mode_generator(a: &Matrix3<f64>, nu: f64) -> SMatrix<f64, 13, 13> {
    let mut m = SMatrix::<f64, 13, 13>::zeros();
    let b = Vector3::from(B);
    // vec(AP + PAᵀ) = (I⊗A + A⊗I) vec P, column-major vec
    for j in 0..3 {
        for i in 0..3 {
            let row = i + 3 * j;
            for k in 0..3 {
                m[(row, k + 3 * j)] += a[(i, k)];
                m[(row, i + 3 * k)] += a[(j, k)];
            }
            // vec(bXᵀ + Xbᵀ): entry (i, j) gets b_i X_j + X_i b_j
            m[(row, 9 + j)] += b[i];
            m[(row, 9 + i)] += b[j];
        }
    }
    for i in 0..3 {
        for k in 0..3 {
            m[(9 + i, 9 + k)] = a[(i, k)];
        }
        m[(9 + i, 9 + i)] -= nu;
        m[(9 + i, 12)] = b[i];
    }
    m
}

/// Generator of (vec P, 1) for white noise of weight 2Δ.
fn white_generator(a: &Matrix3<f64>, weight: f64) -> SMatrix<f64, 10, 10> {
    let mut m = SMatrix::<f64, 10, 10>::zeros();
    for j in 0..3 {
        for i in 0..3 {
            let row = i + 3 * j;
            for k in 0..3 {
                m[(row, k + 3 * j)] += a[(i, k)];
                m[(row, i + 3 * k)] += a[(j, k)];
            }
            m[(row, 9)] = 2.0 * weight * B[i] * B[j];
        }
    }
    m
}

struct ModeStep {
    px: Mat9x3,
    p1: Vec9,
    xx: Matrix3<f64>,
    x1: Vector3<f64>,
}

struct StepCache {
    dt: f64,
    phi: Matrix3<f64>,
    modes: Vec<ModeStep>,
    white: Vec9,
}

fn build_step(a: &Matrix3<f64>, rates: &[f64], tail_weight: f64, dt: f64) -> StepCache {
    let phi = (a * dt).exp();
    let modes = rates
        .iter()
        .map(|&nu| {
            let e = (mode_generator(a, nu) * dt).exp();
            ModeStep {
                px: e.fixed_view::<9, 3>(0, 9).into_owned(),
                p1: e.fixed_view::<9, 1>(0, 12).into_owned(),
                xx: e.fixed_view::<3, 3>(9, 9).into_owned(),
                x1: e.fixed_view::<3, 1>(9, 12).into_owned(),
            }
        })
        .collect();
    let white = (white_generator(a, tail_weight) * dt)
        .exp()
        .fixed_view::<9, 1>(0, 9)
        .into_owned();
    StepCache { dt, phi, modes, white }
}

fn evolve_with(
    initial: &GaussianState,
    params: &ModelParams,
    t_grid: &[f64],
    n_matsubara: usize,
) -> Result<CovarianceTrajectory> {
    let folded = params.folded();
    let expansion = correlation_modes(&folded.bath, params.beta, ModeCount::Fixed(n_matsubara + 1))?;
    let amplitudes: Vec<f64> = expansion.modes.iter().map(|m| m.amplitude.re).collect();
    let rates: Vec<f64> = expansion.modes.iter().map(|m| m.rate).collect();
    let a = drift_matrix(&folded);

    let mut mean = Vector3::new(initial.q_mean, initial.p_mean, 0.0);
    let mut p = Matrix3::new(
        initial.sigma_qq,
        initial.sigma_qp,
        0.0,
        initial.sigma_qp,
        initial.sigma_pp,
        0.0,
        0.0,
        0.0,
        0.0,
    );
    // X_k scaled by 1/r_k so the cached propagators are amplitude-free
    let mut xs = vec![Vector3::zeros(); rates.len()];
    let mut caches: Vec<StepCache> = Vec::new();

    let mut times = Vec::with_capacity(t_grid.len());
    let mut states = Vec::with_capacity(t_grid.len());
    let mut diverged_at = None;
    let mut t = 0.0;
    for &target in t_grid {
        let dt = target - t;
        if dt > 0.0 {
            let idx = match caches.iter().position(|c| (c.dt - dt).abs() <= 1e-12 * dt) {
                Some(i) => i,
                None => {
                    caches.push(build_step(&a, &rates, expansion.tail_weight, dt));
                    caches.len() - 1
                }
            };
            let step = &caches[idx];
            mean = step.phi * mean;
            p = step.phi * p * step.phi.transpose();
            let mut forced = step.white;
            for ((x, m), &r) in xs.iter_mut().zip(&step.modes).zip(&amplitudes) {
                forced += (m.px * *x + m.p1) * r;
                *x = m.xx * *x + m.x1;
            }
            for j in 0..3 {
                for i in 0..3 {
                    p[(i, j)] += forced[i + 3 * j];
                }
            }
            p = 0.5 * (p + p.transpose());
            t = target;
        }
        let state = GaussianState {
            q_mean: mean[0],
            p_mean: mean[1],
            sigma_qq: p[(0, 0)],
            sigma_pp: p[(1, 1)],
            sigma_qp: p[(0, 1)],
        };
        times.push(target);
        states.push(state);
        if !(state.max_abs() <= DIVERGENCE_LIMIT) {
            diverged_at = Some(target);
            break;
        }
    }
    Ok(CovarianceTrajectory {
        times,
        states,
        diverged_at,
        n_matsubara: expansion.n_matsubara,
        tail_weight: expansion.tail_weight,
        warnings: Vec::new(),
    })
}
