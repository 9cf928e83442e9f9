//! Finite discretization of the Drude bath, solved exactly as a coupled
//! harmonic network; an independent check of the reduced dynamics.

use super::{check_grid, GaussianState, DIVERGENCE_LIMIT};
use crate::bath::SpectralFunction;
use crate::error::{Error, Result};
use crate::response::ModelParams;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Reduced (q, p) trajectory of the system coupled to `m_modes` bath
/// oscillators with frequencies up to `omega_max`.
///
/// Bath oscillators use H_E = Σ ω_j(p_j² + x_j²)/2 and coupling q Σ c_j x_j,
/// so c_j² = (2/π)J(ω_j)Δω_j. Frequencies sit on ω_j = ω_max·x_j²,
/// x_j = (j − ½)/M, denser where J/ω is largest. The part of the spectrum
/// above ω_max follows the system adiabatically and is kept as its static
/// shift −η_tail q̂², η_tail = η(1 − (2/π)arctan(ω_max/γ)).
pub fn discretized_bath_oracle(
    initial: &GaussianState,
    params: &ModelParams,
    t_grid: &[f64],
    m_modes: usize,
    omega_max: f64,
) -> Result<Vec<GaussianState>> {
    check_grid(t_grid)?;
    initial.validate()?;
    if m_modes == 0 {
        return Err(Error::InvalidParameter {
            name: "m_modes",
            reason: "at least one bath mode is required".into(),
        });
    }
    if !(omega_max > 0.0) || !omega_max.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega_max",
            reason: format!("must be positive and finite, got {omega_max}"),
        });
    }
    let folded = params.folded();
    let bath = folded.bath;
    let (w, beta) = (params.omega_s, params.beta);
    let eta_tail = bath.eta() * (1.0 - 2.0 / PI * (omega_max / bath.gamma()).atan());

    let n = m_modes + 1;
    let mut freq = vec![w; n];
    let mut coupling = vec![0.0; n];
    for j in 0..m_modes {
        let x = (j as f64 + 0.5) / m_modes as f64;
        let omega = omega_max * x * x;
        let d_omega = omega_max * 2.0 * x / m_modes as f64;
        freq[j + 1] = omega;
        coupling[j + 1] = (2.0 / PI * bath.spectral_density(omega) * d_omega).sqrt();
    }
    // ẋ = D p, ṗ = −W x; with y = D^{-1/2}x, ÿ = −K y, K = D^{1/2} W D^{1/2}
    let mut k = DMatrix::<f64>::zeros(n, n);
    k[(0, 0)] = w * (w - 2.0 * eta_tail);
    for j in 1..n {
        k[(j, j)] = freq[j] * freq[j];
        let off = (w * freq[j]).sqrt() * coupling[j];
        k[(0, j)] = off;
        k[(j, 0)] = off;
    }
    let eig = SymmetricEigen::new(k);
    let u = &eig.eigenvectors;
    let sqrt_d: Vec<f64> = freq.iter().map(|f| f.sqrt()).collect();

    // thermal bath, system block from `initial`, no correlations
    let bath_var: Vec<f64> = freq.iter().map(|&f| 0.5 / (0.5 * beta * f).tanh()).collect();

    let mut out = Vec::with_capacity(t_grid.len());
    let mut weights = vec![[0.0f64; 4]; n];
    for &t in t_grid {
        for (m, wts) in weights.iter_mut().enumerate() {
            let lambda = eig.eigenvalues[m];
            // cos, sin/ω and −ω sin, continued to λ ≤ 0
            *wts = if lambda > 0.0 {
                let om = lambda.sqrt();
                let (s, c) = (om * t).sin_cos();
                [c, s / om, -om * s, u[(0, m)]]
            } else if lambda < 0.0 {
                let kappa = (-lambda).sqrt();
                let (s, c) = ((kappa * t).sinh(), (kappa * t).cosh());
                [c, s / kappa, kappa * s, u[(0, m)]]
            } else {
                [1.0, t, 0.0, u[(0, m)]]
            };
        }
        let (mut qq, mut pp, mut qp) = (0.0, 0.0, 0.0);
        let mut rows = [[0.0f64; 2]; 2];
        for a in 0..n {
            let (mut qx, mut qpv, mut px, mut ppv) = (0.0, 0.0, 0.0, 0.0);
            for (m, wts) in weights.iter().enumerate() {
                let uu = wts[3] * u[(a, m)];
                qx += uu * wts[0];
                qpv += uu * wts[1];
                px += uu * wts[2];
                ppv += uu * wts[0];
            }
            let (qx, qpv) = (qx * sqrt_d[0] / sqrt_d[a], qpv * sqrt_d[0] * sqrt_d[a]);
            let (px, ppv) = (px / (sqrt_d[0] * sqrt_d[a]), ppv * sqrt_d[a] / sqrt_d[0]);
            if a == 0 {
                rows = [[qx, qpv], [px, ppv]];
                qq += qx * qx * initial.sigma_qq + qpv * qpv * initial.sigma_pp + 2.0 * qx * qpv * initial.sigma_qp;
                pp += px * px * initial.sigma_qq + ppv * ppv * initial.sigma_pp + 2.0 * px * ppv * initial.sigma_qp;
                qp += qx * px * initial.sigma_qq
                    + qpv * ppv * initial.sigma_pp
                    + (qx * ppv + qpv * px) * initial.sigma_qp;
            } else {
                let v = bath_var[a];
                qq += (qx * qx + qpv * qpv) * v;
                pp += (px * px + ppv * ppv) * v;
                qp += (qx * px + qpv * ppv) * v;
            }
        }
        let state = GaussianState {
            q_mean: rows[0][0] * initial.q_mean + rows[0][1] * initial.p_mean,
            p_mean: rows[1][0] * initial.q_mean + rows[1][1] * initial.p_mean,
            sigma_qq: qq,
            sigma_pp: pp,
            sigma_qp: qp,
        };
        let blown = !(state.max_abs() <= DIVERGENCE_LIMIT);
        out.push(state);
        if blown {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::uniform_grid;

    #[test]
    fn free_case_is_rotation() {
        let p = ModelParams::drude(1.0, 5.0, 0.0, 2.0).unwrap();
        let init = GaussianState {
            q_mean: 1.0,
            p_mean: 0.0,
            sigma_qq: 2.0,
            sigma_pp: 0.3,
            sigma_qp: 0.2,
        };
        let grid = uniform_grid(10.0, 20);
        let states = discretized_bath_oracle(&init, &p, &grid, 20, 80.0).unwrap();
        for (t, s) in grid.iter().zip(&states) {
            let (c, sn) = (t.cos(), t.sin());
            let qq = c * c * 2.0 + sn * sn * 0.3 + 2.0 * c * sn * 0.2;
            assert!((s.sigma_qq - qq).abs() < 1e-10);
            assert!((s.q_mean - c).abs() < 1e-12);
        }
    }
}
