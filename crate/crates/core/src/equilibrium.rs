//! Reduced equilibrium state: variances from Matsubara sums of the
//! response function, symplectic eigenvalue, effective frequency and
//! entanglement entropy.
//!
//! The sums are split into the free-oscillator part ½coth(βΩ_S/2),
//! known in closed form, and a coupling-induced remainder whose summand
//! is proportional to η. Carrying ν − ½ separately keeps Ω_eff accurate
//! at low temperature where ν is within 1e−9 of ½.

use crate::error::{Error, Result};
use crate::matsubara::{sum_positive, Rational};
use crate::response::ModelParams;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquilibriumState {
    pub var_q: f64,
    pub var_p: f64,
    /// √(var_q·var_p).
    pub nu: f64,
    /// ν − ½, computed without cancellation.
    pub nu_excess: f64,
    pub omega_eff: f64,
    /// Bound on the absolute error of var_q and var_p from the sums.
    pub error_estimate: f64,
}

/// Bose occupation 1/(e^{βΩ} − 1).
pub fn bose_occupation(beta: f64, omega: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// Product of two ascending polynomials.
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// f(w) (w² + Ω²) in ascending powers, with f the characteristic cubic.
pub(crate) fn coupled_denominator(params: &ModelParams) -> Vec<f64> {
    let [c3, c2, c1, c0] = params.characteristic_polynomial();
    let w = params.omega_s;
    poly_mul(&[c0, c1, c2, c3], &[w * w, 0.0, 1.0])
}

pub fn equilibrium_variances(params: &ModelParams, tol: f64) -> Result<EquilibriumState> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let (w, beta) = (params.omega_s, params.beta);
    if !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: "must be finite".into(),
        });
    }
    let eta = params.effective_eta();
    let gamma = params.gamma();
    if 2.0 * eta >= w {
        return Err(Error::StabilityViolation {
            eta_eff: eta,
            half_omega: 0.5 * w,
        });
    }
    let n_b = bose_occupation(beta, w);
    let (mut dq, mut dp, mut err) = (0.0, 0.0, 0.0);
    if eta > 0.0 {
        let den = coupled_denominator(params);
        let q_sum = sum_positive(&Rational::new(vec![2.0 * eta * gamma * w * w], den.clone()), beta, tol)?;
        let p_sum = sum_positive(&Rational::new(vec![0.0, 0.0, -2.0 * eta * gamma * w], den), beta, tol)?;
        dq = 2.0 * eta / (beta * w * (w - 2.0 * eta)) + 2.0 / beta * q_sum.value;
        dp = 2.0 / (beta * w) * p_sum.value;
        err = 2.0 / beta * q_sum.error_estimate.max(p_sum.error_estimate / w);
    }
    let a = n_b + dq;
    let b = n_b + dp;
    let var_q = 0.5 + a;
    let var_p = 0.5 + b;
    if !(var_q > 0.0 && var_p > 0.0) {
        return Err(Error::InvariantViolation(format!(
            "non-positive variance (var_q = {var_q}, var_p = {var_p})"
        )));
    }
    let (nu, nu_excess) = if eta == 0.0 {
        (0.5 + n_b, n_b)
    } else {
        let nu = (var_q * var_p).sqrt();
        (nu, (0.5 * (a + b) + a * b) / (nu + 0.5))
    };
    let mut state = EquilibriumState {
        var_q,
        var_p,
        nu,
        nu_excess,
        omega_eff: f64::NAN,
        error_estimate: err,
    };
    state.omega_eff = effective_frequency(&state, beta)?;
    Ok(state)
}

/// (2/β)·arcoth(2ν) = ln(1 + 1/(ν − ½))/β.
pub fn effective_frequency(state: &EquilibriumState, beta: f64) -> Result<f64> {
    if !(state.nu_excess > 0.0) {
        return Err(Error::Domain(format!(
            "effective frequency needs nu > 1/2 (nu - 1/2 = {})",
            state.nu_excess
        )));
    }
    Ok((1.0 / state.nu_excess).ln_1p() / beta)
}

/// (1 + n)ln(1 + n) − n ln n, the entropy of a mode with occupation n.
pub fn bose_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (1.0 + n) * n.ln_1p() - n * n.ln()
}

/// Von Neumann entropy (ν+½)ln(ν+½) − (ν−½)ln(ν−½) of the Gaussian state.
pub fn entanglement_entropy(state: &EquilibriumState) -> Result<f64> {
    if state.nu_excess < 0.0 {
        return Err(Error::Domain(format!(
            "symplectic eigenvalue below 1/2 (nu - 1/2 = {})",
            state.nu_excess
        )));
    }
    Ok(bose_entropy(state.nu_excess))
}

/// State with the given variances, for callers that already have them.
pub fn state_from_variances(var_q: f64, var_p: f64, beta: f64) -> Result<EquilibriumState> {
    let (a, b) = (var_q - 0.5, var_p - 0.5);
    let nu = (var_q * var_p).sqrt();
    let mut state = EquilibriumState {
        var_q,
        var_p,
        nu,
        nu_excess: (0.5 * (a + b) + a * b) / (nu + 0.5),
        omega_eff: f64::NAN,
        error_estimate: 0.0,
    };
    if state.nu_excess > 0.0 {
        state.omega_eff = effective_frequency(&state, beta)?;
    }
    Ok(state)
}
