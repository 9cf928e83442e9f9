//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a flat `Float64Array` of row-major records so the
//! page can plot without any decoding step.

use meanforce::dynamics::uniform_grid;
use meanforce::thermo::{hybridization_free_energy_spectral, subdivision_potential};
use meanforce::{classify, evolve_covariance, GaussianState, ModeCount, ModelParams};
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-10;

fn err(e: meanforce::Error) -> String {
    e.to_string()
}

/// (η, A_hyb) pairs for η in [0, eta_max]; NaN where η ≥ Ω_S/2.
pub fn free_energy_rows(gamma: f64, beta: f64, eta_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || !eta_max.is_finite() || eta_max <= 0.0 {
        return Err("need at least two points and eta_max > 0".into());
    }
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let eta = eta_max * i as f64 / (points - 1) as f64;
        let p = ModelParams::drude(1.0, beta, eta, gamma).map_err(err)?;
        let a = if 2.0 * eta < 1.0 {
            hybridization_free_energy_spectral(&p, TOL).map_err(err)?
        } else {
            f64::NAN
        };
        out.extend([eta, a]);
    }
    Ok(out)
}

/// (t, q̄, p̄, σ_qq, σ_pp, σ_qp) rows from the bare thermal state displaced to (1, 0).
/// A divergent run stops early.
pub fn trajectory_rows(eta: f64, gamma: f64, beta: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    let p = ModelParams::drude(1.0, beta, eta, gamma).map_err(err)?;
    let init = GaussianState::thermal(&p, 1.0, 0.0);
    let tr = evolve_covariance(&init, &p, &uniform_grid(t_max, steps), ModeCount::Adaptive).map_err(err)?;
    Ok(tr
        .times
        .iter()
        .zip(&tr.states)
        .flat_map(|(t, s)| [*t, s.q_mean, s.p_mean, s.sigma_qq, s.sigma_pp, s.sigma_qp])
        .collect())
}

/// (T, ℰ) pairs on a logarithmic temperature grid.
pub fn subdivision_rows(eta: f64, gamma: f64, t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || !(t_min > 0.0 && t_max > t_min) {
        return Err("need at least two points and 0 < t_min < t_max".into());
    }
    let ratio = t_max / t_min;
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let t = t_min * ratio.powf(i as f64 / (points - 1) as f64);
        let p = ModelParams::drude(1.0, 1.0 / t, eta, gamma).map_err(err)?;
        out.extend([t, subdivision_potential(&p).map_err(err)?.subdivision]);
    }
    Ok(out)
}

pub fn stability_label(eta: f64, gamma: f64) -> Result<String, String> {
    let p = ModelParams::drude(1.0, 5.0, eta, gamma).map_err(err)?;
    Ok(classify(&p, 1e-9).map_err(err)?.classification.to_string())
}

#[wasm_bindgen]
pub fn free_energy_curve(gamma: f64, beta: f64, eta_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    free_energy_rows(gamma, beta, eta_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn trajectory(eta: f64, gamma: f64, beta: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, JsValue> {
    trajectory_rows(eta, gamma, beta, t_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn subdivision_curve(eta: f64, gamma: f64, t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    subdivision_rows(eta, gamma, t_min, t_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn stability(eta: f64, gamma: f64) -> Result<String, JsValue> {
    stability_label(eta, gamma).map_err(|e| JsValue::from_str(&e))
}
