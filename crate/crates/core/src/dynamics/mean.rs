use super::{check_grid, MeanTrajectoryState, DIVERGENCE_LIMIT};
use crate::error::{Error, Result};
use crate::matsubara::matsubara_frequency;
use crate::response::ModelParams;

pub const DEFAULT_MEAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MeanTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanTrajectoryState>,
    /// First grid time at which a moment exceeded the divergence limit.
    pub diverged_at: Option<f64>,
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type Vec3 = [f64; 3];

/// Integrates q̄̇ = Ω_S p̄, p̄̇ = −Ω_S q̄ − φ − Σθ_n, φ̇ = −γφ − 2λ²ηγ q̄,
/// θ̇_n = −ϖ_n θ_n.
///
/// The θ_n are pure decays and are advanced in closed form; the
/// (q̄, p̄, φ) block uses adaptive Dormand–Prince 5(4) with the given
/// local tolerance.
pub fn evolve_mean(
    initial: &MeanTrajectoryState,
    params: &ModelParams,
    t_grid: &[f64],
    tol: f64,
) -> Result<MeanTrajectory> {
    check_grid(t_grid)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let w = params.omega_s;
    let g = params.gamma();
    let eta = params.effective_eta();
    let theta0 = initial.theta.clone();
    let rates: Vec<f64> = (1..=theta0.len() as u64)
        .map(|n| matsubara_frequency(n, params.beta))
        .collect();
    let forcing = |t: f64| -> f64 { theta0.iter().zip(&rates).map(|(th, r)| th * (-r * t).exp()).sum() };
    let rhs = |t: f64, y: &Vec3| -> Vec3 {
        [
            w * y[1],
            -w * y[0] - y[2] - forcing(t),
            -g * y[2] - 2.0 * eta * g * y[0],
        ]
    };
    let make_state = |t: f64, y: &Vec3| MeanTrajectoryState {
        q_mean: y[0],
        p_mean: y[1],
        phi: y[2],
        theta: theta0.iter().zip(&rates).map(|(th, r)| th * (-r * t).exp()).collect(),
    };

    let mut y: Vec3 = [initial.q_mean, initial.p_mean, initial.phi];
    let mut t = 0.0;
    let rate_scale = w.max(g).max(rates.iter().copied().fold(0.0, f64::max));
    let mut h = 0.01 / rate_scale;
    let mut times = Vec::with_capacity(t_grid.len());
    let mut states = Vec::with_capacity(t_grid.len());
    let mut diverged_at = None;

    for &target in t_grid {
        while t < target {
            let step = h.min(target - t);
            let (next, err) = dopri_step(&rhs, t, &y, step);
            let scale: f64 = (0..3)
                .map(|i| tol * (1.0 + y[i].abs().max(next[i].abs())))
                .fold(f64::INFINITY, f64::min);
            let ratio = err / scale;
            if ratio <= 1.0 {
                t = if step == target - t { target } else { t + step };
                y = next;
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if ratio <= 1.0 {
                // keep h when the step was only shortened to hit the grid
                if step == h || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                h = step * factor;
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeCollapse { t });
            }
        }
        times.push(target);
        states.push(make_state(target, &y));
        if y.iter().any(|v| !(v.abs() <= DIVERGENCE_LIMIT)) {
            diverged_at = Some(target);
            break;
        }
    }
    Ok(MeanTrajectory {
        times,
        states,
        diverged_at,
    })
}

fn dopri_step<F: Fn(f64, &Vec3) -> Vec3>(rhs: &F, t: f64, y: &Vec3, h: f64) -> (Vec3, f64) {
    let mut k = [[0.0; 3]; 7];
    for stage in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            for i in 0..3 {
                ys[i] += h * A[stage][j] * kj[i];
            }
        }
        k[stage] = rhs(t + C[stage] * h, &ys);
    }
    let mut high = *y;
    let mut err: f64 = 0.0;
    for i in 0..3 {
        let (mut s5, mut s4) = (0.0, 0.0);
        for stage in 0..7 {
            s5 += B5[stage] * k[stage][i];
            s4 += B4[stage] * k[stage][i];
        }
        high[i] += h * s5;
        err = err.max((h * (s5 - s4)).abs());
    }
    (high, err)
}
