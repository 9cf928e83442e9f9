//! Strong-coupling thermodynamics: hybridization free energy by three
//! routes, internal energy and entropies from 𝒵_S, and the subdivision
//! potential ℰ.
//!
//! Only ln𝒵_S − ln Z_β = −βA_hyb is ever needed; the bath partition
//! function cancels.

use crate::equilibrium::{
    bose_entropy, bose_occupation, entanglement_entropy, equilibrium_variances, poly_mul, EquilibriumState,
};
use crate::error::{Error, Result};
use crate::matsubara::{matsubara_frequency, sum_positive, Rational, Summand};
use crate::quadrature::integrate;
use crate::response::ModelParams;
use crate::series::{poly_eval, rational_expansion, root_bound, Series};

/// x(w) = λ²Ω_S φ̃_E(iw)/(Ω_S² + w²) as an ascending rational function.
fn coupling_ratio(params: &ModelParams) -> (Vec<f64>, Vec<f64>) {
    let (w, g) = (params.omega_s, params.gamma());
    let eta = params.effective_eta();
    (vec![2.0 * eta * g * w], poly_mul(&[w * w, 0.0, 1.0], &[g, 1.0]))
}

/// ϑ(w) = ½ ln|(Ω_S² + w²)/(Ω_S² + w² − λ²Ω_S φ̃_E(iw))| = −½ ln|1 − x(w)|.
///
/// Returns +∞ exactly at the critical point w = 0, λ²η = Ω_S/2.
pub fn vartheta(params: &ModelParams, omega: f64) -> f64 {
    let (num, den) = coupling_ratio(params);
    vartheta_from_ratio(poly_eval(&num, omega) / poly_eval(&den, omega))
}

fn vartheta_from_ratio(x: f64) -> f64 {
    if x == 1.0 {
        f64::INFINITY
    } else if x < 1.0 {
        -0.5 * (-x).ln_1p()
    } else {
        -0.5 * (x - 1.0).ln()
    }
}

struct Vartheta {
    num: Vec<f64>,
    den: Vec<f64>,
    radius: f64,
}

impl Vartheta {
    fn new(params: &ModelParams) -> Self {
        let (num, den) = coupling_ratio(params);
        let f = params.characteristic_polynomial();
        let radius = root_bound(&[f[3], f[2], f[1], f[0]])
            .max(params.omega_s)
            .max(params.gamma());
        Self { num, den, radius }
    }
}

impl Summand for Vartheta {
    fn value(&self, w: f64) -> f64 {
        vartheta_from_ratio(poly_eval(&self.num, w) / poly_eval(&self.den, w))
    }

    fn asymptotic(&self, order: usize) -> Series {
        rational_expansion(&self.num, &self.den, order)
            .ln_one_minus()
            .scale(-0.5)
    }

    fn radius(&self) -> f64 {
        self.radius
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        })
    }
}

fn check_not_critical(params: &ModelParams) -> Result<()> {
    let gap = params.omega_s - 2.0 * params.effective_eta();
    if gap.abs() <= 1e-14 * params.omega_s {
        return Err(Error::CriticalPoint(
            "free-energy spectral function diverges at zero frequency (eta = omega_s/2)".into(),
        ));
    }
    Ok(())
}

/// A_hyb = −(1/β)ϑ(0) − (2/β)Σ_{n≥1} ϑ(ϖ_n).
pub fn hybridization_free_energy_spectral(params: &ModelParams, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    check_not_critical(params)?;
    if params.effective_eta() == 0.0 {
        return Ok(0.0);
    }
    let summand = Vartheta::new(params);
    let zero = summand.value(0.0);
    let sum = sum_positive(&summand, params.beta, tol)?;
    Ok(-(zero + 2.0 * sum.value) / params.beta)
}

/// ∫₀¹ dμ μ φ̃_E(iw) χ̃(iw; μ) by adaptive quadrature.
pub fn coupling_integral(params: &ModelParams, w: f64, tol: f64) -> Result<f64> {
    let o = params.omega_s;
    let phi = 2.0 * params.effective_eta() * params.gamma() / (params.gamma() + w);
    let base = o * o + w * w;
    let r = integrate(|mu| mu * o * phi / (base - o * mu * mu * phi), 0.0, 1.0, 1e-300, tol)?;
    Ok(r.value)
}

const QUADRATURE_LEVELS: usize = 4;
const QUADRATURE_MAX_BASE: usize = 1 << 14;

/// A_hyb from the coupling-constant integral, summed over Matsubara
/// frequencies with Richardson extrapolation in the cutoff N.
///
/// Independent of the spectral route: it uses neither ϑ in closed form
/// nor the asymptotic tail sums.
pub fn hybridization_free_energy_quadrature(params: &ModelParams, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if 2.0 * params.effective_eta() >= params.omega_s {
        return Err(Error::StabilityViolation {
            eta_eff: params.effective_eta(),
            half_omega: 0.5 * params.omega_s,
        });
    }
    if params.effective_eta() == 0.0 {
        return Ok(0.0);
    }
    let beta = params.beta;
    let scale = params.omega_s.max(params.gamma());
    let spacing = matsubara_frequency(1, beta);
    let mut base = ((4.0 * scale / spacing).ceil() as usize).max(32);
    let inner_tol = (tol * 1e-4).max(1e-14);
    let zero = coupling_integral(params, 0.0, inner_tol)?;
    let mut partial = Vec::new();
    let mut achieved = f64::INFINITY;
    let mut done = 0usize;
    let mut running = 0.0;
    while base <= QUADRATURE_MAX_BASE {
        partial.clear();
        let mut n_max = base;
        for _ in 0..QUADRATURE_LEVELS {
            while done < n_max {
                done += 1;
                running += coupling_integral(params, matsubara_frequency(done as u64, beta), inner_tol)?;
            }
            partial.push(running);
            n_max *= 2;
        }
        // extrapolate S(N) = S + c2/N² + c3/N³ + c4/N⁴ over N, 2N, 4N, 8N
        let mut table = partial.clone();
        for (level, p) in (2..=QUADRATURE_LEVELS as i32).enumerate() {
            let factor = 2f64.powi(p);
            for i in (level + 1..QUADRATURE_LEVELS).rev() {
                table[i] = (factor * table[i] - table[i - 1]) / (factor - 1.0);
            }
        }
        let value = -(zero + 2.0 * table[QUADRATURE_LEVELS - 1]) / beta;
        let previous = -(zero + 2.0 * table[QUADRATURE_LEVELS - 2]) / beta;
        achieved = (value - previous).abs();
        if achieved <= tol * value.abs() {
            return Ok(value);
        }
        base *= 2;
        done = 0;
        running = 0.0;
    }
    Err(Error::ToleranceNotReached {
        requested: tol,
        achieved,
        terms: base,
    })
}

/// ⟨q̂²⟩ under the λ-augmented Hamiltonian that includes the counter-term
/// λ²η q̂², whose response denominator is Ω² + w² + 2λ²ηΩ − λ²Ωφ̃_E(iw).
pub fn augmented_coordinate_variance(params: &ModelParams, lambda: f64, tol: f64) -> Result<f64> {
    let (w, g, beta) = (params.omega_s, params.gamma(), params.beta);
    let eta = lambda * lambda * params.effective_eta();
    let free = 0.5 / (0.5 * beta * w).tanh();
    if eta == 0.0 {
        return Ok(free);
    }
    // denominator w³ + γw² + (Ω² + 2ηΩ)w + Ω²γ, times (w² + Ω²)
    let cubic = [w * w * g, w * w + 2.0 * eta * w, g, 1.0];
    let den = poly_mul(&cubic, &[w * w, 0.0, 1.0]);
    let sum = sum_positive(&Rational::new(vec![0.0, -2.0 * eta * w * w], den), beta, tol)?;
    Ok(free + 2.0 / beta * sum.value)
}

/// A_hyb^re = 2∫₀¹ dλ λη⟨q̂²⟩_λ with the counter-term included.
pub fn hybridization_free_energy_reorg(params: &ModelParams, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let eta = params.effective_eta();
    if eta == 0.0 {
        return Ok(0.0);
    }
    let inner = (tol * 1e-3).max(1e-13);
    let failure = std::cell::Cell::new(None);
    let r = integrate(
        |l| match augmented_coordinate_variance(params, l, inner) {
            Ok(v) => 2.0 * l * eta * v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        },
        0.0,
        1.0,
        1e-300,
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r?.value)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalReference {
    pub z: f64,
    pub ln_z: f64,
    pub a_beta: f64,
    pub e_beta: f64,
    pub s_beta: f64,
}

/// Bare oscillator at inverse temperature β, in a form safe for large βΩ_S.
pub fn canonical_reference(beta: f64, omega_s: f64) -> Result<CanonicalReference> {
    if !(beta > 0.0) || !(omega_s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("beta and omega_s must be positive, got {beta}, {omega_s}"),
        });
    }
    let x = 0.5 * beta * omega_s;
    let ln_z = -x - (-(-2.0 * x).exp()).ln_1p();
    let n = bose_occupation(beta, omega_s);
    Ok(CanonicalReference {
        z: ln_z.exp(),
        ln_z,
        a_beta: -ln_z / beta,
        e_beta: omega_s * (0.5 + n),
        s_beta: bose_entropy(n),
    })
}

pub const DEFAULT_STEP: f64 = 1e-4;
const DERIVATIVE_TOL: f64 = 1e-13;

/// Central difference of `f` at `x` with relative step `h`, one Richardson level.
fn derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) || h >= 0.5 {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("relative step must lie in (0, 0.5), got {h}"),
        });
    }
    let central = |step: f64| -> Result<f64> {
        let d = x * step;
        if d == 0.0 || x + d == x {
            return Err(Error::Differentiation {
                estimate: f64::INFINITY,
            });
        }
        Ok((f(x + d)? - f(x - d)?) / (2.0 * d))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let value = (4.0 * fine - coarse) / 3.0;
    let estimate = (value - fine).abs();
    if !value.is_finite() {
        return Err(Error::Differentiation { estimate });
    }
    Ok((value, estimate))
}

/// E_S = −∂_β ln𝒵_S = E_β + ∂_β(βA_hyb).
pub fn internal_energy(params: &ModelParams, h: f64) -> Result<f64> {
    let reference = canonical_reference(params.beta, params.omega_s)?;
    if params.effective_eta() == 0.0 {
        return Ok(reference.e_beta);
    }
    let (d, _) = derivative(
        |b| Ok(b * hybridization_free_energy_spectral(&params.with_beta(b), DERIVATIVE_TOL)?),
        params.beta,
        h,
    )?;
    Ok(reference.e_beta + d)
}

/// S_therm = −∂A_therm/∂T = S_β − ∂A_hyb/∂T.
pub fn thermodynamic_entropy(params: &ModelParams, h: f64) -> Result<f64> {
    let reference = canonical_reference(params.beta, params.omega_s)?;
    if params.effective_eta() == 0.0 {
        return Ok(reference.s_beta);
    }
    let (d, _) = derivative(
        |t| hybridization_free_energy_spectral(&params.with_beta(1.0 / t), DERIVATIVE_TOL),
        1.0 / params.beta,
        h,
    )?;
    Ok(reference.s_beta - d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoReport {
    pub a_hyb: f64,
    pub a_beta: f64,
    pub a_therm: f64,
    pub e_s: f64,
    pub s_therm: f64,
    pub s_ent: f64,
    pub s_beta: f64,
    /// ⟨H_S^⋆⟩ of the mean-force Hamiltonian that reproduces ρ_S and 𝒵_S.
    pub mean_h_star: f64,
    /// (Ω_eff/2)(var_q + var_p), the symmetric-oscillator estimate.
    pub mean_h_star_symmetric: f64,
    /// ℰ = T(S_therm − S_ent).
    pub subdivision: f64,
    /// ℰ = E_S − ⟨H_S^⋆⟩.
    pub subdivision_energy_route: f64,
    pub route_disagreement: f64,
    pub equilibrium: EquilibriumState,
}

pub fn subdivision_potential(params: &ModelParams) -> Result<ThermoReport> {
    subdivision_potential_with_step(params, DEFAULT_STEP)
}

pub fn subdivision_potential_with_step(params: &ModelParams, h: f64) -> Result<ThermoReport> {
    let eq = equilibrium_variances(params, DERIVATIVE_TOL)?;
    let beta = params.beta;
    let reference = canonical_reference(beta, params.omega_s)?;
    let a_hyb = hybridization_free_energy_spectral(params, DERIVATIVE_TOL)?;
    let a_therm = reference.a_beta + a_hyb;
    let e_s = internal_energy(params, h)?;
    let s_therm = thermodynamic_entropy(params, h)?;
    let s_ent = entanglement_entropy(&eq)?;

    // ρ_S = e^{−βH*}/𝒵_S with H* = (Ω_eff/2)(κp̂² + q̂²/κ) + c, c fixed by 𝒵_S
    let x = 0.5 * beta * eq.omega_eff;
    let ln_2sinh = x + (-(-2.0 * x).exp()).ln_1p();
    let mean_h_star = eq.omega_eff * eq.nu + a_therm - ln_2sinh / beta;
    let mean_h_star_symmetric = 0.5 * eq.omega_eff * (eq.var_q + eq.var_p);

    let subdivision = (s_therm - s_ent) / beta;
    let subdivision_energy_route = e_s - mean_h_star;
    Ok(ThermoReport {
        a_hyb,
        a_beta: reference.a_beta,
        a_therm,
        e_s,
        s_therm,
        s_ent,
        s_beta: reference.s_beta,
        mean_h_star,
        mean_h_star_symmetric,
        subdivision,
        subdivision_energy_route,
        route_disagreement: (subdivision - subdivision_energy_route).abs(),
        equilibrium: eq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(eta: f64, gamma: f64, beta: f64) -> ModelParams {
        ModelParams::drude(1.0, beta, eta, gamma).unwrap()
    }

    #[test]
    fn vartheta_limits() {
        let p = params(0.3, 2.0, 5.0);
        assert_relative_eq!(vartheta(&p, 0.0), 0.5 * (1.0f64 / 0.4).ln(), max_relative = 1e-14);
        assert_eq!(vartheta(&params(0.0, 2.0, 5.0), 3.0), 0.0);
        assert_eq!(vartheta(&params(0.5, 2.0, 5.0), 0.0), f64::INFINITY);
        for &w in &[1e3, 1e4] {
            assert_relative_eq!(vartheta(&p, w), 0.3 * 2.0 / (w * w * w), max_relative = 3.0 / w);
        }
    }

    #[test]
    fn coupling_integral_is_vartheta() {
        let p = params(0.45, 2.0, 5.0);
        for &w in &[0.0, 1.2566, 6.3] {
            assert_relative_eq!(
                coupling_integral(&p, w, 1e-13).unwrap(),
                vartheta(&p, w),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn free_limit_is_exact() {
        let p = params(0.0, 2.0, 5.0);
        let r = subdivision_potential(&p).unwrap();
        assert_eq!(r.a_hyb, 0.0);
        assert_eq!(r.subdivision, 0.0);
        assert_eq!(r.s_therm, r.s_beta);
        assert_eq!(r.s_ent, r.s_beta);
    }

    #[test]
    fn spectral_and_quadrature_agree() {
        let p = params(0.2, 2.0, 5.0);
        let a = hybridization_free_energy_spectral(&p, 1e-12).unwrap();
        let b = hybridization_free_energy_quadrature(&p, 1e-9).unwrap();
        assert!(a < 0.0);
        assert_relative_eq!(a, b, max_relative = 1e-7);
    }

    #[test]
    fn canonical_reference_values() {
        let r = canonical_reference(10.0, 1.0).unwrap();
        let z = (-5.0f64).exp() / (1.0 - (-10.0f64).exp());
        assert_relative_eq!(r.z, z, max_relative = 1e-14);
        assert!(canonical_reference(1e4, 1.0).unwrap().s_beta < 1e-300);
        let s1 = 0.5 / 0.5f64.tanh() - (2.0 * 0.5f64.sinh()).ln();
        assert_relative_eq!(canonical_reference(1.0, 1.0).unwrap().s_beta, s1, max_relative = 1e-14);
    }

    #[test]
    fn reorganization_route_is_positive() {
        let v = hybridization_free_energy_reorg(&params(0.3, 2.0, 5.0), 1e-10).unwrap();
        assert!(v > 0.0);
    }

    #[test]
    fn routes_agree() {
        let r = subdivision_potential(&params(0.3, 2.0, 5.0)).unwrap();
        assert!(r.route_disagreement < 1e-6, "{r:?}");
        assert!(r.subdivision < 0.0);
    }
}
