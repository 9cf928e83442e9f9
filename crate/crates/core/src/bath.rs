//! Drude bath: response transform, reorganization energy and the
//! exponential decomposition of the bath correlation function.
//!
//! Conventions: φ̃_E(ω) = ∫₀^∞ e^{iωt} φ_E(t) dt, so the Drude form
//! φ_E(t) = 2ηγ e^{−γt} gives φ̃_E(ω) = 2ηγ/(γ − iω) and φ̃_E(0) = 2η.
//! The variant ηγ/(γ − iω) that also circulates is inconsistent with
//! η ≡ φ̃_E(0)/2 and is not used.

use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;
use num_complex::Complex64;
use std::f64::consts::PI;

const POLE_TOL: f64 = 1e-12;

/// Interface for bath response functions; only the Drude form is shipped.
pub trait SpectralFunction {
    /// φ̃_E(ω) at a complex frequency (real-frequency convention).
    fn response(&self, omega: Complex64) -> Result<Complex64>;
    /// φ̃_E(iw) for real w, which is real.
    fn response_imaginary_axis(&self, w: f64) -> Result<f64>;
    /// J(ω) = Im φ̃_E(ω) on the real axis.
    fn spectral_density(&self, omega: f64) -> f64;
    /// η = φ̃_E(0)/2.
    fn reorganization_energy(&self) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrudeBath {
    eta: f64,
    gamma: f64,
}

impl DrudeBath {
    pub fn new(eta: f64, gamma: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("must be finite and >= 0, got {eta}"),
            });
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("must be finite and > 0, got {gamma}"),
            });
        }
        Ok(Self { eta, gamma })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same cutoff, reorganization energy multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            eta: self.eta * factor,
            gamma: self.gamma,
        }
    }
}

impl SpectralFunction for DrudeBath {
    fn response(&self, omega: Complex64) -> Result<Complex64> {
        let den = Complex64::new(self.gamma, 0.0) - Complex64::i() * omega;
        if den.norm() < POLE_TOL * self.gamma {
            return Err(Error::Pole(format!(
                "Drude response has a pole at omega = -i*gamma = -{}i",
                self.gamma
            )));
        }
        Ok(2.0 * self.eta * (Complex64::new(self.gamma, 0.0) / den))
    }

    fn response_imaginary_axis(&self, w: f64) -> Result<f64> {
        let den = self.gamma + w;
        if den.abs() < POLE_TOL * self.gamma {
            return Err(Error::Pole(format!(
                "Drude response on the imaginary axis has a pole at w = -gamma = -{}",
                self.gamma
            )));
        }
        Ok(2.0 * self.eta * (self.gamma / den))
    }

    fn spectral_density(&self, omega: f64) -> f64 {
        2.0 * self.eta * self.gamma * omega / (self.gamma * self.gamma + omega * omega)
    }

    fn reorganization_energy(&self) -> f64 {
        self.eta
    }
}

/// φ̃_E(ω) for a complex frequency argument.
pub fn phi_tilde<B: SpectralFunction>(bath: &B, omega: Complex64) -> Result<Complex64> {
    bath.response(omega)
}

/// φ̃_E(iw) on the imaginary axis.
pub fn phi_tilde_imag<B: SpectralFunction>(bath: &B, w: f64) -> Result<f64> {
    bath.response_imaginary_axis(w)
}

/// φ̃_E(0)/2, computed from the response rather than read from the field.
pub fn reorganization_energy<B: SpectralFunction>(bath: &B) -> f64 {
    bath.response(Complex64::new(0.0, 0.0))
        .map(|z| 0.5 * z.re)
        .unwrap_or(f64::NAN)
}

/// One exponential component c·e^{−νt} of the bath correlation function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathMode {
    pub amplitude: Complex64,
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeCount {
    /// Add Matsubara modes until |c_k|/ν_k < 1e−10 of the running sum.
    Adaptive,
    /// Total number of modes, Drude mode included (≥ 1).
    Fixed(usize),
}

/// C(t) = ⟨F̂_E(t)F̂_E(0)⟩_E ≈ Σ_k c_k e^{−ν_k t} for t ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct MatsubaraExpansion {
    /// Mode 0 is the Drude pole (ν_0 = γ); mode k ≥ 1 has ν_k = 2πk/β.
    pub modes: Vec<BathMode>,
    pub beta: f64,
    pub n_matsubara: usize,
    /// Σ_{k>n_matsubara} Re c_k/ν_k: weight of the dropped modes, which act
    /// on slow system dynamics like white noise 2·tail_weight·δ(τ).
    pub tail_weight: f64,
    pub warnings: Vec<String>,
}

impl MatsubaraExpansion {
    pub fn correlation(&self, t: f64) -> Complex64 {
        self.modes.iter().map(|m| m.amplitude * (-m.rate * t).exp()).sum()
    }

    pub fn real_correlation(&self, t: f64) -> f64 {
        self.correlation(t).re
    }
}

const ADAPTIVE_REL: f64 = 1e-10;
const ADAPTIVE_CAP: usize = 2_000_000;

/// Exponential decomposition of the Drude correlation function from the
/// residues of coth(βω/2)·J(ω) in the upper half plane:
/// c_0 = ηγ[cot(βγ/2) − i], c_k = (4ηγ/β)·ϖ_k/(ϖ_k² − γ²).
pub fn correlation_modes(bath: &DrudeBath, beta: f64, count: ModeCount) -> Result<MatsubaraExpansion> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    let (eta, gamma) = (bath.eta, bath.gamma);
    let ratio = beta * gamma / (2.0 * PI);
    let nearest = ratio.round();
    if nearest >= 1.0 && (ratio - nearest).abs() < 1e-9 * nearest {
        return Err(Error::PoleCollision { k: nearest as u64 });
    }

    let matsubara_amplitude = |k: usize| {
        let w = 2.0 * PI * k as f64 / beta;
        4.0 * eta * gamma * w / (beta * (w * w - gamma * gamma))
    };

    let c0 = Complex64::new(eta * gamma / (0.5 * beta * gamma).tan(), -eta * gamma);
    let mut modes = vec![BathMode {
        amplitude: c0,
        rate: gamma,
    }];
    let mut warnings = Vec::new();

    match count {
        ModeCount::Fixed(0) => {
            return Err(Error::InvalidParameter {
                name: "n_modes",
                reason: "at least one mode is required".into(),
            })
        }
        ModeCount::Fixed(n) => {
            let head: f64 = c0.norm() / gamma;
            let mut running = head;
            for k in 1..n {
                let c = matsubara_amplitude(k);
                let w = 2.0 * PI * k as f64 / beta;
                running += c.abs() / w;
                modes.push(BathMode {
                    amplitude: Complex64::new(c, 0.0),
                    rate: w,
                });
            }
            let dropped = tail_weight(eta, gamma, beta, n - 1).abs();
            if eta > 0.0 && dropped > ADAPTIVE_REL * running {
                warnings.push(format!(
                    "{n} modes leave a tail weight {dropped:e} (relative {:e}); increase n_modes",
                    dropped / running
                ));
            }
        }
        ModeCount::Adaptive => {
            let mut running = c0.norm() / gamma;
            if eta > 0.0 {
                let mut k = 1;
                loop {
                    let c = matsubara_amplitude(k);
                    let w = 2.0 * PI * k as f64 / beta;
                    let weight = c.abs() / w;
                    modes.push(BathMode {
                        amplitude: Complex64::new(c, 0.0),
                        rate: w,
                    });
                    running += weight;
                    // only stop once past the Drude pole, where |c_k| starts decreasing
                    if w > gamma && weight < ADAPTIVE_REL * running {
                        break;
                    }
                    if k >= ADAPTIVE_CAP {
                        warnings.push(format!(
                            "adaptive mode search stopped at the cap of {ADAPTIVE_CAP} modes"
                        ));
                        break;
                    }
                    k += 1;
                }
            }
        }
    }
    let n_matsubara = modes.len() - 1;
    Ok(MatsubaraExpansion {
        tail_weight: tail_weight(eta, gamma, beta, n_matsubara),
        modes,
        beta,
        n_matsubara,
        warnings,
    })
}

/// Σ_{k>kept} Re c_k/ν_k = (ηγβ/π²) Σ_{k>kept} 1/(k² − a²), a = βγ/2π.
fn tail_weight(eta: f64, gamma: f64, beta: f64, kept: usize) -> f64 {
    if eta == 0.0 {
        return 0.0;
    }
    let a = beta * gamma / (2.0 * PI);
    let prefactor = eta * gamma * beta / (PI * PI);
    let start = kept as f64 + 1.0;
    let sum = if a / start < 0.5 {
        // 1/(k²−a²) = Σ_m a^{2m}/k^{2m+2}
        let mut acc = 0.0;
        let mut a2m = 1.0;
        for m in 0..60u32 {
            let term = a2m * hurwitz_zeta(2 * m + 2, start);
            acc += term;
            if term.abs() < 1e-17 * acc.abs() {
                break;
            }
            a2m *= a * a;
        }
        acc
    } else {
        // Σ_{k≥1} 1/(k²−a²) = (1 − πa·cot(πa))/(2a²), minus the kept part
        let total = (1.0 - PI * a / (PI * a).tan()) / (2.0 * a * a);
        let head: f64 = (1..=kept).map(|k| 1.0 / ((k * k) as f64 - a * a)).sum();
        total - head
    };
    prefactor * sum
}
