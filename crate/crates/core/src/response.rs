//! Response function of the damped oscillator, the roots of its
//! characteristic cubic and the time-domain propagator.
//!
//! With the Drude kernel the Laplace transform of the coordinate
//! propagator is χ̃(is)/Ω_S = (s + γ)/f(s), where
//! f(s) = s³ + γs² + Ω_S²s + (Ω_S − 2λ²η)γΩ_S.

use crate::bath::{DrudeBath, SpectralFunction};
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega_s: f64,
    pub beta: f64,
    pub bath: DrudeBath,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(omega_s: f64, beta: f64, bath: DrudeBath) -> Result<Self> {
        Self::with_lambda(omega_s, beta, bath, 1.0)
    }

    pub fn with_lambda(omega_s: f64, beta: f64, bath: DrudeBath, lambda: f64) -> Result<Self> {
        if !(omega_s > 0.0) || !omega_s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega_s",
                reason: format!("must be positive and finite, got {omega_s}"),
            });
        }
        if !(beta > 0.0) || beta.is_nan() {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be positive, got {beta}"),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must lie in [0, 1], got {lambda}"),
            });
        }
        Ok(Self {
            omega_s,
            beta,
            bath,
            lambda,
        })
    }

    /// Convenience constructor for the Drude model with λ = 1.
    pub fn drude(omega_s: f64, beta: f64, eta: f64, gamma: f64) -> Result<Self> {
        Self::new(omega_s, beta, DrudeBath::new(eta, gamma)?)
    }

    pub fn eta(&self) -> f64 {
        self.bath.eta()
    }

    pub fn gamma(&self) -> f64 {
        self.bath.gamma()
    }

    /// λ²η, the reorganization energy seen by the system.
    pub fn effective_eta(&self) -> f64 {
        self.lambda * self.lambda * self.bath.eta()
    }

    /// The same model with λ folded into the bath (λ = 1, η → λ²η).
    pub fn folded(&self) -> Self {
        Self {
            bath: self.bath.scaled(self.lambda * self.lambda),
            lambda: 1.0,
            ..*self
        }
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self { beta, ..*self }
    }

    /// Descending coefficients of f(s).
    pub fn characteristic_polynomial(&self) -> [f64; 4] {
        let (w, g) = (self.omega_s, self.gamma());
        [1.0, g, w * w, (w - 2.0 * self.effective_eta()) * g * w]
    }
}

const POLE_TOL: f64 = 1e-14;

/// χ̃(ω) = Ω_S / (Ω_S² − ω² − Ω_S λ² φ̃_E(ω)).
pub fn chi_tilde(params: &ModelParams, omega: Complex64) -> Result<Complex64> {
    let w = params.omega_s;
    let phi = params.bath.response(omega)?;
    let den = w * w - omega * omega - w * params.lambda * params.lambda * phi;
    if den.norm() <= POLE_TOL * w * w {
        return Err(Error::Pole(format!("response function diverges at omega = {omega}")));
    }
    Ok(w / den)
}

/// χ̃(iw) for real w, a real number.
pub fn chi_tilde_imag(params: &ModelParams, w: f64) -> Result<f64> {
    let o = params.omega_s;
    let phi = params.bath.response_imaginary_axis(w)?;
    let den = o * o + w * w - o * params.lambda * params.lambda * phi;
    if den.abs() <= POLE_TOL * o * o {
        return Err(Error::Pole(format!("response function diverges at omega = {w}i")));
    }
    Ok(o / den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    /// Sorted by decreasing real part, then decreasing imaginary part.
    pub roots: [Complex64; 3],
    /// Some pair coincides within 1e−7·max|s|; such pairs are merged.
    pub degenerate: bool,
}

impl CubicRoots {
    pub fn max_real_part(&self) -> f64 {
        self.roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

const DEGENERACY: f64 = 1e-7;

pub fn characteristic_roots(params: &ModelParams) -> CubicRoots {
    let [_, a, b, c] = params.characteristic_polynomial();
    solve_monic_cubic(a, b, c)
}

/// Roots of s³ + a s² + b s + c.
pub fn solve_monic_cubic(a: f64, b: f64, c: f64) -> CubicRoots {
    let shift = a / 3.0;
    let p = b - a * shift;
    let q = 2.0 * shift * shift * shift - b * shift + c;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    let mut roots = if disc > 0.0 {
        let u = (-half_q - half_q.signum() * disc.sqrt()).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - third_p / u };
        let r = polish_real(t - shift, a, b, c);
        // deflate: s³ + as² + bs + c = (s − r)(s² + e1 s + e0)
        let e1 = a + r;
        let e0 = if r.abs() > 1.0 && r.abs() * r.abs() > b.abs() {
            -c / r
        } else {
            b + r * e1
        };
        let half = -0.5 * e1;
        let d = half * half - e0;
        if d >= 0.0 {
            let sq = d.sqrt();
            let big = half + half.signum() * sq;
            let other = if big != 0.0 { e0 / big } else { half - sq };
            [
                Complex64::new(r, 0.0),
                Complex64::new(polish_real(big, a, b, c), 0.0),
                Complex64::new(polish_real(other, a, b, c), 0.0),
            ]
        } else {
            let z = polish_complex(Complex64::new(half, (-d).sqrt()), a, b, c);
            let z = Complex64::new(z.re, z.im.abs());
            [Complex64::new(r, 0.0), z, z.conj()]
        }
    } else if p == 0.0 {
        let r = Complex64::new(-shift, 0.0);
        [r, r, r]
    } else {
        let m = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *slot = Complex64::new(polish_real(t - shift, a, b, c), 0.0);
        }
        out
    };

    roots.sort_by(|x, y| {
        y.re.partial_cmp(&x.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y.im.partial_cmp(&x.im).unwrap_or(std::cmp::Ordering::Equal))
    });

    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let close = |x: Complex64, y: Complex64| (x - y).norm() < DEGENERACY * scale;
    let mut degenerate = false;
    if close(roots[0], roots[1]) && close(roots[1], roots[2]) {
        let m = Complex64::new(-shift, 0.0);
        roots = [m, m, m];
        degenerate = true;
    } else {
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            if close(roots[i], roots[j]) {
                let m = 0.5 * (roots[i] + roots[j]);
                // a merged pair of a real cubic is real
                let m = Complex64::new(m.re, 0.0);
                roots[i] = m;
                roots[j] = m;
                degenerate = true;
                break;
            }
        }
    }
    CubicRoots { roots, degenerate }
}

fn cubic(s: Complex64, a: f64, b: f64, c: f64) -> (Complex64, Complex64) {
    let f = ((s + a) * s + b) * s + c;
    let df = (3.0 * s + 2.0 * a) * s + b;
    (f, df)
}

fn polish_real(x: f64, a: f64, b: f64, c: f64) -> f64 {
    polish_complex(Complex64::new(x, 0.0), a, b, c).re
}

fn polish_complex(mut s: Complex64, a: f64, b: f64, c: f64) -> Complex64 {
    for _ in 0..2 {
        let (f, df) = cubic(s, a, b, c);
        if df.norm() == 0.0 {
            break;
        }
        let next = s - f / df;
        if cubic(next, a, b, c).0.norm() < f.norm() {
            s = next;
        } else {
            break;
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator {
    pub g: f64,
    pub g_dot: f64,
    pub g_ddot: f64,
    /// Repeated roots were present and the confluent formula was used.
    pub confluent: bool,
}

/// G(t) with Laplace transform (s + γ)/f(s), and its first two derivatives.
///
/// Σ_k h(s_k)/f′(s_k) is the second divided difference of h over the
/// roots, which stays finite when roots merge; here
/// h(s) = s^m (s + γ) e^{st} for the m-th derivative.
pub fn propagator(params: &ModelParams, t: f64) -> Result<Propagator> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("propagator requires t >= 0, got {t}")));
    }
    let roots = characteristic_roots(params);
    Ok(propagator_from_roots(&roots, params.gamma(), t))
}

pub fn propagator_from_roots(roots: &CubicRoots, gamma: f64, t: f64) -> Propagator {
    let [x, y, z] = roots.roots;
    let eval = |m: u32| divided_difference(x, y, z, |s, d| h_derivative(s, d, m, gamma, t)).re;
    Propagator {
        g: eval(0),
        g_dot: eval(1),
        g_ddot: eval(2),
        confluent: roots.degenerate,
    }
}

/// d-th derivative of s^m (s + γ) e^{st}.
fn h_derivative(s: Complex64, d: u32, m: u32, gamma: f64, t: f64) -> Complex64 {
    // polynomial P(s) = s^m (s + γ), ascending coefficients
    let mut poly = vec![0.0; m as usize + 2];
    poly[m as usize] = gamma;
    poly[m as usize + 1] = 1.0;
    let eval = |coeffs: &[f64]| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    };
    let deriv = |coeffs: &[f64]| -> Vec<f64> { coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect() };
    let p0 = eval(&poly);
    let p1_coeffs = deriv(&poly);
    let p1 = eval(&p1_coeffs);
    let p2 = eval(&deriv(&p1_coeffs));
    let e = (s * t).exp();
    match d {
        0 => p0 * e,
        1 => (p1 + t * p0) * e,
        _ => (p2 + 2.0 * t * p1 + t * t * p0) * e,
    }
}

/// h[x, y, z] with exact coincidences treated confluently.
fn divided_difference<F: Fn(Complex64, u32) -> Complex64>(x: Complex64, y: Complex64, z: Complex64, h: F) -> Complex64 {
    let first = |a: Complex64, b: Complex64| {
        if a == b {
            h(a, 1)
        } else {
            (h(a, 0) - h(b, 0)) / (a - b)
        }
    };
    if x == y && y == z {
        return 0.5 * h(x, 2);
    }
    // order so that the outer pair differs
    let (a, b, c) = if x != z { (x, y, z) } else { (x, z, y) };
    (first(a, b) - first(b, c)) / (a - c)
}
