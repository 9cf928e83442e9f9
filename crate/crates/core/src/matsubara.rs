//! Accelerated sums over bosonic Matsubara frequencies ϖ_n = 2πn/β.
//!
//! A summand g(ϖ) that decays at least like ϖ⁻² is summed exactly up to
//! some N, and the remainder Σ_{n>N} g(ϖ_n) is taken from its large-ϖ
//! expansion g ≈ Σ_m a_m ϖ^{-m}, each power contributing
//! a_m (β/2π)^m ζ(m, N+1). The m = 2 piece is the trigamma tail.

use crate::error::{Error, Result};
use crate::series::{poly_eval, rational_expansion, root_bound, Series};
use crate::special::hurwitz_zeta;
use std::f64::consts::PI;

/// Order of the asymptotic expansion subtracted from the tail.
pub const EXPANSION_ORDER: usize = 16;
/// Hard cap on explicitly summed terms.
pub const MAX_TERMS: usize = 1 << 20;

pub fn matsubara_frequency(n: u64, beta: f64) -> f64 {
    2.0 * PI * n as f64 / beta
}

/// A real function of a non-negative frequency, summed over ϖ_n, n ≥ 1.
pub trait Summand {
    fn value(&self, w: f64) -> f64;
    /// Coefficients a_m of g(w) = Σ_m a_m w^{-m}; a_0 and a_1 must vanish.
    fn asymptotic(&self, order: usize) -> Series;
    /// All singularities of g (in the complex w plane) lie within this radius.
    fn radius(&self) -> f64;
}

/// num(w) / den(w), both in ascending powers of w.
#[derive(Clone, Debug)]
pub struct Rational {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl Rational {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Self {
        Self { num, den }
    }
}

impl Summand for Rational {
    fn value(&self, w: f64) -> f64 {
        poly_eval(&self.num, w) / poly_eval(&self.den, w)
    }

    fn asymptotic(&self, order: usize) -> Series {
        rational_expansion(&self.num, &self.den, order)
    }

    fn radius(&self) -> f64 {
        root_bound(&self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatsubaraSum {
    pub value: f64,
    /// Number of explicitly summed terms.
    pub terms: usize,
    pub error_estimate: f64,
}

/// Σ_{n=1}^∞ g(ϖ_n) to relative tolerance `rel_tol`.
pub fn sum_positive<S: Summand + ?Sized>(summand: &S, beta: f64, rel_tol: f64) -> Result<MatsubaraSum> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    let spacing = 2.0 * PI / beta;
    let coeffs = summand.asymptotic(EXPANSION_ORDER);
    let lead = coeffs.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if coeffs.coeff(0).abs() > 1e-14 * lead || coeffs.coeff(1).abs() > 1e-14 * lead {
        return Err(Error::Domain("Matsubara summand must decay at least like 1/w^2".into()));
    }
    let radius = summand.radius();
    let mut n = ((8.0 * radius / spacing).ceil() as usize).max(16);
    let mut achieved = f64::INFINITY;
    while n <= MAX_TERMS {
        let (head, abs_sum, max_term) = (1..=n).rev().fold((0.0, 0.0, 0.0f64), |(s, a, m), k| {
            let g = summand.value(spacing * k as f64);
            (s + g, a + g.abs(), m.max(g.abs()))
        });
        let a = n as f64 + 1.0;
        let mut tail = 0.0;
        let mut last = [0.0f64; 2];
        for m in 2..=EXPANSION_ORDER {
            let c = coeffs.coeff(m);
            let term = if c == 0.0 {
                0.0
            } else {
                c * spacing.powi(-(m as i32)) * hurwitz_zeta(m as u32, a)
            };
            tail += term;
            last = [last[1], term];
        }
        let value = head + tail;
        let rounding = (n as f64).sqrt() * f64::EPSILON * (abs_sum + max_term);
        let error = last[0].abs() + last[1].abs() + rounding;
        if error <= rel_tol * value.abs() || error == 0.0 {
            return Ok(MatsubaraSum {
                value,
                terms: n,
                error_estimate: error,
            });
        }
        achieved = error / value.abs();
        n *= 2;
    }
    Err(Error::ToleranceNotReached {
        requested: rel_tol,
        achieved,
        terms: MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_oscillator_identity() {
        // 1/β Σ' Ω/(Ω²+ϖ²) = ½ coth(βΩ/2)
        for &beta in &[0.5, 5.0, 20.0] {
            let omega = 1.0;
            let g = Rational::new(vec![omega], vec![omega * omega, 0.0, 1.0]);
            let s = sum_positive(&g, beta, 1e-13).unwrap();
            let total = (1.0 / omega + 2.0 * s.value) / beta;
            let exact = 0.5 / (0.5 * beta * omega).tanh();
            assert!((total - exact).abs() < 1e-13 * exact, "beta={beta}: {total} vs {exact}");
        }
    }

    #[test]
    fn rejects_slow_decay() {
        let g = Rational::new(vec![0.0, 1.0], vec![1.0, 0.0, 1.0]);
        assert!(sum_positive(&g, 1.0, 1e-10).is_err());
    }

    #[test]
    fn zero_summand() {
        let g = Rational::new(vec![0.0], vec![1.0, 0.0, 1.0]);
        let s = sum_positive(&g, 3.0, 1e-10).unwrap();
        assert_eq!(s.value, 0.0);
    }
}
