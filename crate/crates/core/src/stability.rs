//! Routh–Hurwitz test for real polynomials and the stability
//! classification of the Drude-coupled oscillator.

use crate::error::{Error, Result};
use crate::response::{characteristic_roots, ModelParams};
use std::fmt;

/// Default width of the critical band, relative to Ω_S.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RouthArray {
    /// All roots in the open left half plane.
    pub pass: bool,
    /// First column, with ε in place of isolated zero pivots.
    pub first_column: Vec<f64>,
    /// A zero pivot or a zero row appeared: roots on or symmetric about
    /// the imaginary axis are possible.
    pub marginal: bool,
    /// Sign changes in the first column (= right-half-plane roots when
    /// not marginal).
    pub sign_changes: usize,
    pub notes: Vec<String>,
}

/// Builds the Routh array for coefficients in descending powers.
pub fn routh_hurwitz(coefficients: &[f64]) -> Result<RouthArray> {
    if coefficients.len() < 2 {
        return Err(Error::Domain("Routh array needs degree >= 1".into()));
    }
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("polynomial coefficients must be finite".into()));
    }
    if coefficients[0] == 0.0 {
        return Err(Error::Domain("leading coefficient must be nonzero".into()));
    }
    let sign = coefficients[0].signum();
    let coeffs: Vec<f64> = coefficients.iter().map(|c| c * sign).collect();
    let degree = coeffs.len() - 1;
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let eps = 1e-10 * scale;
    let width = degree / 2 + 1;

    let row_from = |start: usize| -> Vec<f64> {
        let mut r: Vec<f64> = coeffs.iter().skip(start).step_by(2).copied().collect();
        r.resize(width, 0.0);
        r
    };
    let mut rows = vec![row_from(0), row_from(1)];
    let mut marginal = false;
    let mut notes = Vec::new();

    for i in 1..=degree {
        let zero_tol = 1e-14 * scale;
        if rows[i].iter().all(|v| v.abs() <= zero_tol) {
            // auxiliary polynomial of the row above, differentiated
            let order = degree + 1 - i;
            let above = rows[i - 1].clone();
            for (j, slot) in rows[i].iter_mut().enumerate() {
                *slot = above[j] * (order as f64 - 2.0 * j as f64).max(0.0);
            }
            marginal = true;
            notes.push(format!(
                "zero row at s^{}: replaced by derivative of the auxiliary polynomial",
                degree - i
            ));
        }
        if rows[i][0].abs() <= zero_tol {
            rows[i][0] = eps;
            marginal = true;
            notes.push(format!("zero pivot at s^{}: substituted epsilon", degree - i));
        }
        if i == degree {
            break;
        }
        let (prev, cur) = (&rows[i - 1], &rows[i]);
        let mut next = vec![0.0; width];
        for j in 0..width - 1 {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        rows.push(next);
    }

    let first_column: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let sign_changes = first_column.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    let pass = !marginal && first_column.iter().all(|&v| v > 0.0);
    Ok(RouthArray {
        pass,
        first_column,
        marginal,
        sign_changes,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Stable,
    Critical,
    Unstable,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Stable => "stable",
            Self::Critical => "critical",
            Self::Unstable => "unstable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub classification: Classification,
    /// χ̃(0+) = 1/(Ω_S − 2λ²η); infinite at the critical point.
    pub chi_static: f64,
    pub hurwitz_pass: bool,
    pub routh_first_column: Vec<f64>,
    pub max_real_root: f64,
}

pub fn classify(params: &ModelParams, tol: f64) -> Result<StabilityReport> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let w = params.omega_s;
    let eta = params.effective_eta();
    let gap = w - 2.0 * eta;
    let chi_static = if gap == 0.0 { f64::INFINITY } else { 1.0 / gap };
    let routh = routh_hurwitz(&params.characteristic_polynomial())?;
    let max_real_root = characteristic_roots(params).max_real_part();

    let classification = if gap.abs() < tol * w || eta < tol * w {
        Classification::Critical
    } else {
        let static_ok = chi_static > 0.0;
        if static_ok != routh.pass {
            return Err(Error::InvariantViolation(format!(
                "static response test ({static_ok}) disagrees with Routh-Hurwitz ({}) at eta = {eta}",
                routh.pass
            )));
        }
        if routh.pass {
            Classification::Stable
        } else {
            Classification::Unstable
        }
    };
    Ok(StabilityReport {
        classification,
        chi_static,
        hurwitz_pass: routh.pass,
        routh_first_column: routh.first_column,
        max_real_root,
    })
}
