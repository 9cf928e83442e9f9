//! Least-squares fits used to read rates off trajectories.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Domain("linear fit needs two or more paired points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::Domain("linear fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Exponential rate of |values| from a fit of ln|v| against t.
pub fn growth_rate(times: &[f64], values: &[f64]) -> Result<LinearFit> {
    if values.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return Err(Error::Domain("growth rate needs finite nonzero values".into()));
    }
    let logs: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    linear_fit(times, &logs)
}
