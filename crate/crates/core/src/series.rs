//! Truncated power series and small polynomial helpers used to build
//! large-frequency expansions of Matsubara summands.

/// Power series Σ c_m u^m truncated at a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order + 1],
        }
    }

    /// Series of a polynomial given in ascending powers, truncated at `order`.
    pub fn from_coeffs(coeffs: &[f64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (dst, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scale(mut self, c: f64) -> Self {
        self.coeffs.iter_mut().for_each(|x| *x *= c);
        self
    }

    /// Multiply by u^k.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        for m in k..=self.order() {
            out.coeffs[m] = self.coeffs[m - k];
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (dst, &c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *dst += c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for i in 0..=order {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..=(order - i) {
                out.coeffs[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        out
    }

    /// self / den; `den` must have a nonzero constant term.
    pub fn div(&self, den: &Self) -> Self {
        let order = self.order().min(den.order());
        let d0 = den.coeffs[0];
        assert!(d0 != 0.0, "series division by a series with zero constant term");
        let mut out = Self::zero(order);
        for m in 0..=order {
            let mut acc = self.coeffs[m];
            for k in 1..=m {
                acc -= den.coeffs[k] * out.coeffs[m - k];
            }
            out.coeffs[m] = acc / d0;
        }
        out
    }

    /// ln(1 − x) for a series x with zero constant term.
    pub fn ln_one_minus(&self) -> Self {
        assert!(self.coeffs[0] == 0.0, "ln(1 - x) needs x(0) = 0");
        let mut out = Self::zero(self.order());
        let mut power = self.clone();
        for k in 1..=self.order() {
            if power.coeffs.iter().all(|&c| c == 0.0) {
                break;
            }
            out = out.add(&power.clone().scale(-1.0 / k as f64));
            power = power.mul(self);
        }
        out
    }
}

/// Horner evaluation of an ascending-coefficient polynomial.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Degree of an ascending-coefficient polynomial (trailing zeros ignored).
pub fn poly_degree(coeffs: &[f64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0.0)
}

/// Fujiwara bound: every root z of the polynomial satisfies |z| <= bound.
pub fn root_bound(coeffs: &[f64]) -> f64 {
    let Some(n) = poly_degree(coeffs) else {
        return 0.0;
    };
    let lead = coeffs[n];
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let c = (coeffs[n - k] / lead).abs();
        let term = if k == n {
            (c / 2.0).powf(1.0 / k as f64)
        } else {
            c.powf(1.0 / k as f64)
        };
        bound = bound.max(term);
    }
    2.0 * bound
}

/// Expansion of a rational function in powers of u = 1/w around w = ∞.
pub fn rational_expansion(num: &[f64], den: &[f64], order: usize) -> Series {
    let Some(p) = poly_degree(num) else {
        return Series::zero(order);
    };
    let q = poly_degree(den).expect("denominator must be nonzero");
    assert!(q >= p, "rational_expansion needs deg num <= deg den");
    // num(w) = w^p N(u), den(w) = w^q D(u) with N, D the reversed coefficient lists
    let n_rev: Vec<f64> = (0..=p).map(|i| num[p - i]).collect();
    let d_rev: Vec<f64> = (0..=q).map(|i| den[q - i]).collect();
    Series::from_coeffs(&n_rev, order)
        .div(&Series::from_coeffs(&d_rev, order))
        .shift(q - p)
}
