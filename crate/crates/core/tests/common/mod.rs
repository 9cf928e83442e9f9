//! Independent numerical tools for the integration tests. Nothing here
//! calls into the library's own summation or root-finding code.
#![allow(dead_code)]

use nalgebra::Matrix3;
use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ψ(z) by upward recurrence and the Stirling-type series.
pub fn digamma(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 20.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let series =
        inv2 * (-1.0 / 12.0 + inv2 * (1.0 / 120.0 + inv2 * (-1.0 / 252.0 + inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + z.ln() - 0.5 / z + series
}

/// Roots of w³ + c2 w² + c1 w + c0 as eigenvalues of the companion matrix.
pub fn companion_roots(c2: f64, c1: f64, c0: f64) -> Vec<Complex64> {
    let m = Matrix3::new(0.0, 0.0, -c0, 1.0, 0.0, -c1, 0.0, 1.0, -c2);
    m.complex_eigenvalues().iter().copied().collect()
}

/// Σ_{n≥1} P(hn)/f(hn) for monic cubic f with simple roots and deg P ≤ 1,
/// through partial fractions and ψ.
pub fn digamma_sum(p: impl Fn(Complex64) -> Complex64, roots: &[Complex64], h: f64) -> f64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &r) in roots.iter().enumerate() {
        let mut df = Complex64::new(1.0, 0.0);
        for (j, &s) in roots.iter().enumerate() {
            if j != k {
                df *= r - s;
            }
        }
        let a = p(r) / df;
        total -= a * digamma(1.0 - r / h);
    }
    (total / h).re
}

/// Gauss–Legendre 20-point rule on [a, b], composite over `panels`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 10] = [
        0.076_526_521_133_497_33,
        0.227_785_851_141_645_07,
        0.373_706_088_715_419_56,
        0.510_867_001_950_827_1,
        0.636_053_680_726_515,
        0.746_331_906_460_150_8,
        0.839_116_971_822_218_8,
        0.912_234_428_251_326,
        0.963_971_927_277_913_8,
        0.993_128_599_185_094_9,
    ];
    const W: [f64; 10] = [
        0.152_753_387_130_725_85,
        0.149_172_986_472_603_75,
        0.142_096_109_318_382_05,
        0.131_688_638_449_176_63,
        0.118_194_531_961_518_42,
        0.101_930_119_817_240_43,
        0.083_276_741_576_704_75,
        0.062_672_048_334_109_06,
        0.040_601_429_800_386_94,
        0.017_614_007_139_152_12,
    ];
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let (mid, half) = (lo + 0.5 * width, 0.5 * width);
        let mut s = 0.0;
        for (x, w) in X.iter().zip(W) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// Wynn's ε algorithm applied to a sequence of partial sums.
pub fn wynn_epsilon(partial: &[f64]) -> f64 {
    let n = partial.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = *partial.last().unwrap();
    let mut column = 0;
    while cur.len() > 1 {
        let next: Vec<f64> = (0..cur.len() - 1)
            .map(|i| {
                let d = cur[i + 1] - cur[i];
                prev[i + 1] + if d == 0.0 { f64::INFINITY } else { 1.0 / d }
            })
            .collect();
        column += 1;
        prev = cur;
        cur = next;
        if column % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

/// ∫₀^∞ g(ω) trig(ωt) dω for slowly decaying g, as an alternating series
/// over half periods beyond `start`, accelerated with Wynn's ε.
pub fn oscillatory_integral<F: Fn(f64) -> f64>(g: F, t: f64, start: f64, cosine: bool) -> f64 {
    let trig = |w: f64| if cosine { (w * t).cos() } else { (w * t).sin() };
    let half = std::f64::consts::PI / t;
    let first = (start / half).ceil().max(1.0) * half;
    let head = gauss_legendre(|w| g(w) * trig(w), 0.0, first, 400);
    let mut partial = Vec::new();
    let mut acc = head;
    for k in 0..40 {
        let a = first + half * k as f64;
        acc += gauss_legendre(|w| g(w) * trig(w), a, a + half, 2);
        partial.push(acc);
    }
    wynn_epsilon(&partial)
}

/// Classic fixed-step RK4 for a 3-component linear system.
pub fn rk4<F: Fn(&[f64; 3]) -> [f64; 3]>(f: F, mut y: [f64; 3], t: f64, steps: usize) -> [f64; 3] {
    let h = t / steps as f64;
    let add = |a: &[f64; 3], b: &[f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, 0.5 * h));
        let k3 = f(&add(&y, &k2, 0.5 * h));
        let k4 = f(&add(&y, &k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}
