mod common;

use common::gauss_legendre;
use meanforce::equilibrium::bose_occupation;
use meanforce::response::ModelParams;
use meanforce::thermo::{
    augmented_coordinate_variance, canonical_reference, coupling_integral, hybridization_free_energy_quadrature,
    hybridization_free_energy_reorg, hybridization_free_energy_spectral, internal_energy, subdivision_potential,
    vartheta,
};
use meanforce::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn params(eta: f64, gamma: f64, beta: f64) -> ModelParams {
    ModelParams::drude(1.0, beta, eta, gamma).unwrap()
}

#[test]
fn coupling_integral_closed_form() {
    for &eta in &[0.05, 0.2, 0.45] {
        let p = params(eta, 2.0, 5.0);
        for &n in &[0u32, 1, 5] {
            let w = 2.0 * PI * n as f64 / 5.0;
            let q = coupling_integral(&p, w, 1e-13).unwrap();
            let closed = vartheta(&p, w);
            assert!((q - closed).abs() < 1e-10 * closed, "eta={eta} n={n}");
        }
    }
}

#[test]
fn vartheta_high_frequency_tail() {
    let p = params(0.3, 2.0, 5.0);
    for &w in &[1e3, 1e4] {
        let lead = 1.0 * 0.3 * 2.0 / (w * w * w);
        let rel = vartheta(&p, w) / lead - 1.0;
        // next order is −γ/w
        assert!(rel.abs() < 2.5 / w, "w={w}: relative deviation {rel:e}");
    }
}

#[test]
fn dual_routes_agree_on_grid() {
    for &eta in &[0.05, 0.2, 0.45] {
        for &beta in &[1.0, 5.0] {
            for &gamma in &[1.0, 2.0, 10.0] {
                let p = params(eta, gamma, beta);
                let a = hybridization_free_energy_spectral(&p, 1e-12).unwrap();
                let b = hybridization_free_energy_quadrature(&p, 1e-9).unwrap();
                assert!(
                    (a / b - 1.0).abs() < 1e-6,
                    "eta={eta} beta={beta} gamma={gamma}: {a} vs {b}"
                );
                assert!(a < 0.0);
            }
        }
    }
}

#[test]
fn critical_coupling_is_an_error() {
    let p = params(0.5, 2.0, 5.0);
    assert!(matches!(
        hybridization_free_energy_spectral(&p, 1e-10),
        Err(Error::CriticalPoint(_))
    ));
    assert!(hybridization_free_energy_quadrature(&p, 1e-10).is_err());
    assert_eq!(vartheta(&p, 0.0), f64::INFINITY);
}

#[test]
fn free_energy_diverges_toward_critical_coupling() {
    let a = |eta| hybridization_free_energy_spectral(&params(eta, 2.0, 5.0), 1e-10).unwrap();
    assert!(a(0.499_999) < a(0.49) && a(0.49) < a(0.4));
    // dominated by −ϑ(0)/β
    let near = params(0.5 - 1e-9, 2.0, 5.0);
    let lead = -vartheta(&near, 0.0) / 5.0;
    let full = hybridization_free_energy_spectral(&near, 1e-10).unwrap();
    assert!(full < lead * 0.9);
}

#[test]
fn canonical_reference_against_level_sum() {
    for &x in &[1.0, 0.3, 4.0] {
        let r = canonical_reference(x, 1.0).unwrap();
        let levels: Vec<f64> = (0..60).map(|n| (-x * (n as f64 + 0.5)).exp()).collect();
        let z: f64 = levels.iter().sum();
        let e: f64 = levels
            .iter()
            .enumerate()
            .map(|(n, w)| (n as f64 + 0.5) * w)
            .sum::<f64>()
            / z;
        let s = x * e + z.ln();
        let tol = if x < 0.5 { 1e-6 } else { 1e-12 };
        assert!((r.s_beta - s).abs() < tol, "x={x}: {} vs {s}", r.s_beta);
        assert!((r.z - z).abs() < tol * z);
    }
    assert!((canonical_reference(1.0, 1.0).unwrap().s_beta - 1.040_651_852_256_408).abs() < 1e-14);
    assert!(canonical_reference(800.0, 1.0).unwrap().s_beta.abs() < 1e-300);
    assert!(canonical_reference(800.0, 1.0).unwrap().a_beta.is_finite());
}

#[test]
fn internal_energy_limits() {
    let e = internal_energy(&params(0.0, 2.0, 5.0), 1e-4).unwrap();
    assert!((e - 0.5 / (2.5f64).tanh()).abs() < 1e-15);
    let hot = internal_energy(&params(0.0, 2.0, 1e-3), 1e-4).unwrap();
    assert!((hot * 1e-3 - 1.0).abs() < 1e-6);
}

#[test]
fn energy_equals_mean_force_energy_plus_entropy_excess() {
    let r = subdivision_potential(&params(0.3, 2.0, 5.0)).unwrap();
    let rhs = r.mean_h_star + (r.s_therm - r.s_ent) / 5.0;
    assert!((r.e_s - rhs).abs() < 1e-6);
    assert!((r.a_therm - r.a_beta - r.a_hyb).abs() < 1e-15);
}

#[test]
fn entropy_excess_limits() {
    // finite as T → 0, vanishing as T → ∞
    let cold = subdivision_potential(&params(0.3, 2.0, 200.0)).unwrap();
    let colder = subdivision_potential(&params(0.3, 2.0, 400.0)).unwrap();
    let d_cold = cold.s_therm - cold.s_ent;
    let d_colder = colder.s_therm - colder.s_ent;
    assert!(d_cold.is_finite() && d_cold < 0.0);
    assert!((d_cold / d_colder - 1.0).abs() < 0.05);
    let hot = subdivision_potential(&params(0.3, 2.0, 0.05)).unwrap();
    assert!((hot.s_therm - hot.s_ent).abs() < 0.1 * d_cold.abs());
}

/// ⟨q̂²⟩_λ with the counter-term, from a direct quadrature of the
/// Matsubara sum's λ-integrand using composite Gauss–Legendre.
#[test]
fn reorganization_route_self_convergence() {
    let p = params(0.3, 2.0, 5.0);
    let fine = hybridization_free_energy_reorg(&p, 1e-12).unwrap();
    let eta = 0.3;
    let coarse = gauss_legendre(
        |l| 2.0 * l * eta * augmented_coordinate_variance(&p, l, 1e-12).unwrap(),
        0.0,
        1.0,
        4,
    );
    assert!((fine - coarse).abs() < 1e-8, "{fine} vs {coarse}");
    assert!(fine > 0.0);
    // λ = 0 gives the bare variance; the counter-term keeps ⟨q̂²⟩ bounded at λ = 1
    let bare = augmented_coordinate_variance(&p, 0.0, 1e-12).unwrap();
    assert!((bare - 0.5 / 2.5f64.tanh()).abs() < 1e-15);
    assert!(augmented_coordinate_variance(&params(5.0, 2.0, 5.0), 1.0, 1e-10).unwrap() > 0.0);
}

#[test]
fn zero_coupling_report() {
    for &beta in &[0.5, 5.0, 20.0] {
        let r = subdivision_potential(&params(0.0, 2.0, beta)).unwrap();
        assert_eq!(r.a_hyb, 0.0);
        assert_eq!(r.subdivision, 0.0);
        assert!(r.subdivision_energy_route.abs() < 1e-15);
        assert_eq!(r.s_therm, r.s_beta);
        assert_eq!(r.s_ent, r.s_beta);
        let n = bose_occupation(beta, 1.0);
        assert!((r.e_s - (0.5 + n)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hybridization_free_energy_is_negative(eta in 1e-3..0.499f64, gamma in 0.2..10.0f64, beta in 0.2..30.0f64, w in 0.0..100.0f64) {
        let p = params(eta, gamma, beta);
        prop_assert!(vartheta(&p, w) > 0.0);
        prop_assert!(hybridization_free_energy_spectral(&p, 1e-10).unwrap() < 0.0);
    }

    #[test]
    fn reorganization_route_is_positive(eta in 1e-3..3.0f64, gamma in 0.5..5.0f64, beta in 0.5..10.0f64) {
        prop_assert!(hybridization_free_energy_reorg(&params(eta, gamma, beta), 1e-8).unwrap() > 0.0);
    }

    #[test]
    fn routes_for_subdivision_agree(eta in 0.01..0.48f64, t in 0.02..5.0f64) {
        let r = subdivision_potential(&params(eta, 2.0, 1.0 / t)).unwrap();
        prop_assert!(r.route_disagreement < 1e-6 * r.subdivision.abs().max(1.0));
        prop_assert!(r.subdivision <= 0.0);
    }
}
