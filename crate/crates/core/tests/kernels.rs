mod support;

use polaron_core::numerics::dawson_sine;
use polaron_core::{
    build_kernel_table, effective_hopping_ratio, kernel_cos, kernel_sin, BathModel, QuadratureSpec, TimeGrid,
};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn origin_matches_dawson_identity_on_parameter_grid() {
    for &lambda in &[0.1, 1.0, 5.0] {
        for &s in &[0.1, 1.0, 10.0, 100.0] {
            let m = BathModel::new(lambda, s).unwrap();
            let k0 = kernel_cos(0.0, &m, &spec()).unwrap();
            let want = lambda * 2.0 * (0.5 - dawson_sine(s) / s);
            assert!((k0 - want).abs() <= 1e-8, "lambda={lambda} s={s}: {k0} vs {want}");
        }
    }
}

#[test]
fn sine_kernel_golden_value() {
    let m = BathModel::new(1.0, 1.0).unwrap();
    let got = kernel_sin(1.0, &m, &spec()).unwrap();
    let want = 0.5 * std::f64::consts::PI.sqrt() * ((-0.25f64).exp() - 1.0 + (-1.0f64).exp());
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    // 30-digit quadrature reference
    assert!((got - 0.129_991_964_155_459_57).abs() < 1e-12);
}

#[test]
fn table_agrees_with_closed_form() {
    let m = BathModel::new(1.0, 10.0).unwrap();
    let grid = TimeGrid::new(50.0, 0.25).unwrap();
    let t = build_kernel_table(&m, &grid, &spec()).unwrap();
    for (k, &tau) in grid.points().iter().enumerate() {
        assert!((t.k_cos[k] - support::k_cos(1.0, 10.0, tau)).abs() < 1e-10, "tau={tau}");
        assert!((t.k_sin[k] - support::k_sin(1.0, 10.0, tau)).abs() < 1e-10, "tau={tau}");
    }
}

#[test]
fn omega_c_rescales_time_and_energy() {
    // K(τ; Ω, s) = Ω² K(Ωτ; 1, Ωs)
    let scaled = BathModel {
        omega_c: 2.0,
        s: 1.5,
        ..BathModel::default()
    };
    let unit = BathModel::new(1.0, 3.0).unwrap();
    let a = kernel_cos(0.7, &scaled, &spec()).unwrap();
    let b = kernel_cos(1.4, &unit, &spec()).unwrap();
    assert!((a - 4.0 * b).abs() < 1e-10);
    let r = effective_hopping_ratio(&scaled);
    assert!((r - (-2.0 * kernel_cos(0.0, &unit, &spec()).unwrap()).exp()).abs() < 1e-10);
}

#[test]
fn geometry_factor_multiplies_coupling() {
    let g = BathModel {
        geometry_factor: 3.0,
        ..BathModel::new(0.5, 2.0).unwrap()
    };
    let plain = BathModel::new(1.5, 2.0).unwrap();
    assert_eq!(
        kernel_cos(1.1, &g, &spec()).unwrap(),
        kernel_cos(1.1, &plain, &spec()).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_match_closed_form(lambda in 0.05f64..5.0, s in 0.05f64..100.0, tau in 0.0f64..60.0) {
        let m = BathModel::new(lambda, s).unwrap();
        let c = kernel_cos(tau, &m, &spec()).unwrap();
        let sn = kernel_sin(tau, &m, &spec()).unwrap();
        prop_assert!((c - support::k_cos(lambda, s, tau)).abs() < 1e-9 * lambda.max(1.0));
        prop_assert!((sn - support::k_sin(lambda, s, tau)).abs() < 1e-9 * lambda.max(1.0));
    }

    #[test]
    fn kernel_cos_peaks_at_origin(lambda in 0.05f64..5.0, s in 0.05f64..50.0, tau in 0.0f64..60.0) {
        let m = BathModel::new(lambda, s).unwrap();
        let k0 = kernel_cos(0.0, &m, &spec()).unwrap();
        prop_assert!(k0 >= 0.0);
        prop_assert!(kernel_cos(tau, &m, &spec()).unwrap().abs() <= k0 + 1e-12);
    }

    #[test]
    fn hopping_ratio_in_unit_interval(lambda in 0.0f64..10.0, s in 0.0f64..1e4) {
        let r = effective_hopping_ratio(&BathModel::new(lambda, s).unwrap());
        prop_assert!(r > 0.0 && r <= 1.0);
    }

    #[test]
    fn hopping_ratio_monotone(lambda in 0.01f64..5.0, s in 0.01f64..100.0, dl in 0.01f64..1.0, ds in 0.01f64..10.0) {
        let r = |l: f64, s: f64| effective_hopping_ratio(&BathModel::new(l, s).unwrap());
        prop_assert!(r(lambda + dl, s) < r(lambda, s));
        prop_assert!(r(lambda, s + ds) < r(lambda, s));
    }
}
