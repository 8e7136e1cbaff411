use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use wgamma::rational::to_f64;
use wgamma::support::{support_edges, support_intervals};
use wgamma::transforms::{
    atom_mass, cauchy_transform, density, mgf_series, mgf_series_exact, mp_density, numeric_moment,
    DensityCurve,
};
use wgamma::Params;

fn params(m: f64, n: f64) -> Params {
    Params::new(m, n).unwrap()
}

/// Cauchy transform of Marchenko–Pastur with `t = 1`, branch decaying at infinity.
fn mp1_cauchy(xi: Complex64) -> Complex64 {
    let root = (xi * xi - 4.0 * xi).sqrt();
    let candidates = [(xi - root) / (2.0 * xi), (xi + root) / (2.0 * xi)];
    *candidates
        .iter()
        .min_by(|a, b| a.im.total_cmp(&b.im))
        .unwrap()
}

#[test]
fn matches_closed_form_mp1_transform() {
    for (re, im) in [
        (2.0, 0.5),
        (-3.0, 1.0),
        (5.0, 1e-3),
        (0.5, 10.0),
        (1.0, 1e-6),
    ] {
        let xi = Complex64::new(re, im);
        let g = cauchy_transform(params(1.0, 1.0), xi).unwrap();
        assert!(
            (g - mp1_cauchy(xi)).norm() < 1e-9,
            "ξ={xi}: {g} vs {}",
            mp1_cauchy(xi)
        );
    }
}

#[test]
fn float_series_tracks_exact_series() {
    let exact = mgf_series_exact(
        &BigRational::from_integer(BigInt::from(2)),
        &BigRational::from_integer(BigInt::from(3)),
        20,
    )
    .unwrap();
    let float = mgf_series(params(2.0, 3.0), 20).unwrap();
    for (e, f) in exact.iter().zip(&float) {
        let e = to_f64(e);
        assert!((e - f).abs() <= 1e-12 * e.abs());
    }
}

#[test]
fn catalan_series_at_one_one() {
    let s = mgf_series(params(1.0, 1.0), 8).unwrap();
    assert_eq!(
        s,
        vec![1.0, 1.0, 2.0, 5.0, 14.0, 42.0, 132.0, 429.0, 1430.0]
    );
}

#[test]
fn continuous_mass_below_one() {
    for (m, n) in [(0.25, 2.0), (0.1, 1.0), (0.5, 1.5), (0.2, 4.0)] {
        let curve = DensityCurve::compute(params(m, n), 64).unwrap();
        let mass = curve.continuous_mass().unwrap();
        assert!((mass - m * n).abs() < 1e-4, "({m},{n}): {mass}");
        assert!((atom_mass(params(m, n)) - (1.0 - m * n)).abs() < 1e-15);
    }
}

#[test]
fn mp_edges_interior_agreement() {
    for t in [0.5f64, 1.0, 4.0, 9.0] {
        let (lo, hi) = ((t.sqrt() - 1.0).powi(2), (t.sqrt() + 1.0).powi(2));
        for i in 0..400 {
            let x = lo + 1e-3 + (hi - lo - 2e-3) * i as f64 / 399.0;
            assert!((density(params(t, 1.0), x) - mp_density(t, x).unwrap()).abs() < 1e-6);
        }
    }
}

#[test]
fn inverse_square_root_edge_is_integrable() {
    // mn = 1 puts a 1/√x edge at the origin
    let curve = DensityCurve::compute(params(0.5, 2.0), 32).unwrap();
    assert!((numeric_moment(&curve, 0).unwrap() - 1.0).abs() < 1e-6);
    assert!((numeric_moment(&curve, 2).unwrap() - 1.25).abs() < 1e-6);
    assert!(density(params(0.5, 2.0), 1e-10) > 1e3);
}

#[test]
fn curve_is_zero_outside_hull() {
    for (m, n) in [(1.0, 1.0), (2.0, 3.0), (8.0, 2.0), (1.0, 1.2)] {
        let curve = DensityCurve::compute(params(m, n), 512).unwrap();
        let edges = curve.support_edges();
        let (lo, hi) = (edges[0], edges[edges.len() - 1]);
        for &(x, rho) in curve.grid() {
            assert!(rho >= 0.0);
            if x < lo - 1e-9 || x > hi + 1e-9 {
                assert_eq!(rho, 0.0, "({m},{n}) x={x}");
            }
        }
    }
}

#[test]
fn density_positive_inside_support_intervals() {
    for (m, n) in [(1.0, 1.2), (2.0, 3.0), (10.0, 1.5), (2.2, 1.002)] {
        let p = params(m, n);
        for (a, b) in support_intervals(p).unwrap() {
            assert!(density(p, 0.5 * (a + b)) > 0.0, "({m},{n}) on [{a},{b}]");
        }
        let edges = support_edges(p).unwrap();
        assert_eq!(density(p, edges[0] - 1.0), 0.0);
        assert_eq!(density(p, edges[edges.len() - 1] + 1.0), 0.0);
    }
}

fn param_strategy() -> impl Strategy<Value = Params> {
    (0.0f64..10.0, 1.0f64..6.0).prop_map(|(m, n)| params(m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn herglotz(p in param_strategy(), re in -50.0f64..80.0, log_im in -6.0f64..3.0) {
        let xi = Complex64::new(re, 10f64.powf(log_im));
        let g = cauchy_transform(p, xi).unwrap();
        prop_assert!(g.im < 0.0, "G({xi}) = {g}");
    }
}

proptest! {
    #[test]
    fn far_field_asymptotics(p in param_strategy(), re in -1e3f64..1e3) {
        let xi = Complex64::new(re, 1e6);
        let g = cauchy_transform(p, xi).unwrap();
        prop_assert!((g * xi - 1.0).norm() < 1e-5);
    }

    #[test]
    fn branch_consistency(p in param_strategy(), u in 0.0f64..1.0) {
        let edges = support_edges(p).unwrap();
        let (lo, hi) = (edges[0], edges[edges.len() - 1]);
        let x = lo - 0.1 + (hi - lo + 0.2) * u;
        let rho = density(p, x);
        prop_assert!(rho >= 0.0);
        for eps in [1e-4, 1e-6, 1e-8] {
            // the atom's own Poisson kernel is not part of the density
            let xi = Complex64::new(x, eps);
            let g = cauchy_transform(p, xi).unwrap() - atom_mass(p) / xi;
            let approx = -g.im / PI;
            prop_assert!((approx - rho).abs() <= 10.0 * eps.sqrt(), "x={x} ε={eps}: {approx} vs {rho}");
        }
    }

    #[test]
    fn rational_params_reject_large_order(order in 65usize..200) {
        prop_assert!(mgf_series(params(1.0, 1.0), order).is_err());
    }
}
