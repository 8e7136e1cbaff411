use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wgamma::rmt::{
    compare_report, empirical_moments, partial_transpose, sample_gaussian_matrix, sample_spectra,
    sample_spectrum, spectrum, wishart, CMatrix, WishartConfig,
};

fn random_hermitian(size: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = sample_gaussian_matrix(size, size, &mut rng).unwrap();
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues through the real embedding `[[A, −B], [B, A]]`, each doubled.
fn embedded_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let k = h.nrows();
    let real = DMatrix::<f64>::from_fn(2 * k, 2 * k, |r, c| {
        let z = h[(r % k, c % k)];
        match (r < k, c < k) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut values: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values.into_iter().step_by(2).collect()
}

#[test]
fn spectrum_matches_real_embedding() {
    for (size, seed) in [(1, 1), (5, 2), (40, 3), (97, 4)] {
        let h = random_hermitian(size, seed);
        let ours = spectrum(&h).unwrap();
        let oracle = embedded_eigenvalues(&h);
        let norm = ours.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-10 * norm, "{a} vs {b}");
        }
    }
}

#[test]
fn eigenpair_residuals() {
    let h = random_hermitian(60, 8);
    let eig = h.clone().symmetric_eigen();
    let values = spectrum(&h).unwrap();
    let norm = h.norm();
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let residual = (&h * v - v * Complex64::new(*lambda, 0.0)).norm();
        assert!(residual <= 1e-8 * norm);
        assert!(values.iter().any(|x| (x - lambda).abs() <= 1e-10 * norm));
    }
}

#[test]
fn wishart_is_psd_and_normalized() {
    let config = WishartConfig::new(20, 3, 2, 42).unwrap();
    let mut trace = 0.0;
    for i in 0..20 {
        let w = wishart(&config, &mut config.rng(i)).unwrap();
        assert!(spectrum(&w).unwrap()[0] >= -1e-12);
        trace += w.trace().re / config.size() as f64;
    }
    assert!((trace / 20.0 - 1.0).abs() < 0.02);
}

#[test]
fn sum_of_eigenvalues_is_m_times_trace() {
    let config = WishartConfig::new(15, 2, 3, 1).unwrap();
    for s in sample_spectra(&config, 4).unwrap() {
        let mean: f64 = s.eigenvalues.iter().sum::<f64>() / s.eigenvalues.len() as f64;
        let want = config.m() as f64 * s.normalized_trace;
        assert!((mean - want).abs() <= 1e-8 * want.abs());
    }
}

#[test]
fn single_block_transpose_keeps_spectrum() {
    let config = WishartConfig::new(1, 12, 2, 5).unwrap();
    let w = wishart(&config, &mut config.rng(0)).unwrap();
    let a = spectrum(&w).unwrap();
    let b = spectrum(&partial_transpose(&w, 1, 12).unwrap()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn samples_do_not_depend_on_thread_count() {
    let config = WishartConfig::new(10, 2, 1, 99).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_spectra(&config, 6).unwrap())
    };
    assert_eq!(run(1), run(3));
    assert_eq!(sample_spectrum(&config, 4).unwrap(), run(2)[4]);
    assert_ne!(run(1)[0].eigenvalues, run(1)[1].eigenvalues);
}

#[test]
fn first_moment_is_unbiased() {
    let config = WishartConfig::new(30, 2, 3, 17).unwrap();
    let report = compare_report(&config, 50, 1).unwrap();
    assert!(report.rows[0].z.abs() <= 3.0, "{:?}", report.rows[0]);
}

#[test]
fn catalan_third_moment() {
    let config = WishartConfig::new(200, 1, 1, 3).unwrap();
    let report = compare_report(&config, 30, 3).unwrap();
    assert_eq!(report.rows[2].analytic, 5.0);
    assert!(report.rows[2].z.abs() <= 4.0, "{:?}", report.rows[2]);
    let s = sample_spectrum(&config, 0).unwrap();
    assert_eq!(empirical_moments(&s, 3).unwrap().len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn partial_transpose_properties(d in 1usize..5, n in 1usize..5, seed in any::<u64>()) {
        let size = d * n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_gaussian_matrix(size, size, &mut rng).unwrap();
        let pt = partial_transpose(&a, d, n).unwrap();
        prop_assert_eq!(partial_transpose(&pt, d, n).unwrap(), a.clone());
        prop_assert_eq!(pt.trace(), a.trace());
        let h = &a + a.adjoint();
        let ht = partial_transpose(&h, d, n).unwrap();
        prop_assert_eq!(ht.adjoint(), ht.clone());
        // linearity
        let b = sample_gaussian_matrix(size, size, &mut rng).unwrap();
        let lhs = partial_transpose(&(&a + &b * Complex64::new(2.0, -1.0)), d, n).unwrap();
        let rhs = &pt + partial_transpose(&b, d, n).unwrap() * Complex64::new(2.0, -1.0);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn gaussian_draws_are_reproducible(rows in 1usize..20, cols in 1usize..20, seed in any::<u64>()) {
        let a = sample_gaussian_matrix(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = sample_gaussian_matrix(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
