//! Monte Carlo sampling of `m·W^Γ` for complex Wishart `W`.
//!
//! Each sample draws its own ChaCha stream, so results depend only on the
//! seed and the sample index, never on scheduling.

mod io;
mod report;

pub use io::{
    default_bin_edges, histogram, read_spectra_csv, write_histogram_csv, write_spectra_csv,
    HistogramBin, SpectraMeta,
};
pub use report::{
    bootstrap_standard_error, compare_report, compare_samples, m2_deviation, m2_deviation_of,
    CompareReport, CompareRow, M2Deviation, SmallestSummary,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Default bound on `d·n`, the size of the sampled matrices.
pub const DEFAULT_SIZE_CAP: usize = 4096;
/// Bound on the number of entries of one Gaussian draw.
pub const MAX_GAUSSIAN_ENTRIES: usize = 1 << 24;
pub const MAX_EMPIRICAL_ORDER: usize = 8;

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WishartConfig {
    d: usize,
    n: usize,
    m: usize,
    seed: u64,
}

impl WishartConfig {
    pub fn new(d: usize, n: usize, m: usize, seed: u64) -> Result<Self> {
        Self::with_cap(d, n, m, seed, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(d: usize, n: usize, m: usize, seed: u64, cap: usize) -> Result<Self> {
        if d == 0 || n == 0 || m == 0 {
            return Err(Error::domain(format!(
                "d, n and m must be positive, got d={d}, n={n}, m={m}"
            )));
        }
        match d.checked_mul(n) {
            Some(size) if size <= cap => Ok(WishartConfig { d, n, m, seed }),
            _ => Err(Error::domain(format!(
                "d·n = {d}·{n} exceeds the size cap {cap}"
            ))),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn size(&self) -> usize {
        self.d * self.n
    }

    /// Generator for sample `index`: the seed selects the key, the index
    /// the stream.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

fn standard_normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    // Box–Muller; 1 − u keeps the logarithm finite
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// `rows × cols` matrix of independent complex Gaussians with
/// `E|G_ij|² = 1`, filled row by row.
pub fn sample_gaussian_matrix(rows: usize, cols: usize, rng: &mut impl RngCore) -> Result<CMatrix> {
    match rows.checked_mul(cols) {
        Some(len) if len <= MAX_GAUSSIAN_ENTRIES => {}
        _ => {
            return Err(Error::domain(format!(
                "{rows}×{cols} Gaussian matrix exceeds {MAX_GAUSSIAN_ENTRIES} entries"
            )))
        }
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            let (x, y) = standard_normal_pair(rng);
            Complex64::new(x * scale, y * scale)
        })
        .collect();
    Ok(CMatrix::from_row_slice(rows, cols, &data))
}

/// `W = GG*/(dm)` for a `dn × dm` Gaussian `G`.
pub fn wishart(config: &WishartConfig, rng: &mut impl RngCore) -> Result<CMatrix> {
    let g = sample_gaussian_matrix(config.d * config.n, config.d * config.m, rng)?;
    let mut w = &g * g.adjoint();
    w /= Complex64::new((config.d * config.m) as f64, 0.0);
    Ok(w)
}

/// Transposes each `n × n` block: `W^Γ[(i·n + a, j·n + b)] = W[(i·n + b, j·n + a)]`.
pub fn partial_transpose(w: &CMatrix, d: usize, n: usize) -> Result<CMatrix> {
    let size = d * n;
    if w.nrows() != size || w.ncols() != size {
        return Err(Error::domain(format!(
            "matrix is {}×{}, expected {size}×{size} for d={d}, n={n}",
            w.nrows(),
            w.ncols()
        )));
    }
    Ok(CMatrix::from_fn(size, size, |r, c| {
        let (i, a) = (r / n, r % n);
        let (j, b) = (c / n, c % n);
        w[(i * n + b, j * n + a)]
    }))
}

fn max_abs(h: &CMatrix) -> f64 {
    h.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn spectrum(h: &CMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::domain("spectrum needs a square matrix"));
    }
    let size = h.nrows();
    let scale = max_abs(h);
    for r in 0..size {
        for c in r..size {
            if (h[(r, c)] - h[(c, r)].conj()).norm() > HERMITIAN_TOL * scale {
                return Err(Error::domain(format!(
                    "matrix is not Hermitian at ({r}, {c})"
                )));
            }
        }
    }
    let mut values: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::internal("eigensolver produced non-finite values"));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub config: WishartConfig,
    pub index: u64,
    /// Eigenvalues of `m·W^Γ`, ascending.
    pub eigenvalues: Vec<f64>,
    pub smallest: f64,
    /// Normalized trace `tr(W)/(dn)` of the underlying Wishart matrix.
    pub normalized_trace: f64,
}

pub fn sample_spectrum(config: &WishartConfig, index: u64) -> Result<SpectrumSample> {
    let mut rng = config.rng(index);
    let w = wishart(config, &mut rng)?;
    let mut h = partial_transpose(&w, config.d, config.n)?;
    h *= Complex64::new(config.m as f64, 0.0);
    let eigenvalues = spectrum(&h)?;
    let normalized_trace = w.trace().re / config.size() as f64;
    Ok(SpectrumSample {
        config: *config,
        index,
        smallest: eigenvalues[0],
        eigenvalues,
        normalized_trace,
    })
}

/// Samples `0..num_samples` in parallel, returned in index order.
pub fn sample_spectra(config: &WishartConfig, num_samples: usize) -> Result<Vec<SpectrumSample>> {
    (0..num_samples as u64)
        .into_par_iter()
        .map(|i| sample_spectrum(config, i))
        .collect()
}

/// `(dn)⁻¹ Σ λ^p` for `p = 1..=p_max`.
pub fn empirical_moments(sample: &SpectrumSample, p_max: usize) -> Result<Vec<f64>> {
    if p_max > MAX_EMPIRICAL_ORDER {
        return Err(Error::domain(format!(
            "p_max {p_max} exceeds {MAX_EMPIRICAL_ORDER}"
        )));
    }
    let mut sums = vec![0.0; p_max];
    for &lambda in &sample.eigenvalues {
        let mut power = 1.0;
        for s in sums.iter_mut() {
            power *= lambda;
            *s += power;
        }
    }
    let size = sample.eigenvalues.len() as f64;
    Ok(sums.into_iter().map(|s| s / size).collect())
}
