use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    empirical_moments, sample_spectra, SpectrumSample, WishartConfig, MAX_EMPIRICAL_ORDER,
};
use crate::error::{Error, Result};
use crate::nc::moment_enum;
use crate::rational::to_f64;
use crate::support::support_intervals;
use crate::transforms::{atom_mass, Params};

pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Eigenvalues with `|λ|` below this count as near zero.
pub const NEAR_ZERO: f64 = 1e-3;
// stream index reserved for the bootstrap, far from any sample index
const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub p: usize,
    pub analytic: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallestSummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Infimum of the limiting support, zero included when there is an atom.
    pub support_infimum: f64,
    pub mean_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub config: WishartConfig,
    pub num_samples: usize,
    pub rows: Vec<CompareRow>,
    pub smallest: SmallestSummary,
    pub near_zero_fraction: f64,
}

impl CompareReport {
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p,analytic,empirical,std_error,z")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.p, r.analytic, r.empirical, r.std_error, r.z
            )?;
        }
        Ok(())
    }
}

/// Standard deviation of the mean over `resamples` bootstrap draws.
pub fn bootstrap_standard_error(values: &[f64], resamples: usize, rng: &mut impl Rng) -> f64 {
    if values.len() < 2 || resamples < 2 {
        return 0.0;
    }
    let len = values.len();
    let means: Vec<f64> = (0..resamples)
        .map(|_| {
            (0..len)
                .map(|_| values[rng.random_range(0..len)])
                .sum::<f64>()
                / len as f64
        })
        .collect();
    let center = means.iter().sum::<f64>() / resamples as f64;
    let var = means.iter().map(|x| (x - center).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    var.sqrt()
}

fn analytic_moments(config: &WishartConfig, p_max: usize) -> Result<Vec<f64>> {
    let m = BigRational::from_integer(BigInt::from(config.m()));
    let n = BigRational::from_integer(BigInt::from(config.n()));
    (1..=p_max)
        .map(|p| moment_enum(p, &m, &n).map(|v| to_f64(&v)))
        .collect()
}

fn support_infimum(config: &WishartConfig) -> Result<f64> {
    let params = Params::new(config.m() as f64, config.n() as f64)?;
    let lowest = support_intervals(params)?.first().map(|iv| iv.0);
    let atom = atom_mass(params) > 0.0;
    Ok(match (lowest, atom) {
        (Some(x), true) => x.min(0.0),
        (Some(x), false) => x,
        (None, _) => 0.0,
    })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Empirical moments against the exact ones, with bootstrap errors.
pub fn compare_report(
    config: &WishartConfig,
    num_samples: usize,
    p_max: usize,
) -> Result<CompareReport> {
    let samples = sample_spectra(config, num_samples)?;
    compare_samples(config, &samples, p_max)
}

pub fn compare_samples(
    config: &WishartConfig,
    samples: &[SpectrumSample],
    p_max: usize,
) -> Result<CompareReport> {
    if samples.len() < 2 {
        return Err(Error::domain("a comparison needs at least two samples"));
    }
    if p_max == 0 || p_max > MAX_EMPIRICAL_ORDER {
        return Err(Error::domain(format!(
            "p_max must be in 1..={MAX_EMPIRICAL_ORDER}, got {p_max}"
        )));
    }
    let per_sample: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| empirical_moments(s, p_max))
        .collect::<Result<_>>()?;
    let analytic = analytic_moments(config, p_max)?;
    let mut rng = config.rng(BOOTSTRAP_STREAM);
    let rows = (0..p_max)
        .map(|k| {
            let values: Vec<f64> = per_sample.iter().map(|v| v[k]).collect();
            let empirical = mean(&values);
            let std_error = bootstrap_standard_error(&values, BOOTSTRAP_RESAMPLES, &mut rng);
            let diff = empirical - analytic[k];
            let z = if std_error > 0.0 {
                diff / std_error
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            CompareRow {
                p: k + 1,
                analytic: analytic[k],
                empirical,
                std_error,
                z,
            }
        })
        .collect();

    let smallest: Vec<f64> = samples.iter().map(|s| s.smallest).collect();
    let support_infimum = support_infimum(config)?;
    let total: usize = samples.iter().map(|s| s.eigenvalues.len()).sum();
    let near_zero: usize = samples
        .iter()
        .map(|s| s.eigenvalues.iter().filter(|l| l.abs() < NEAR_ZERO).count())
        .sum();
    Ok(CompareReport {
        config: *config,
        num_samples: samples.len(),
        rows,
        smallest: SmallestSummary {
            mean: mean(&smallest),
            min: smallest.iter().copied().fold(f64::INFINITY, f64::min),
            max: smallest.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            support_infimum,
            mean_gap: mean(&smallest) - support_infimum,
        },
        near_zero_fraction: near_zero as f64 / total as f64,
    })
}

/// Finite-size deviation of the second moment at one `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2Deviation {
    pub d: usize,
    /// Average over samples of `|M₂(sample) − M₂|`.
    pub mean_abs_deviation: f64,
    /// `mean_s M₂(sample) − M₂`.
    pub bias: f64,
}

pub fn m2_deviation(config: &WishartConfig, num_samples: usize) -> Result<M2Deviation> {
    let samples = sample_spectra(config, num_samples)?;
    m2_deviation_of(config, &samples)
}

pub fn m2_deviation_of(config: &WishartConfig, samples: &[SpectrumSample]) -> Result<M2Deviation> {
    if samples.is_empty() {
        return Err(Error::domain("no samples"));
    }
    let exact = analytic_moments(config, 2)?[1];
    let values: Vec<f64> = samples
        .iter()
        .map(|s| empirical_moments(s, 2).map(|v| v[1]))
        .collect::<Result<_>>()?;
    Ok(M2Deviation {
        d: config.d(),
        mean_abs_deviation: mean(&values.iter().map(|v| (v - exact).abs()).collect::<Vec<_>>()),
        bias: mean(&values) - exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bootstrap_of_constant_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(bootstrap_standard_error(&[2.0; 10], 100, &mut rng), 0.0);
    }

    #[test]
    fn bootstrap_matches_textbook_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let values: Vec<f64> = (0..400).map(|_| rng.random::<f64>()).collect();
        let se = bootstrap_standard_error(&values, 2000, &mut rng);
        let textbook = (1.0f64 / 12.0 / 400.0).sqrt();
        assert!((se / textbook - 1.0).abs() < 0.15, "{se} vs {textbook}");
    }

    #[test]
    fn infimum_with_atom_and_without() {
        let c = WishartConfig::new(10, 1, 1, 0).unwrap();
        assert!(support_infimum(&c).unwrap().abs() < 1e-9);
        let c = WishartConfig::new(10, 3, 1, 0).unwrap();
        assert!(support_infimum(&c).unwrap() < 0.0);
    }
}
