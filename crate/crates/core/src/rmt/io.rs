use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{SpectrumSample, WishartConfig};
use crate::error::{Error, Result};
use crate::support::support_edges;
use crate::transforms::Params;

/// JSON sidecar stored next to a spectra CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectraMeta {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub num_samples: usize,
}

impl SpectraMeta {
    pub fn new(config: &WishartConfig, num_samples: usize) -> Self {
        SpectraMeta {
            d: config.d(),
            n: config.n(),
            m: config.m(),
            seed: config.seed(),
            num_samples,
        }
    }
}

pub fn write_spectra_csv<W: Write>(samples: &[SpectrumSample], mut out: W) -> Result<()> {
    writeln!(out, "sample_id,index,value")?;
    for s in samples {
        for (i, v) in s.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{i},{v:.16e}", s.index)?;
        }
    }
    Ok(())
}

/// Reads a spectra CSV back into per-sample eigenvalue lists.
pub fn read_spectra_csv<R: BufRead>(input: R) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut out: Vec<(u64, Vec<f64>)> = Vec::new();
    for (line_no, line) in input.lines().enumerate().skip(1) {
        let line = line?;
        let bad = || Error::Parse(format!("bad spectra row {}: {line:?}", line_no + 1));
        let mut cells = line.split(',');
        let id: u64 = cells.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let _index: usize = cells.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let value: f64 = cells.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        match out.last_mut() {
            Some((last, values)) if *last == id => values.push(value),
            _ => out.push((id, vec![value])),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Count normalized so that the bins integrate to the in-range fraction.
    pub density: f64,
}

/// `bins` equal bins spanning the support hull padded by 5% per side.
pub fn default_bin_edges(params: Params, bins: usize) -> Result<Vec<f64>> {
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let edges = support_edges(params)?;
    let (lo, hi) = (edges[0], edges[edges.len() - 1]);
    let pad = 0.05 * (hi - lo).max(f64::EPSILON);
    let (lo, hi) = (lo - pad, hi + pad);
    Ok((0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect())
}

/// Histogram of all eigenvalues of all samples over fixed, increasing edges.
pub fn histogram(samples: &[SpectrumSample], edges: &[f64]) -> Result<Vec<HistogramBin>> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(
            "bin edges must be strictly increasing with at least two entries",
        ));
    }
    let mut counts = vec![0usize; edges.len() - 1];
    let (last, mut total) = (counts.len() - 1, 0usize);
    for v in samples.iter().flat_map(|s| s.eigenvalues.iter()) {
        total += 1;
        // half-open bins, the last one closed
        if *v < edges[0] || *v > edges[last + 1] {
            continue;
        }
        let k = edges
            .partition_point(|e| e <= v)
            .saturating_sub(1)
            .min(last);
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let (lo, hi) = (edges[i], edges[i + 1]);
            let density = if total == 0 {
                0.0
            } else {
                count as f64 / (total as f64 * (hi - lo))
            };
            HistogramBin {
                lo,
                hi,
                count,
                density,
            }
        })
        .collect())
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], mut out: W) -> Result<()> {
    writeln!(out, "bin_lo,bin_hi,count,density")?;
    for b in bins {
        writeln!(
            out,
            "{:.16e},{:.16e},{},{:.16e}",
            b.lo, b.hi, b.count, b.density
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::sample_spectra;

    #[test]
    fn histogram_counts_in_range_values() {
        let config = WishartConfig::new(3, 2, 1, 0).unwrap();
        let mut samples = sample_spectra(&config, 1).unwrap();
        samples[0].eigenvalues = vec![-1.0, 0.0, 0.5, 1.0, 2.0, 9.0];
        let bins = histogram(&samples, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(bins.iter().map(|b| b.count).collect::<Vec<_>>(), vec![2, 2]);
        assert!(histogram(&samples, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn spectra_round_trip() {
        let config = WishartConfig::new(3, 2, 2, 4).unwrap();
        let samples = sample_spectra(&config, 2).unwrap();
        let mut buf = Vec::new();
        write_spectra_csv(&samples, &mut buf).unwrap();
        let back = read_spectra_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].1, samples[1].eigenvalues);
    }
}
