use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use wgamma::nc::{free_cumulants, moment_enum, moment_from_cumulants, profile_counts, P_MAX};
use wgamma::rational::{parse_rational, to_decimal_string, to_f64};
use wgamma::rmt::{
    compare_report, default_bin_edges, histogram, sample_spectra, write_histogram_csv,
    write_spectra_csv, SpectraMeta, WishartConfig, MAX_EMPIRICAL_ORDER,
};
use wgamma::support::{
    boundary_distances, classify_region, gnuplot_script, is_positive_support, support_edges, sweep,
    write_sweep_csv, SweepGrid, FLAG_TOL,
};
use wgamma::transforms::{mgf_series_exact, DensityCurve};
use wgamma::{Error, Params};

use crate::args::{Command, Format};
use crate::Invalid;

const MAX_SWEEP_STEPS: usize = 2000;
const MAX_DENSITY_POINTS: usize = 1 << 22;

fn invalid(flag: &str, msg: impl std::fmt::Display) -> anyhow::Error {
    Invalid(format!("{flag}: {msg}")).into()
}

fn rational(flag: &str, raw: &str) -> Result<BigRational> {
    parse_rational(raw)
        .map_err(|_| invalid(flag, format!("expected a decimal or fraction, got {raw:?}")))
}

fn real(flag: &str, raw: &str) -> Result<f64> {
    let value = match raw.trim().parse::<f64>() {
        Ok(v) => v,
        Err(_) => to_f64(&rational(flag, raw)?),
    };
    if !value.is_finite() {
        return Err(invalid(
            flag,
            format!("expected a finite number, got {raw:?}"),
        ));
    }
    Ok(value)
}

fn params(m_raw: &str, n_raw: &str) -> Result<Params> {
    let (m, n) = (real("--m", m_raw)?, real("--n", n_raw)?);
    if m < 0.0 {
        return Err(invalid("--m", format!("must be nonnegative, got {m}")));
    }
    if n < 1.0 {
        return Err(invalid("--n", format!("must be at least 1, got {n}")));
    }
    Ok(Params::new(m, n)?)
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Moments { m, n, p, format } => moments(&m, &n, p, format),
        Command::Density {
            m,
            n,
            points,
            lo,
            hi,
            output,
        } => density(&m, &n, points, lo, hi, output),
        Command::Classify { m, n, format } => classify(&m, &n, format),
        Command::Sweep {
            m_min,
            m_max,
            m_steps,
            n_min,
            n_max,
            n_steps,
            output,
            gnuplot,
        } => {
            let grid = SweepGrid {
                m_min: real("--m-min", &m_min)?,
                m_max: real("--m-max", &m_max)?,
                m_steps,
                n_min: real("--n-min", &n_min)?,
                n_max: real("--n-max", &n_max)?,
                n_steps,
            };
            run_sweep(grid, output, gnuplot)
        }
        Command::Simulate {
            m,
            n,
            d,
            samples,
            seed,
            output,
            histogram,
            bins,
        } => simulate(m, n, d, samples, seed, &output, histogram, bins),
        Command::Compare {
            m,
            n,
            d,
            samples,
            p,
            seed,
            format,
            output,
        } => compare(m, n, d, samples, p, seed, format, output),
    }
}

fn moments(m_raw: &str, n_raw: &str, p: usize, format: Format) -> Result<()> {
    if p == 0 || p > P_MAX {
        return Err(invalid("--p", format!("must be in 1..={P_MAX}, got {p}")));
    }
    let (m, n) = (rational("--m", m_raw)?, rational("--n", n_raw)?);
    if m < BigRational::zero() {
        return Err(invalid("--m", "must be nonnegative"));
    }
    if n < BigRational::one() {
        return Err(invalid("--n", "must be at least 1"));
    }
    let series = mgf_series_exact(&m, &n, p)?;
    let kappa = free_cumulants(p, &m, &n)?;
    let mut routes: [Vec<BigRational>; 4] = Default::default();
    for (q, from_series) in series.iter().enumerate().skip(1) {
        routes[0].push(moment_enum(q, &m, &n)?);
        routes[1].push(profile_counts(q)?.evaluate(&m, &n));
        routes[2].push(from_series.clone());
        routes[3].push(moment_from_cumulants(q, &kappa)?);
    }
    let agree = routes.iter().all(|r| *r == routes[0]);
    let show = |r: &[BigRational]| r.iter().map(to_decimal_string).collect::<Vec<_>>();
    let mut out = writer(None)?;
    match format {
        Format::Json => {
            let doc = json!({
                "m": to_decimal_string(&m),
                "n": to_decimal_string(&n),
                "moments": show(&routes[0]),
                "routes": {
                    "enumeration": show(&routes[0]),
                    "recurrence": show(&routes[1]),
                    "series": show(&routes[2]),
                    "cumulants": show(&routes[3]),
                },
                "routes_agree": agree,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "p,enumeration,recurrence,series,cumulants")?;
            for q in 0..p {
                let row = routes.iter().map(|r| to_decimal_string(&r[q]));
                writeln!(out, "{},{}", q + 1, row.collect::<Vec<_>>().join(","))?;
            }
        }
        Format::Text => {
            for (q, v) in routes[0].iter().enumerate() {
                writeln!(out, "M_{} = {}", q + 1, to_decimal_string(v))?;
            }
            writeln!(out, "routes-agree: {}", if agree { "yes" } else { "no" })?;
        }
    }
    out.flush()?;
    if !agree {
        bail!("moment routes disagree");
    }
    Ok(())
}

fn density(
    m: &str,
    n: &str,
    points: usize,
    lo: Option<String>,
    hi: Option<String>,
    output: Option<PathBuf>,
) -> Result<()> {
    let params = params(m, n)?;
    if !(2..=MAX_DENSITY_POINTS).contains(&points) {
        return Err(invalid(
            "--points",
            format!("must be in 2..={MAX_DENSITY_POINTS}, got {points}"),
        ));
    }
    let curve = if lo.is_none() && hi.is_none() {
        DensityCurve::compute(params, points)?
    } else {
        let edges = support_edges(params)?;
        let (first, last) = (edges[0], edges[edges.len() - 1]);
        let pad = 0.05 * (last - first);
        let lo = lo
            .map(|s| real("--lo", &s))
            .transpose()?
            .unwrap_or(first - pad);
        let hi = hi
            .map(|s| real("--hi", &s))
            .transpose()?
            .unwrap_or(last + pad);
        if lo >= hi {
            return Err(invalid(
                "--lo",
                format!("must be below --hi, got [{lo}, {hi}]"),
            ));
        }
        DensityCurve::with_range(params, lo, hi, points)?
    };
    let mut out = writer(output.as_deref())?;
    curve.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn classify(m: &str, n: &str, format: Format) -> Result<()> {
    let params = params(m, n)?;
    if format == Format::Csv {
        return Err(invalid("--format", "classify prints text or json"));
    }
    let edges = support_edges(params)?;
    let verdict = is_positive_support(params);
    let (label, g_flag, h_flag) = match classify_region(params) {
        Ok(l) => (l.region.to_string(), l.on_g_boundary, l.on_h_boundary),
        Err(Error::Boundary(_)) => {
            let (dg, dh) = boundary_distances(params);
            ("boundary".to_string(), dg <= FLAG_TOL, dh <= FLAG_TOL)
        }
        Err(Error::Domain(_)) if params.n() == 1.0 => ("mp".to_string(), false, false),
        Err(Error::Domain(_)) => ("n/a".to_string(), false, false),
        Err(e) => return Err(e.into()),
    };
    let mut out = writer(None)?;
    match format {
        Format::Json => {
            let doc = json!({
                "m": params.m(),
                "n": params.n(),
                "label": label,
                "on_g_boundary": g_flag,
                "on_h_boundary": h_flag,
                "positive": verdict.positive,
                "mp_case": verdict.mp_case,
                "support_edges": edges,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        _ => {
            writeln!(out, "label: {label}")?;
            writeln!(out, "on_g_boundary: {g_flag}")?;
            writeln!(out, "on_h_boundary: {h_flag}")?;
            writeln!(out, "positive: {}", verdict.positive)?;
            writeln!(out, "mp_case: {}", verdict.mp_case)?;
            let cells: Vec<String> = edges.iter().map(|e| format!("{e:.12}")).collect();
            writeln!(out, "support_edges: {}", cells.join(", "))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_sweep(grid: SweepGrid, output: Option<PathBuf>, gnuplot: Option<PathBuf>) -> Result<()> {
    for (flag, steps) in [("--m-steps", grid.m_steps), ("--n-steps", grid.n_steps)] {
        if !(1..=MAX_SWEEP_STEPS).contains(&steps) {
            return Err(invalid(
                flag,
                format!("must be in 1..={MAX_SWEEP_STEPS}, got {steps}"),
            ));
        }
    }
    if grid.m_min < 0.0 {
        return Err(invalid("--m-min", "must be nonnegative"));
    }
    if grid.m_max < grid.m_min {
        return Err(invalid("--m-max", "must not be below --m-min"));
    }
    if grid.n_min < 1.0 {
        return Err(invalid("--n-min", "must be at least 1"));
    }
    if grid.n_max < grid.n_min {
        return Err(invalid("--n-max", "must not be below --n-min"));
    }
    let rows = sweep(&grid)?;
    let mut out = writer(output.as_deref())?;
    write_sweep_csv(&rows, &mut out)?;
    out.flush()?;
    if let (Some(script), Some(csv)) = (gnuplot, output) {
        std::fs::write(&script, gnuplot_script(&csv.display().to_string(), &grid))
            .with_context(|| format!("writing {}", script.display()))?;
    }
    Ok(())
}

fn config(m: usize, n: usize, d: usize, seed: u64) -> Result<WishartConfig> {
    for (flag, v) in [("--m", m), ("--n", n), ("--d", d)] {
        if v == 0 {
            return Err(invalid(flag, "must be a positive integer"));
        }
    }
    WishartConfig::new(d, n, m, seed).map_err(|e| invalid("--d", e))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    m: usize,
    n: usize,
    d: usize,
    samples: usize,
    seed: u64,
    output: &Path,
    histogram_path: Option<PathBuf>,
    bins: usize,
) -> Result<()> {
    let config = config(m, n, d, seed)?;
    if samples == 0 {
        return Err(invalid("--samples", "must be positive"));
    }
    if bins == 0 {
        return Err(invalid("--bins", "must be positive"));
    }
    let spectra = sample_spectra(&config, samples)?;
    let mut out = writer(Some(output))?;
    write_spectra_csv(&spectra, &mut out)?;
    out.flush()?;
    let sidecar = output.with_extension("json");
    let meta = serde_json::to_string_pretty(&SpectraMeta::new(&config, samples))?;
    std::fs::write(&sidecar, meta + "\n")
        .with_context(|| format!("writing {}", sidecar.display()))?;
    if let Some(path) = histogram_path {
        let edges = default_bin_edges(Params::new(m as f64, n as f64)?, bins)?;
        let mut out = writer(Some(&path))?;
        write_histogram_csv(&histogram(&spectra, &edges)?, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn compare(
    m: usize,
    n: usize,
    d: usize,
    samples: usize,
    p: usize,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
) -> Result<()> {
    let config = config(m, n, d, seed)?;
    if samples < 2 {
        return Err(invalid("--samples", "need at least 2 samples"));
    }
    if p == 0 || p > MAX_EMPIRICAL_ORDER {
        return Err(invalid(
            "--p",
            format!("must be in 1..={MAX_EMPIRICAL_ORDER}, got {p}"),
        ));
    }
    let report = compare_report(&config, samples, p)?;
    let mut out = writer(output.as_deref())?;
    match format {
        Format::Csv => report.write_csv(&mut out)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Text => {
            writeln!(
                out,
                "{:>2} {:>14} {:>14} {:>12} {:>8}",
                "p", "analytic", "empirical", "std_error", "z"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>2} {:>14.6} {:>14.6} {:>12.3e} {:>8.3}",
                    r.p, r.analytic, r.empirical, r.std_error, r.z
                )?;
            }
            let s = &report.smallest;
            writeln!(
                out,
                "smallest eigenvalue: mean {:.6}, min {:.6}, support infimum {:.6}, mean gap {:.3e}",
                s.mean, s.min, s.support_infimum, s.mean_gap
            )?;
            writeln!(out, "near-zero fraction: {:.3e}", report.near_zero_fraction)?;
        }
    }
    out.flush()?;
    Ok(())
}
