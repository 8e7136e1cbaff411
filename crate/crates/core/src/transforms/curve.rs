use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{atom_mass, density, Params};
use crate::error::{Error, Result};
use crate::quadrature::integrate_with_edges;
use crate::support::{support_edges, support_intervals};

pub const DEFAULT_POINTS: usize = 1024;

const ABS_TOL: f64 = 1e-8;
const NORMALIZATION_TOL: f64 = 1e-6;

/// Atom at zero plus the absolutely continuous density sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurve {
    params: Params,
    atom_mass: f64,
    grid: Vec<(f64, f64)>,
    support_edges: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    m: f64,
    n: f64,
    atom_mass: f64,
    support_edges: Vec<f64>,
}

impl DensityCurve {
    /// Samples `points` values over the support hull padded by 5% per side.
    pub fn compute(params: Params, points: usize) -> Result<Self> {
        let edges = support_edges(params)?;
        let lo = edges.first().copied().unwrap_or(0.0);
        let hi = edges.last().copied().unwrap_or(0.0);
        let pad = 0.05 * (hi - lo).max(f64::EPSILON);
        Self::with_range(params, lo - pad, hi + pad, points)
    }

    pub fn with_range(params: Params, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::domain("a density grid needs at least two points"));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain(format!("invalid grid range [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (points - 1) as f64;
        let grid = (0..points)
            .into_par_iter()
            .map(|i| {
                let x = if i == points - 1 {
                    hi
                } else {
                    lo + step * i as f64
                };
                (x, density(params, x))
            })
            .collect();
        Ok(DensityCurve {
            params,
            atom_mass: atom_mass(params),
            grid,
            support_edges: support_edges(params)?,
        })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn atom_mass(&self) -> f64 {
        self.atom_mass
    }

    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    pub fn support_edges(&self) -> &[f64] {
        &self.support_edges
    }

    /// `∫ x^p ρ(x) dx` over the support, by quadrature on the density itself.
    pub fn continuous_moment(&self, p: u32) -> Result<f64> {
        let mut total = 0.0;
        for (a, b) in support_intervals(self.params)? {
            let scale = a.abs().max(b.abs()).powi(p as i32).max(1.0);
            let r = integrate_with_edges(
                |x| x.powi(p as i32) * density(self.params, x),
                a,
                b,
                ABS_TOL * scale,
            );
            total += r.value;
        }
        Ok(total)
    }

    pub fn continuous_mass(&self) -> Result<f64> {
        self.continuous_moment(0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header {
            m: self.params.m(),
            n: self.params.n(),
            atom_mass: self.atom_mass,
            support_edges: self.support_edges.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        writeln!(out, "x,rho")?;
        for (x, rho) in &self.grid {
            writeln!(out, "{x:.16e},{rho:.16e}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty density file".into()))??;
        let header: Header = serde_json::from_str(&first)?;
        let columns = lines
            .next()
            .ok_or_else(|| Error::Parse("missing column header".into()))??;
        if columns.trim() != "x,rho" {
            return Err(Error::Parse(format!(
                "expected columns x,rho, found {columns:?}"
            )));
        }
        let mut grid = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad row {}: {line:?}", i + 3)))
            };
            let mut cells = line.split(',');
            grid.push((parse(cells.next())?, parse(cells.next())?));
        }
        Ok(DensityCurve {
            params: Params::new(header.m, header.n)?,
            atom_mass: header.atom_mass,
            grid,
            support_edges: header.support_edges,
        })
    }
}

/// `p`-th moment of the full measure: the atom contributes only at `p = 0`.
pub fn numeric_moment(curve: &DensityCurve, p: u32) -> Result<f64> {
    let total = curve.atom_mass + curve.continuous_mass()?;
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::domain(format!(
            "curve is not normalized: total mass {total}"
        )));
    }
    let atom = if p == 0 { curve.atom_mass } else { 0.0 };
    Ok(atom + curve.continuous_moment(p)?)
}
