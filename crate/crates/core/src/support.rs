//! Support of `μ_{m,n}`: the quartic discriminant `Δ(ξ)`, the curves that
//! split the `(m, n)` quadrant into regions, and the positivity criterion.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{eval, quartic_real_roots};
use crate::transforms::Params;

/// Points closer than this to a region boundary are not classified.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Distance at which a classified point is flagged as near a boundary.
pub const FLAG_TOL: f64 = 1e-6;

/// `Δ(ξ) = c4ξ⁴ + c3ξ³ + c2ξ² + c1ξ + c0`, the discriminant of the cubic
/// satisfied by the Cauchy transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticPoly {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuarticPoly {
    pub fn coeffs(&self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval(&self.coeffs(), x)
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        eval(&[4.0 * self.c4, 3.0 * self.c3, 2.0 * self.c2, self.c1], x)
    }

    pub fn second_derivative_at(&self, x: f64) -> f64 {
        eval(&[12.0 * self.c4, 6.0 * self.c3, 2.0 * self.c2], x)
    }
}

pub fn discriminant_quartic(params: Params) -> QuarticPoly {
    let (m, n) = (params.m(), params.n());
    let (m2, n2) = (m * m, n * n);
    let m3 = m2 * m;
    QuarticPoly {
        c4: 4.0,
        c3: -12.0 * m,
        c2: n2 * m2 + 12.0 * m2 - 20.0 * n * m - 8.0,
        c1: -2.0 * n2 * m3 - 4.0 * m3 + 22.0 * n * m2 - 20.0 * m,
        c0: n2 * m2 * m2 - 4.0 * n2 * n * m3 - 2.0 * n * m3 + 12.0 * n2 * m2 + m2 - 12.0 * n * m
            + 4.0,
    }
}

/// `P(m, n) = m³n³ + 15m²n² + 48mn − 27m² − 64`.
pub fn p_poly(params: Params) -> f64 {
    let (m, u) = (params.m(), params.m() * params.n());
    ((u + 15.0) * u + 48.0) * u - 27.0 * m * m - 64.0
}

/// Discriminant of `Δ`: `−256m²(n − 1)(n + 1)P³`.
pub fn delta2(params: Params) -> f64 {
    let (m, n) = (params.m(), params.n());
    -256.0 * m * m * (n - 1.0) * (n + 1.0) * p_poly(params).powi(3)
}

fn check_m(m: f64, hi: f64, name: &str) -> Result<()> {
    if !(m > 0.0 && m <= hi) {
        return Err(Error::domain(format!(
            "{name} is defined for m in (0, {hi}], got {m}"
        )));
    }
    Ok(())
}

/// Real root in `n` of `P(m, n) = 0`, for any `m > 0`.
fn g_unchecked(m: f64) -> f64 {
    // with u = mn the equation is u³ + 15u² + 48u = 27m² + 64, whose real
    // root is 3(a + 1/a) − 5 for a = ((m + √(m² + 4))/2)^{2/3}
    let a = ((m + (m * m + 4.0).sqrt()) / 2.0).powf(2.0 / 3.0);
    let mut u = 3.0 * (a + 1.0 / a) - 5.0;
    let target = 27.0 * m * m + 64.0;
    for _ in 0..3 {
        let f = ((u + 15.0) * u + 48.0) * u - target;
        let df = (3.0 * u + 30.0) * u + 48.0;
        u -= f / df;
    }
    u / m
}

/// The curve `P(m, n) = 0`, written as `n = g(m)`.
pub fn g_curve(m: f64) -> Result<f64> {
    check_m(m, 4.0, "g")?;
    Ok(g_unchecked(m))
}

/// `h(m) = m/4 + 1/m`, where `Δ(0)` changes sign.
pub fn h_curve(m: f64) -> Result<f64> {
    check_m(m, f64::INFINITY, "h")?;
    Ok(m / 4.0 + 1.0 / m)
}

/// `p₁,₂(m) = (11 ∓ √(81 − 8m²))/(2m)`, the zeros of `Δ′(0)` in `n`.
pub fn p_curves(m: f64) -> Result<(f64, f64)> {
    check_m(m, 9.0 / 8f64.sqrt(), "p")?;
    let r = (81.0 - 8.0 * m * m).max(0.0).sqrt();
    Ok(((11.0 - r) / (2.0 * m), (11.0 + r) / (2.0 * m)))
}

/// `q₁,₂(m) = (10 ∓ 2√3·√(9 − m²))/m`, the zeros of `Δ″(0)` in `n`.
pub fn q_curves(m: f64) -> Result<(f64, f64)> {
    check_m(m, 3.0, "q")?;
    let r = 2.0 * 3f64.sqrt() * (9.0 - m * m).max(0.0).sqrt();
    Ok(((10.0 - r) / m, (10.0 + r) / m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positivity {
    pub positive: bool,
    /// Set at `n = 1`, where the measure is Marchenko–Pastur and always
    /// supported on `[0, ∞)`; the general criterion does not apply there.
    pub mp_case: bool,
}

/// The criterion `n ≤ h(m)` and `m ≥ 2` for `n > 1`.
pub fn is_positive_support(params: Params) -> Positivity {
    let (m, n) = (params.m(), params.n());
    if n == 1.0 {
        return Positivity {
            positive: true,
            mp_case: true,
        };
    }
    let positive = m >= 2.0 && n <= m / 4.0 + 1.0 / m;
    Positivity {
        positive,
        mp_case: false,
    }
}

/// Real roots of `Δ`, sorted, with double roots repeated.
pub fn support_edges(params: Params) -> Result<Vec<f64>> {
    let roots = quartic_real_roots(discriminant_quartic(params).coeffs())?;
    if roots.len() != 2 && roots.len() != 4 {
        return Err(Error::internal(format!(
            "Δ has {} real roots at (m, n) = ({}, {}); expected 2 or 4",
            roots.len(),
            params.m(),
            params.n()
        )));
    }
    Ok(roots)
}

/// Maximal intervals between consecutive edges on which `Δ < 0`.
pub fn support_intervals(params: Params) -> Result<Vec<(f64, f64)>> {
    let delta = discriminant_quartic(params);
    let mut edges = support_edges(params)?;
    edges.dedup();
    Ok(edges
        .windows(2)
        .filter(|w| w[1] > w[0] && delta.eval(0.5 * (w[0] + w[1])) < 0.0)
        .map(|w| (w[0], w[1]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Two intervals separated by the origin.
    A1,
    /// Two intervals, both positive.
    A2,
    /// Two intervals, the origin inside one of them.
    B,
    /// One interval containing the origin.
    C,
    /// One positive interval.
    D,
}

impl Region {
    pub fn intervals(self) -> usize {
        match self {
            Region::A1 | Region::A2 | Region::B => 2,
            Region::C | Region::D => 1,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::A1 => "A1",
            Region::A2 => "A2",
            Region::B => "B",
            Region::C => "C",
            Region::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub region: Region,
    pub on_g_boundary: bool,
    pub on_h_boundary: bool,
}

/// Distances `|n − g(m)|` and `|n − h(m)|` to the two main boundary curves.
pub fn boundary_distances(params: Params) -> (f64, f64) {
    let (m, n) = (params.m(), params.n());
    if m <= 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    ((n - g_unchecked(m)).abs(), (n - (m / 4.0 + 1.0 / m)).abs())
}

#[derive(Clone, Copy, PartialEq)]
enum Sign {
    Neg,
    Pos,
    Unclear,
}

fn sign_away_from(n: f64, curves: &[f64], value: f64) -> Sign {
    if curves.iter().any(|c| (n - c).abs() <= BOUNDARY_TOL) {
        Sign::Unclear
    } else if value < 0.0 {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

/// Region of `(m, n)` from the signs of `P`, `Δ(0)`, `Δ′(0)` and `Δ″(0)`.
pub fn classify_region(params: Params) -> Result<RegionLabel> {
    let (m, n) = (params.m(), params.n());
    if !(m > 0.0 && n > 1.0) {
        return Err(Error::domain(format!(
            "classification needs m > 0 and n > 1, got ({m}, {n})"
        )));
    }
    let h = m / 4.0 + 1.0 / m;
    let (dg, dh) = boundary_distances(params);
    if dg <= BOUNDARY_TOL || dh <= BOUNDARY_TOL {
        return Err(Error::Boundary(format!(
            "({m}, {n}) lies on the g or h curve"
        )));
    }
    let delta = discriminant_quartic(params);
    // Δ(0) = (m² − 4mn + 4)(mn − 1)² has the sign of h(m) − n off mn = 1
    let zero_inside = n > h;
    let region = if p_poly(params) < 0.0 {
        if zero_inside {
            Region::B
        } else {
            let p = p_curves(m).map(|(a, b)| vec![a, b]).unwrap_or_default();
            let q = q_curves(m).map(|(a, b)| vec![a, b]).unwrap_or_default();
            let d1 = sign_away_from(n, &p, delta.c1);
            let d2 = sign_away_from(n, &q, delta.c2);
            match (d1, d2) {
                (Sign::Neg, Sign::Pos) => Region::A2,
                (Sign::Pos, _) | (_, Sign::Neg) => Region::A1,
                _ => {
                    return Err(Error::Boundary(format!(
                        "({m}, {n}) lies on a p or q curve"
                    )))
                }
            }
        }
    } else if zero_inside {
        Region::C
    } else {
        Region::D
    };
    Ok(RegionLabel {
        region,
        on_g_boundary: dg <= FLAG_TOL,
        on_h_boundary: dh <= FLAG_TOL,
    })
}

/// Rectangular grid of `(m, n)` values, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub m_min: f64,
    pub m_max: f64,
    pub m_steps: usize,
    pub n_min: f64,
    pub n_max: f64,
    pub n_steps: usize,
}

impl SweepGrid {
    fn axis(lo: f64, hi: f64, steps: usize, i: usize) -> f64 {
        if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (steps - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.m_steps)
            .flat_map(|i| {
                (0..self.n_steps).map(move |j| {
                    (
                        Self::axis(self.m_min, self.m_max, self.m_steps, i),
                        Self::axis(self.n_min, self.n_max, self.n_steps, j),
                    )
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: f64,
    pub n: f64,
    /// `None` when the point is too close to a boundary, or at `n = 1`.
    pub label: Option<RegionLabel>,
    pub positive: bool,
    pub edges: Vec<f64>,
}

pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    if grid.m_steps == 0 || grid.n_steps == 0 {
        return Err(Error::domain("sweep needs at least one step per axis"));
    }
    grid.points()
        .into_par_iter()
        .map(|(m, n)| {
            let params = Params::new(m, n)?;
            let label = match classify_region(params) {
                Ok(label) => Some(label),
                Err(Error::Boundary(_) | Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                m,
                n,
                label,
                positive: is_positive_support(params).positive,
                edges: support_edges(params)?,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "m,n,label,positive,edge_1,edge_2,edge_3,edge_4")?;
    for row in rows {
        let label = match row.label {
            Some(l) => l.region.to_string(),
            None if row.n == 1.0 => "mp".to_string(),
            None => "boundary".to_string(),
        };
        let mut cells: Vec<String> = row.edges.iter().map(|e| format!("{e:.16e}")).collect();
        cells.resize(4, String::new());
        writeln!(
            out,
            "{:.16e},{:.16e},{label},{},{}",
            row.m,
            row.n,
            row.positive,
            cells.join(",")
        )?;
    }
    Ok(())
}

/// A gnuplot script drawing the region map from a sweep CSV together with
/// the curves `g` and `h`.
pub fn gnuplot_script(csv_path: &str, grid: &SweepGrid) -> String {
    format!(
        r##"set datafile separator ","
set key outside right
set xlabel "m"
set ylabel "n"
set xrange [{m_min}:{m_max}]
set yrange [{n_min}:{n_max}]
set samples 1000
g(m) = m <= 4 ? ( a = ((m + sqrt(m*m + 4)) / 2)**(2.0/3), (3*(a + 1/a) - 5) / m ) : 1/0
h(m) = m/4 + 1/m
region(s) = s eq "A1" ? 1 : s eq "A2" ? 2 : s eq "B" ? 3 : s eq "C" ? 4 : s eq "D" ? 5 : 0
set palette defined (0 "gray", 1 "#1b9e77", 2 "#d95f02", 3 "#7570b3", 4 "#e7298a", 5 "#66a61e")
set cbrange [0:5]
set cbtics ("other" 0, "A1" 1, "A2" 2, "B" 3, "C" 4, "D" 5)
plot "{csv_path}" every ::1 using 1:2:(region(strcol(3))) with points pt 5 ps 0.5 palette notitle, \
     g(x) with lines lw 2 lc "black" title "g", \
     h(x) with lines lw 2 dt 2 lc "black" title "h"
"##,
        m_min = grid.m_min,
        m_max = grid.m_max,
        n_min = grid.n_min,
        n_max = grid.n_max,
    )
}
