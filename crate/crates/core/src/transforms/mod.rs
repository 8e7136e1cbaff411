//! Moment series, Cauchy transform and density of `μ_{m,n}`.
//!
//! The Cauchy transform `G` of `μ_{m,n}` solves
//! `ξG³ − (1 − mn)G² − (ξ − m)G + 1 = 0`; the density is recovered from the
//! complex root of that cubic on the real line.

mod curve;

pub use curve::{numeric_moment, DensityCurve, DEFAULT_POINTS};

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cubic_discriminant, cubic_roots, quadratic_roots};

/// Largest series order accepted by [`mgf_series`].
pub const MAX_ORDER: usize = 64;

/// Imaginary part used when the sign of the discriminant is unreliable.
pub const EPS_REGULARIZE: f64 = 1e-8;

pub type ComplexPoint = Complex64;

/// Parameters `(m, n)` of the measure, with `m ≥ 0` and `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    m: f64,
    n: f64,
}

impl Params {
    pub fn new(m: f64, n: f64) -> Result<Self> {
        if !m.is_finite() || !n.is_finite() {
            return Err(Error::domain(format!(
                "parameters must be finite, got m={m}, n={n}"
            )));
        }
        if m < 0.0 {
            return Err(Error::domain(format!("m must be nonnegative, got {m}")));
        }
        if n < 1.0 {
            return Err(Error::domain(format!("n must be at least 1, got {n}")));
        }
        Ok(Params { m, n })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// `s = m(n + 1)/2`, the parameter of the positive free Poisson part.
    pub fn s(&self) -> f64 {
        self.m * (self.n + 1.0) / 2.0
    }

    /// `t = m(n − 1)/2`, the parameter of the subtracted free Poisson part.
    pub fn t(&self) -> f64 {
        self.m * (self.n - 1.0) / 2.0
    }

    pub fn mean(&self) -> f64 {
        self.m
    }

    pub fn variance(&self) -> f64 {
        self.m * self.n
    }

    /// A length scale that dominates the support.
    fn scale(&self) -> f64 {
        1.0 + self.m * (self.n + 2.0)
    }
}

fn mul_trunc<T: Num + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len();
    (0..len)
        .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + a[j].clone() * b[k - j].clone()))
        .collect()
}

/// Coefficients `M_0..M_order` of the power series `F` solving
/// `(F − 1)(1 − z²F²) = mzF(1 + nzF)`, in any numeric ring.
///
/// Runs `order + 1` sweeps of `F ← 1 + mzF(1 + nzF)/(1 − z²F²)`; after sweep
/// `k` the coefficients up to `z^k` are final.
pub fn mgf_coefficients<T: Num + Clone>(m: &T, n: &T, order: usize) -> Vec<T> {
    let len = order + 1;
    let mut f = vec![T::zero(); len];
    f[0] = T::one();
    for _ in 0..len {
        let sq = mul_trunc(&f, &f);
        // 1/(1 − u) with u = z²F², via c_k = Σ_{j≥1} u_j c_{k−j}
        let mut inv = vec![T::zero(); len];
        inv[0] = T::one();
        for k in 1..len {
            inv[k] = (2..=k).fold(T::zero(), |acc, j| {
                acc + sq[j - 2].clone() * inv[k - j].clone()
            });
        }
        let inner: Vec<T> = (0..len)
            .map(|k| {
                if k == 0 {
                    f[0].clone()
                } else {
                    f[k].clone() + n.clone() * sq[k - 1].clone()
                }
            })
            .collect();
        let prod = mul_trunc(&inner, &inv);
        let mut next = vec![T::zero(); len];
        next[0] = T::one();
        for k in 1..len {
            next[k] = m.clone() * prod[k - 1].clone();
        }
        f = next;
    }
    f
}

/// Floating-point moment series of `μ_{m,n}`.
pub fn mgf_series(params: Params, order: usize) -> Result<Vec<f64>> {
    check_order(order)?;
    Ok(mgf_coefficients(&params.m, &params.n, order))
}

/// Exact moment series for rational parameters.
pub fn mgf_series_exact(
    m: &BigRational,
    n: &BigRational,
    order: usize,
) -> Result<Vec<BigRational>> {
    check_order(order)?;
    Ok(mgf_coefficients(m, n, order))
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!(
            "series order {order} exceeds {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn cubic_at(params: Params, xi: Complex64) -> [Complex64; 3] {
    let mn = params.m * params.n;
    cubic_roots(
        xi,
        Complex64::new(mn - 1.0, 0.0),
        Complex64::new(params.m, 0.0) - xi,
        Complex64::new(1.0, 0.0),
    )
}

fn sign_margin(z: Complex64) -> f64 {
    1e-12 * (1.0 + z.norm())
}

/// Cauchy transform `G(ξ) = ∫ dμ(x)/(ξ − x)` for `Im ξ > 0`.
pub fn cauchy_transform(params: Params, xi: ComplexPoint) -> Result<ComplexPoint> {
    if !(xi.im > 0.0) || !xi.re.is_finite() || !xi.im.is_finite() {
        return Err(Error::domain(format!(
            "Cauchy transform needs Im ξ > 0, got {xi}"
        )));
    }
    let roots = cubic_at(params, xi);
    let below: Vec<&Complex64> = roots.iter().filter(|z| z.im < -sign_margin(**z)).collect();
    let unclear = roots.iter().any(|z| z.im.abs() <= sign_margin(*z));
    if below.len() == 1 && !unclear {
        return Ok(*below[0]);
    }
    continue_branch(params, xi)
}

/// Follows the root behaving like `1/ξ` from high above the real axis down
/// to `xi`, matching roots between nearby steps.
fn continue_branch(params: Params, xi: Complex64) -> Result<Complex64> {
    let top = (1e3 * params.scale()).max(1e3 * xi.re.abs()).max(xi.im);
    let start = Complex64::new(xi.re, top);
    let anchor = start.inv();
    let mut current = nearest(&cubic_at(params, start), anchor);
    let steps = ((top / xi.im).ln() / 0.2).ceil().max(1.0) as usize;
    let ratio = (xi.im / top).powf(1.0 / steps as f64);
    let mut im = top;
    for k in 1..=steps {
        im = if k == steps { xi.im } else { im * ratio };
        current = nearest(&cubic_at(params, Complex64::new(xi.re, im)), current);
    }
    if current.im > sign_margin(current) {
        return Err(Error::internal(format!(
            "continued root {current} at ξ={xi} left the lower half-plane"
        )));
    }
    Ok(current)
}

fn nearest(roots: &[Complex64; 3], target: Complex64) -> Complex64 {
    *roots
        .iter()
        .min_by(|a, b| (**a - target).norm().total_cmp(&(**b - target).norm()))
        .expect("three roots")
}

/// Density of the absolutely continuous part of `μ_{m,n}` at `x`.
///
/// A negative discriminant of the real cubic means a conjugate pair of roots
/// and the density is `|Im G|/π`; when the sign is within rounding noise the
/// Cauchy transform is evaluated at `x + i·EPS_REGULARIZE` instead.
pub fn density(params: Params, x: f64) -> f64 {
    if !x.is_finite() {
        return 0.0;
    }
    let (m, mn) = (params.m, params.m * params.n);
    if x == 0.0 {
        if mn == 1.0 {
            // the density may blow up here; the point carries no mass
            return 0.0;
        }
        let [g1, g2] = quadratic_roots(
            Complex64::new(mn - 1.0, 0.0),
            Complex64::new(m, 0.0),
            Complex64::new(1.0, 0.0),
        );
        return g1.im.abs().max(g2.im.abs()) / PI;
    }
    let (disc, noise) = cubic_discriminant(x, mn - 1.0, m - x, 1.0);
    if disc > noise {
        return 0.0;
    }
    if disc < -noise {
        let roots = cubic_at(params, Complex64::new(x, 0.0));
        let im = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        return im / PI;
    }
    match cauchy_transform(params, Complex64::new(x, EPS_REGULARIZE)) {
        Ok(g) => (-g.im / PI).max(0.0),
        Err(_) => 0.0,
    }
}

/// Mass `max(1 − mn, 0)` of the atom at zero.
pub fn atom_mass(params: Params) -> f64 {
    (1.0 - params.m * params.n).max(0.0)
}

/// Absolutely continuous part of the Marchenko–Pastur law of parameter `t`.
pub fn mp_density(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "Marchenko–Pastur parameter must be positive, got {t}"
        )));
    }
    let (lo, hi) = ((t.sqrt() - 1.0).powi(2), (t.sqrt() + 1.0).powi(2));
    if !(x > lo && x < hi) {
        return Ok(0.0);
    }
    let r = 4.0 * t - (x - 1.0 - t).powi(2);
    Ok(r.max(0.0).sqrt() / (2.0 * PI * x))
}

/// Semicircle density of variance `β` centered at 1.
pub fn semicircle_density(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!(
            "semicircle variance must be positive, got {beta}"
        )));
    }
    let r = 4.0 * beta - (1.0 - x).powi(2);
    if r <= 0.0 {
        return Ok(0.0);
    }
    Ok(r.sqrt() / (2.0 * beta * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(m: f64, n: f64) -> Params {
        Params::new(m, n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(-0.1, 2.0).is_err());
        assert!(Params::new(1.0, 0.5).is_err());
        assert!(Params::new(f64::NAN, 2.0).is_err());
        let q = p(2.0, 3.0);
        assert_eq!((q.s(), q.t()), (4.0, 2.0));
    }

    #[test]
    fn series_low_orders() {
        let m = BigRational::from_integer(BigInt::from(2));
        let n = BigRational::from_integer(BigInt::from(3));
        let s = mgf_series_exact(&m, &n, 4).unwrap();
        let want = [1, 2, 10, 46, 254];
        for (got, w) in s.iter().zip(want) {
            assert_eq!(*got, BigRational::from_integer(BigInt::from(w)));
        }
        assert!(mgf_series(p(1.0, 1.0), 65).is_err());
    }

    #[test]
    fn cauchy_far_away() {
        let xi = Complex64::new(0.0, 1e6);
        for (m, n) in [(1.0, 1.0), (2.0, 3.0), (0.3, 5.0)] {
            let g = cauchy_transform(p(m, n), xi).unwrap();
            assert!((g * xi - 1.0).norm() < 1e-5);
        }
    }

    #[test]
    fn cauchy_rejects_real_axis() {
        assert!(cauchy_transform(p(1.0, 1.0), Complex64::new(1.0, 0.0)).is_err());
        assert!(cauchy_transform(p(1.0, 1.0), Complex64::new(1.0, -1.0)).is_err());
    }

    #[test]
    fn cauchy_mp_outside_support() {
        let g = cauchy_transform(p(1.0, 1.0), Complex64::new(5.0, 1e-9)).unwrap();
        assert!((g.re - (5.0 - 5f64.sqrt()) / 10.0).abs() < 1e-7, "{g}");
    }

    #[test]
    fn density_points() {
        assert!((density(p(1.0, 1.0), 2.0) - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert_eq!(density(p(1.5, 2.0), -1e6), 0.0);
        assert!(density(p(1.0, 2.0), 0.0) > 0.0);
    }

    #[test]
    fn atom() {
        assert_eq!(atom_mass(p(2.0, 1.0)), 0.0);
        assert_eq!(atom_mass(p(0.25, 2.0)), 0.5);
        assert_eq!(atom_mass(p(0.5, 2.0)), 0.0);
    }

    #[test]
    fn special_laws() {
        assert!((mp_density(1.0, 2.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(mp_density(1.0, 4.0).unwrap(), 0.0);
        assert_eq!(mp_density(4.0, 1.0).unwrap(), 0.0);
        assert!((semicircle_density(1.0, 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(semicircle_density(1.0, 3.0).unwrap(), 0.0);
        assert!((semicircle_density(4.0, 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(mp_density(0.0, 1.0).is_err());
        assert!(semicircle_density(-1.0, 1.0).is_err());
    }
}
