//! Low-degree polynomial roots.
//!
//! Coefficient slices are in descending degree throughout.

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;

use crate::{Error, Result};

/// Horner evaluation.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

pub fn eval_complex(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `Σ |c_k|·|x|^k`, the scale against which rounding in [`eval`] is measured.
pub fn eval_scale(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x.abs() + c.abs())
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    coeffs[..deg]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (deg - k) as f64)
        .collect()
}

/// Discriminant `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²` of `ax³ + bx² + cx + d`
/// together with a bound on its rounding error.
pub fn cubic_discriminant(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let terms = [
        18.0 * a * b * c * d,
        -4.0 * b * b * b * d,
        b * b * c * c,
        -4.0 * a * c * c * c,
        -27.0 * a * a * d * d,
    ];
    let value: f64 = terms.iter().sum();
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    (value, 16.0 * f64::EPSILON * magnitude)
}

/// All three roots of `ax³ + bx² + cx + d` with `a ≠ 0`.
///
/// Cardano's formula locates the root of largest modulus, which it gets to
/// good relative accuracy. That root is Newton-polished and divided out from
/// the constant end, and the remaining quadratic is solved without
/// cancellation. Every root then gets a few guarded Newton steps.
pub fn cubic_roots(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 3] {
    let (b1, c1, d1) = (b / a, c / a, d / a);
    let d0 = b1 * b1 - 3.0 * c1;
    let d1_ = 2.0 * b1 * b1 * b1 - 9.0 * b1 * c1 + 27.0 * d1;
    let root = (d1_ * d1_ - 4.0 * d0 * d0 * d0).sqrt();
    let plus = (d1_ + root) * 0.5;
    let minus = (d1_ - root) * 0.5;
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);

    let poly = [a, b, c, d];
    let dpoly = [3.0 * a, 2.0 * b, c];
    if big.norm() == 0.0 {
        return [-b1 / 3.0; 3];
    }
    let cbrt = big.powf(1.0 / 3.0);
    let mut largest = Complex64::new(0.0, 0.0);
    let mut rot = Complex64::new(1.0, 0.0);
    for _ in 0..3 {
        let ck = cbrt * rot;
        let r = -(b1 + ck + d0 / ck) / 3.0;
        if r.norm() > largest.norm() {
            largest = r;
        }
        rot *= omega;
    }
    polish(&poly, &dpoly, &mut largest);

    let mut roots = if largest.norm() == 0.0 {
        // all roots vanish with the largest one
        [largest; 3]
    } else {
        let q0 = -d / largest;
        let q1 = (q0 - c) / largest;
        let q2 = (q1 - b) / largest;
        let [r1, r2] = quadratic_roots(q2, q1, q0);
        [largest, r1, r2]
    };
    for r in &mut roots[1..] {
        polish(&poly, &dpoly, r);
    }
    roots
}

/// Roots of `ax² + bx + c`; a vanishing `a` yields one infinite root.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let t = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if t.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [t / a, c / t]
}

fn polish(poly: &[Complex64], dpoly: &[Complex64], z: &mut Complex64) {
    let mut fz = eval_complex(poly, *z).norm();
    for _ in 0..8 {
        let df = eval_complex(dpoly, *z);
        if df.norm() == 0.0 || fz == 0.0 {
            return;
        }
        let next = *z - eval_complex(poly, *z) / df;
        let fnext = eval_complex(poly, next).norm();
        if !(fnext < fz) {
            return;
        }
        *z = next;
        fz = fnext;
    }
}

/// Real roots of a quartic with nonzero leading coefficient, sorted
/// ascending and repeated according to multiplicity.
///
/// Eigenvalues of the companion matrix give first approximations. Roots
/// whose imaginary part is below `1e-8·(1 + |z|)` are taken as real and
/// Newton-polished. A conjugate pair with a somewhat larger imaginary part
/// is accepted as a real double root when the derivative has a nearby real
/// zero at which the quartic vanishes to rounding accuracy.
pub fn quartic_real_roots(coeffs: [f64; 5]) -> Result<Vec<f64>> {
    let lead = coeffs[0];
    if lead == 0.0 || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain(
            "quartic needs finite coefficients and a nonzero leading term",
        ));
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -monic[4],
        1.0, 0.0, 0.0, -monic[3],
        0.0, 1.0, 0.0, -monic[2],
        0.0, 0.0, 1.0, -monic[1],
    );
    let mut approx: Vec<Complex64> = match Schur::try_new(companion, f64::EPSILON, 500) {
        Some(schur) => schur
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect(),
        None => aberth(&monic),
    };
    approx.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));

    let dcoeffs = derivative(&coeffs);
    let ddcoeffs = derivative(&dcoeffs);
    let mut real = Vec::with_capacity(4);
    let mut used = [false; 4];
    for i in 0..4 {
        if used[i] {
            continue;
        }
        let z = approx[i];
        if z.im.abs() <= 1e-8 * (1.0 + z.norm()) {
            used[i] = true;
            real.push(newton_real(&coeffs, &dcoeffs, z.re));
            continue;
        }
        // the conjugate partner, if the pair might be a split double root
        if z.im.abs() > 1e-5 * (1.0 + z.norm()) {
            continue;
        }
        let partner = (i + 1..4).find(|&j| {
            !used[j] && (approx[j] - z.conj()).norm() <= 1e-9 * (1.0 + z.norm()) + 2.0 * z.im.abs()
        });
        if let Some(j) = partner {
            let x = newton_real(&dcoeffs, &ddcoeffs, z.re);
            if eval(&coeffs, x).abs() <= 1e-12 * eval_scale(&coeffs, x) {
                used[i] = true;
                used[j] = true;
                real.push(x);
                real.push(x);
            }
        }
    }
    real.sort_by(f64::total_cmp);
    // two separately polished copies of a double root land ~√ε apart
    for i in 1..real.len() {
        let (a, b) = (real[i - 1], real[i]);
        if b - a <= 1e-6 * (1.0 + a.abs()) {
            let x = newton_real(&dcoeffs, &ddcoeffs, 0.5 * (a + b));
            if (x - a).abs() <= 1e-6 * (1.0 + a.abs())
                && eval(&coeffs, x).abs() <= 1e-12 * eval_scale(&coeffs, x)
            {
                real[i - 1] = x;
                real[i] = x;
            }
        }
    }
    Ok(real)
}

// Simultaneous Aberth–Ehrlich iteration for a monic polynomial.
fn aberth(monic: &[f64]) -> Vec<Complex64> {
    let deg = monic.len() - 1;
    let coeffs: Vec<Complex64> = monic.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let dcoeffs: Vec<Complex64> = derivative(monic)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let ratio = eval_complex(&coeffs, z[i]) / eval_complex(&dcoeffs, z[i]);
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_real(coeffs: &[f64], dcoeffs: &[f64], mut x: f64) -> f64 {
    let mut fx = eval(coeffs, x).abs();
    for _ in 0..8 {
        let df = eval(dcoeffs, x);
        if df == 0.0 || fx == 0.0 {
            break;
        }
        let next = x - eval(coeffs, x) / df;
        let fnext = eval(coeffs, next).abs();
        if !(fnext < fx) {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}
