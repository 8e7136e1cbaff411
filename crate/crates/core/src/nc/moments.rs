use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{enumerate_nc, NoncrossingPartition, P_MAX};
use crate::{Error, Result};

/// `(p, b, e)`: ground-set size, number of blocks, number of even blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockProfile {
    pub p: usize,
    pub b: usize,
    pub e: usize,
}

/// `N(p, b, e)` for one `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileTable {
    p: usize,
    // counts[b][e]
    counts: Vec<Vec<BigUint>>,
}

impl ProfileTable {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, b: usize, e: usize) -> BigUint {
        self.counts
            .get(b)
            .and_then(|row| row.get(e))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero entries in `(b, e)` order.
    pub fn entries(&self) -> BTreeMap<BlockProfile, BigUint> {
        let mut out = BTreeMap::new();
        for (b, row) in self.counts.iter().enumerate() {
            for (e, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.insert(BlockProfile { p: self.p, b, e }, c.clone());
                }
            }
        }
        out
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().flatten().sum()
    }

    /// `Σ N(p, b, e)·m^b·n^e`.
    pub fn evaluate(&self, m: &BigRational, n: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut m_pow = BigRational::one();
        for row in &self.counts {
            let mut n_pow = BigRational::one();
            for c in row {
                if !c.is_zero() {
                    acc += &m_pow * &n_pow * BigRational::from_integer(c.clone().into());
                }
                n_pow *= n;
            }
            m_pow *= m;
        }
        acc
    }
}

// Polynomial in (m, n) with natural coefficients: coeffs[b][e].
#[derive(Clone, Debug, Default)]
struct Poly2 {
    coeffs: Vec<Vec<BigUint>>,
}

impl Poly2 {
    fn one() -> Self {
        Poly2 {
            coeffs: vec![vec![BigUint::one()]],
        }
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly2::default();
        }
        let rows = self.coeffs.len() + other.coeffs.len() - 1;
        let cols = self.width() + other.width() - 1;
        let mut out = vec![vec![BigUint::zero(); cols]; rows];
        for (b1, r1) in self.coeffs.iter().enumerate() {
            for (e1, c1) in r1.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (b2, r2) in other.coeffs.iter().enumerate() {
                    for (e2, c2) in r2.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        out[b1 + b2][e1 + e2] += c1 * c2;
                    }
                }
            }
        }
        Poly2 { coeffs: out }
    }

    fn add_assign(&mut self, other: &Poly2) {
        let rows = self.coeffs.len().max(other.coeffs.len());
        let cols = self.width().max(other.width());
        self.coeffs.resize(rows, Vec::new());
        for row in &mut self.coeffs {
            row.resize(cols, BigUint::zero());
        }
        for (b, r) in other.coeffs.iter().enumerate() {
            for (e, c) in r.iter().enumerate() {
                self.coeffs[b][e] += c;
            }
        }
    }

    /// Multiplies by `m^db·n^de`.
    fn shifted(&self, db: usize, de: usize) -> Poly2 {
        let width = self.width() + de;
        let mut coeffs = vec![vec![BigUint::zero(); width]; db];
        for row in &self.coeffs {
            let mut r = vec![BigUint::zero(); de];
            r.extend(row.iter().cloned());
            r.resize(width, BigUint::zero());
            coeffs.push(r);
        }
        Poly2 { coeffs }
    }

    fn width(&self) -> usize {
        self.coeffs.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// `N(p, b, e)` from the first-block recurrence.
///
/// The block containing 1 has `r` further legs which cut the remaining
/// `p − r − 1` points into `r + 1` gaps, each holding an arbitrary smaller
/// noncrossing partition. The block adds one to `b`, and one to `e` exactly
/// when `r` is odd.
pub fn profile_counts(p: usize) -> Result<ProfileTable> {
    if p == 0 || p > P_MAX {
        return Err(Error::domain(format!("p = {p} outside 1..={P_MAX}")));
    }
    // tables[q]: generating polynomial of NC(q); tables[0] = 1 (empty partition).
    let mut tables: Vec<Poly2> = vec![Poly2::one()];
    for size in 1..=p {
        // fills[j][q]: all ways to fill j gaps holding q points in total
        let mut fills: Vec<Vec<Poly2>> = vec![vec![Poly2::default(); size]; size + 1];
        fills[0][0] = Poly2::one();
        for j in 1..=size {
            for q in 0..size {
                let mut acc = Poly2::default();
                for last in 0..=q {
                    acc.add_assign(&fills[j - 1][q - last].mul(&tables[last]));
                }
                fills[j][q] = acc;
            }
        }
        let mut total = Poly2::default();
        for r in 0..size {
            total.add_assign(&fills[r + 1][size - r - 1].shifted(1, r % 2));
        }
        tables.push(total);
    }
    Ok(ProfileTable {
        p,
        counts: tables.pop().unwrap().coeffs,
    })
}

/// `Σ_{π ∈ NC(p)} m^{#π}·n^{e(π)}`, the limiting `p`-th moment of `m·W^Γ`.
pub fn moment_enum(p: usize, m: &BigRational, n: &BigRational) -> Result<BigRational> {
    let partitions = enumerate_nc(p)?;
    Ok(partitions
        .iter()
        .map(|pi| {
            num_traits::pow(m.clone(), pi.block_count())
                * num_traits::pow(n.clone(), pi.even_blocks())
        })
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Free cumulants `κ₁ … κ_{p_max}`: the coefficients of
/// `R(z) = m(1 + nz)/(1 − z²)`, i.e. `m` for odd orders and `mn` for even.
pub fn free_cumulants(p_max: usize, m: &BigRational, n: &BigRational) -> Result<Vec<BigRational>> {
    if p_max == 0 {
        return Err(Error::domain("p_max must be at least 1"));
    }
    let mn = m * n;
    Ok((1..=p_max)
        .map(|p| if p % 2 == 1 { m.clone() } else { mn.clone() })
        .collect())
}

/// `Σ_{π ∈ NC(p)} Π_{V ∈ π} κ_{|V|}` with `cumulants[k - 1] = κ_k`.
pub fn moment_from_cumulants(p: usize, cumulants: &[BigRational]) -> Result<BigRational> {
    if cumulants.len() < p {
        return Err(Error::domain(format!(
            "need {p} cumulants, got {}",
            cumulants.len()
        )));
    }
    let partitions = enumerate_nc(p)?;
    Ok(partitions
        .iter()
        .map(|pi: &NoncrossingPartition| {
            pi.blocks()
                .iter()
                .map(|b| cumulants[b.len() - 1].clone())
                .fold(BigRational::one(), |a, b| a * b)
        })
        .fold(BigRational::zero(), |a, b| a + b))
}
