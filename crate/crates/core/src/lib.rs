//! Limiting eigenvalue distributions of partially transposed Wishart matrices.
//!
//! For a complex Wishart matrix `W` of parameters `(dn, dm)`, the spectrum of
//! `m·W^Γ` converges as `d → ∞` to a measure `μ_{m,n}`, the free difference of
//! free Poisson laws with parameters `m(n±1)/2`. This crate computes that
//! measure from several independent angles:
//!
//! * [`nc`]: exact moments as sums over noncrossing partitions, a block-profile
//!   recurrence and the free moment–cumulant formula, all in exact rationals;
//! * [`transforms`]: the moment generating series, the Cauchy transform as a
//!   root of a cubic, the density by Stieltjes inversion and the atom at zero;
//! * [`support`]: the quartic discriminant governing the support edges, the
//!   region map and the positive-partial-transpose criterion;
//! * [`rmt`]: Monte Carlo sampling of `m·W^Γ` and comparison of empirical
//!   moments with the exact ones.

// NaN-rejecting guards read best as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod nc;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod rmt;
pub mod support;
pub mod transforms;

pub use error::{Error, Result};
pub use transforms::Params;
