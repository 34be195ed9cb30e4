//! Summation over the integer index sets of multilateral series: finite boxes,
//! hyperplane sections of boxes, bilateral hyperplanes, the unilateral orthant
//! and the full lattice. Infinite sums are accumulated shell by shell so the
//! size of the outermost shell is an honest tail estimate.

mod engine;
mod kernel;

pub use engine::{
    sum_bounded_box, sum_bounded_hyperplane, sum_box, sum_box_hyperplane,
    sum_hyperplane_bilateral, sum_lattice_bilateral, sum_orthant, sum_simplex,
};
pub use kernel::{Arith, Domain, Factor, LatticeSum, TermSpec};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mparith::{HValue, QBase};

/// A point of Z^n.
pub type MultiIndex = Vec<i64>;

/// How an infinite lattice sum is cut off.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Largest |y_i| (bilateral) or |y| (orthant) summed.
    pub radius: u32,
    /// Shell maxima below `term_tol * |partial sum|` count as negligible.
    pub term_tol: f64,
    /// Number of consecutive negligible shells required for convergence.
    pub stagnation_window: u32,
    pub max_terms: u64,
    /// Stop at the first shell where convergence is declared.
    pub early_stop: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            radius: 24,
            term_tol: 1e-24,
            stagnation_window: 2,
            max_terms: 50_000_000,
            early_stop: true,
        }
    }
}

impl TruncationPolicy {
    pub fn with_radius(radius: u32) -> Self {
        Self { radius, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius == 0 || !(self.term_tol > 0.0) || self.stagnation_window == 0 {
            return Err(Error::InvalidConfig(alloc::format!("{:?}", self)));
        }
        Ok(())
    }
}

/// What a summation observed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SumDiagnostics {
    pub terms_evaluated: u64,
    pub nonzero_terms: u64,
    /// max |term| on the outermost shell summed.
    pub largest_shell_tail: f64,
    /// Absolute threshold the shell maxima were compared against.
    pub tail_threshold: f64,
    pub converged: bool,
    /// Terms whose denominator vanished after the numerator already had.
    pub pole_hits: u64,
    /// Outermost shell actually summed.
    pub radius_used: u32,
    /// max |term| over the whole sum, the scale cancellation is measured against.
    pub largest_term: f64,
}

impl SumDiagnostics {
    /// Diagnostics of an exact finite sum.
    pub fn exact(terms: u64, nonzero: u64) -> Self {
        Self {
            terms_evaluated: terms,
            nonzero_terms: nonzero,
            converged: true,
            ..Self::default()
        }
    }
}

/// Delta(z q^y) / Delta(z) = prod_{i<j} (z_i q^{y_i} - z_j q^{y_j}) / (z_i - z_j).
pub fn vandermonde_ratio(z: &[HValue], y: &[i64], q: &QBase) -> Result<HValue> {
    check_len(z, y)?;
    let w: Vec<HValue> = z.iter().zip(y).map(|(zi, &yi)| q.shift(zi, yi)).collect();
    ratio(z, &w)
}

/// Additive analogue prod_{i<j} (z_i + y_i - z_j - y_j) / (z_i - z_j).
pub fn vandermonde_ratio_additive(z: &[HValue], y: &[i64]) -> Result<HValue> {
    check_len(z, y)?;
    let w: Vec<HValue> = z.iter().zip(y).map(|(zi, &yi)| zi.add_i64(yi)).collect();
    ratio(z, &w)
}

fn check_len(z: &[HValue], y: &[i64]) -> Result<()> {
    if z.len() != y.len() || z.is_empty() {
        return Err(Error::InvalidDimension(alloc::format!(
            "{} nodes for a {}-dimensional index",
            z.len(),
            y.len()
        )));
    }
    Ok(())
}

fn ratio(z: &[HValue], w: &[HValue]) -> Result<HValue> {
    let ctx = z[0].ctx();
    let mut num = HValue::one(ctx);
    let mut den = HValue::one(ctx);
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            let d = &z[i] - &z[j];
            if d.is_zero() {
                return Err(Error::DegenerateNodes);
            }
            den = &den * &d;
            num = &num * &(&w[i] - &w[j]);
        }
    }
    num.checked_div(&den)
}
