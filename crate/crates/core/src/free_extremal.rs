//! Univariate free extremal convolutions.
//!
//! For free `a` and `b` with distribution functions `F` and `G`, the spectral
//! maximum `a v b` has distribution function `(F + G - 1)_+` and the minimum
//! `a ^ b` has `min(F + G, 1)`. On two-atom laws these reduce to the traces of
//! the join and meet of two free projections.

use crate::cdf::{merge_breaks, CdfError, UnivariateCdf};
use crate::sum_minus_one;

fn pointwise(
    f: &UnivariateCdf,
    g: &UnivariateCdf,
    eps: f64,
    op: impl Fn(f64, f64) -> f64,
) -> Result<UnivariateCdf, CdfError> {
    f.require_valid(eps)?;
    g.require_valid(eps)?;
    let grid = merge_breaks(f.breaks(), g.breaks());
    let values = grid.iter().map(|&s| op(f.eval(s), g.eval(s))).collect();
    UnivariateCdf::new(grid, values)
}

/// Free max-convolution: `H = (F + G - 1)_+` on the merged grid.
pub fn free_max_convolve(
    f: &UnivariateCdf,
    g: &UnivariateCdf,
    eps: f64,
) -> Result<UnivariateCdf, CdfError> {
    pointwise(f, g, eps, |a, b| sum_minus_one(a, b).max(0.0))
}

/// Free min-convolution: `K = min(F + G, 1)` on the merged grid.
pub fn free_min_convolve(
    f: &UnivariateCdf,
    g: &UnivariateCdf,
    eps: f64,
) -> Result<UnivariateCdf, CdfError> {
    pointwise(f, g, eps, |a, b| (a + b).min(1.0))
}

fn unit(p: f64) -> Result<f64, CdfError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(CdfError::OutOfUnitInterval { value: p })
    }
}

/// Trace of the meet of two free projections with traces `p` and `p2`.
pub fn projection_meet_trace(p: f64, p2: f64) -> Result<f64, CdfError> {
    Ok(sum_minus_one(unit(p)?, unit(p2)?).max(0.0))
}

/// Trace of the join of two free projections with traces `p` and `p2`.
pub fn projection_join_trace(p: f64, p2: f64) -> Result<f64, CdfError> {
    Ok((unit(p)? + unit(p2)?).min(1.0))
}
