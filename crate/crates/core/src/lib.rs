//! Free and bi-free extremal convolutions of distribution functions.
//!
//! The crate works on grid-represented distribution functions: a CDF is a
//! finite list of breakpoints with right-continuous piecewise-constant values,
//! i.e. the distribution function of a discrete measure supported on the grid.
//! Every operation here is pointwise in CDF values, so the grid representation
//! is exact for discrete measures.
//!
//! * [`cdf`] holds the univariate and bivariate data model, validation,
//!   marginals, grid merging, affine rescaling and empirical CDFs.
//! * [`free_extremal`] implements the univariate free max/min convolutions
//!   `(F + G - 1)_+` and `min(F + G, 1)` and the projection trace identities
//!   behind them.
//! * [`bifree`] implements the bi-free max-convolution of bivariate CDFs,
//!   n-fold powers, the n-th root probe and the max-stability residual.
//! * [`oracle`] re-derives the projection-pair case independently through
//!   Cauchy transforms, their inverses and the reduced partial bi-free
//!   R-transform, including the boundary limit that extracts an atom mass.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bifree;
pub mod cdf;
pub mod free_extremal;
pub mod oracle;

pub use bifree::{
    bifree_max_convolve, max_stable_residual, nfold, nfold_iterated, nth_root, psi_ratio, Psi,
    PsiField, RootOutcome,
};
pub use cdf::{
    affine_transform, ecdf_from_samples, marginals, merge_grids, AffineNormalization, Axis,
    BivariateCdf, CdfError, Location, UnivariateCdf, Violation, DEFAULT_EPS_CDF,
};
pub use free_extremal::{
    free_max_convolve, free_min_convolve, projection_join_trace, projection_meet_trace,
};
pub use oracle::{
    atom_mass_limit, cauchy_pair, cauchy_pair_atoms, cauchy_projection, combined_expression,
    discrete_cauchy, k_projection, r_tilde_by_definition, r_tilde_pair, wedge_moment_closed_form,
    wedge_moment_limit, ComplexPoint, LimitEstimate, OracleError, ProjectionPairLaw,
    SumPairCauchy, DEFAULT_EPS_INV, DEFAULT_EPS_LIM,
};

/// `a + b - 1`, exact whenever either argument is exactly one.
///
/// Both convolutions reduce to this on CDF values and on ratio fields, and
/// the unit element must act without round-off.
#[inline]
pub(crate) fn sum_minus_one(a: f64, b: f64) -> f64 {
    if a == 1.0 {
        b
    } else if b == 1.0 {
        a
    } else {
        (a + b) - 1.0
    }
}
