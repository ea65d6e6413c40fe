//! Bi-free max-convolution of bivariate distribution functions.
//!
//! For bi-free pairs `(a, b)` and `(a', b')` with distribution functions `F`
//! and `G`, the pair `(a v a', b v b')` has distribution function `H` with
//! marginals `H_j = F_j ⊡∨ G_j` and, wherever `F, G, H_1, H_2 > 0`,
//!
//! ```text
//! H1(s) H2(t) / H(s,t) = F1(s) F2(t) / F(s,t) + G1(s) G2(t) / G(s,t) - 1
//! ```
//!
//! and `H = 0` elsewhere. The ratio `F1 F2 / F` is the [`PsiField`] of `F`;
//! it is affine under the convolution, which gives closed forms for n-fold
//! powers and a formula-level candidate for n-th roots.

use alloc::vec::Vec;

use crate::cdf::{
    affine_transform, merge_grids, AffineNormalization, BivariateCdf, CdfError, UnivariateCdf,
    Violation,
};
use crate::free_extremal::free_max_convolve;
use crate::sum_minus_one;

/// One cell of a [`PsiField`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psi {
    Finite(f64),
    /// `F = 0` while `F1 F2 > 0`.
    Infinite,
    /// `F1 F2 = 0` (and therefore `F = 0`).
    Undefined,
}

impl Psi {
    fn of(f1: f64, f2: f64, f: f64) -> Self {
        let num = f1 * f2;
        if f > 0.0 {
            Psi::Finite(num / f)
        } else if num > 0.0 {
            Psi::Infinite
        } else {
            Psi::Undefined
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Psi::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// `Psi(s,t) = F1(s) F2(t) / F(s,t)` on the grid of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiField {
    x_breaks: Vec<f64>,
    y_breaks: Vec<f64>,
    values: Vec<Psi>,
}

impl PsiField {
    pub fn x_breaks(&self) -> &[f64] {
        &self.x_breaks
    }

    pub fn y_breaks(&self) -> &[f64] {
        &self.y_breaks
    }

    pub fn get(&self, i: usize, j: usize) -> Psi {
        self.values[i * self.y_breaks.len() + j]
    }

    /// Row-major cells.
    pub fn values(&self) -> &[Psi] {
        &self.values
    }

    /// True when every finite cell equals one, i.e. `F = F1 F2` wherever
    /// the ratio is defined.
    pub fn is_unit(&self, tol: f64) -> bool {
        self.values
            .iter()
            .all(|p| !matches!(p, Psi::Finite(v) if (v - 1.0).abs() > tol))
    }
}

/// The ratio field of `F`. Does not validate.
pub fn psi_ratio(f: &BivariateCdf) -> PsiField {
    let (f1, f2) = f.marginals();
    let (nx, ny) = f.shape();
    let mut values = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            values.push(Psi::of(f1.values()[i], f2.values()[j], f.value(i, j)));
        }
    }
    PsiField {
        x_breaks: f.x_breaks().to_vec(),
        y_breaks: f.y_breaks().to_vec(),
        values,
    }
}

/// Fills interior cells with `cell` and the last row and column with the
/// given marginals, which is what a distribution function carries there.
fn assemble(
    h1: &UnivariateCdf,
    h2: &UnivariateCdf,
    mut cell: impl FnMut(usize, usize) -> f64,
) -> Result<BivariateCdf, CdfError> {
    let (nx, ny) = (h1.len(), h2.len());
    BivariateCdf::from_fn(h1.breaks().to_vec(), h2.breaks().to_vec(), |i, j| {
        if j == ny - 1 {
            h1.values()[i]
        } else if i == nx - 1 {
            h2.values()[j]
        } else {
            cell(i, j)
        }
    })
}

/// `H = F ⊡∨⊡∨ G` on the merged grid.
pub fn bifree_max_convolve(
    f: &BivariateCdf,
    g: &BivariateCdf,
    eps: f64,
) -> Result<BivariateCdf, CdfError> {
    f.require_valid(eps)?;
    g.require_valid(eps)?;
    let (f, g) = merge_grids(f, g)?;
    let (f1, f2) = f.marginals();
    let (g1, g2) = g.marginals();
    let h1 = free_max_convolve(&f1, &g1, eps)?;
    let h2 = free_max_convolve(&f2, &g2, eps)?;
    assemble(&h1, &h2, |i, j| {
        let (fv, gv) = (f.value(i, j), g.value(i, j));
        let (a, b) = (h1.values()[i], h2.values()[j]);
        if fv > 0.0 && gv > 0.0 && a > 0.0 && b > 0.0 {
            let psi_f = f1.values()[i] * f2.values()[j] / fv;
            let psi_g = g1.values()[i] * g2.values()[j] / gv;
            a * b / sum_minus_one(psi_f, psi_g)
        } else {
            0.0
        }
    })
}

/// The `n`-fold power `F ⊡∨⊡∨ ... ⊡∨⊡∨ F`, evaluated in closed form: the
/// marginals become `(n F_j - (n - 1))_+` and the ratio field `n Psi - (n - 1)`.
pub fn nfold(f: &BivariateCdf, n: u32, eps: f64) -> Result<BivariateCdf, CdfError> {
    if n == 0 {
        return Err(CdfError::ZeroFold);
    }
    f.require_valid(eps)?;
    if n == 1 {
        return Ok(f.clone());
    }
    let k = f64::from(n);
    let lift = |v: f64| (k * v - (k - 1.0)).max(0.0);
    let (f1, f2) = f.marginals();
    let h1 = UnivariateCdf::new(f1.breaks().to_vec(), f1.values().iter().map(|&v| lift(v)).collect())?;
    let h2 = UnivariateCdf::new(f2.breaks().to_vec(), f2.values().iter().map(|&v| lift(v)).collect())?;
    assemble(&h1, &h2, |i, j| {
        let fv = f.value(i, j);
        let (a, b) = (h1.values()[i], h2.values()[j]);
        if fv > 0.0 && a > 0.0 && b > 0.0 {
            let psi = f1.values()[i] * f2.values()[j] / fv;
            a * b / (k * psi - (k - 1.0))
        } else {
            0.0
        }
    })
}

/// The `n`-fold power by repeated pairwise convolution. Slower than [`nfold`]
/// and accumulates round-off; kept as the reference path.
pub fn nfold_iterated(f: &BivariateCdf, n: u32, eps: f64) -> Result<BivariateCdf, CdfError> {
    if n == 0 {
        return Err(CdfError::ZeroFold);
    }
    f.require_valid(eps)?;
    let mut acc = f.clone();
    for _ in 1..n {
        acc = bifree_max_convolve(f, &acc, eps)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootOutcome {
    /// A valid distribution function whose `n`-fold power is the input.
    Root(BivariateCdf),
    /// The candidate broke these axioms.
    NotDivisible(Vec<Violation>),
}

impl RootOutcome {
    pub fn root(&self) -> Option<&BivariateCdf> {
        match self {
            RootOutcome::Root(r) => Some(r),
            RootOutcome::NotDivisible(_) => None,
        }
    }
}

/// The Psi-affine `n`-th root candidate of `F`.
///
/// Marginals are `(F_j + n - 1) / n` and the ratio field `(Psi + n - 1) / n`;
/// an infinite ratio stays infinite (cell value 0) and an undefined one,
/// which only occurs where a marginal vanishes, is taken as 1. The candidate
/// is returned when it validates; otherwise its violations are. No claim is
/// made that this is the only root.
pub fn nth_root(f: &BivariateCdf, n: u32, eps: f64) -> Result<RootOutcome, CdfError> {
    if n == 0 {
        return Err(CdfError::ZeroFold);
    }
    f.require_valid(eps)?;
    if n == 1 {
        return Ok(RootOutcome::Root(f.clone()));
    }
    let k = f64::from(n);
    let lower = |v: f64| (v + (k - 1.0)) / k;
    let (f1, f2) = f.marginals();
    let c1 = UnivariateCdf::new(f1.breaks().to_vec(), f1.values().iter().map(|&v| lower(v)).collect())?;
    let c2 = UnivariateCdf::new(f2.breaks().to_vec(), f2.values().iter().map(|&v| lower(v)).collect())?;
    let candidate = assemble(&c1, &c2, |i, j| {
        let (a, b) = (c1.values()[i], c2.values()[j]);
        match Psi::of(f1.values()[i], f2.values()[j], f.value(i, j)) {
            Psi::Finite(psi) => a * b / lower(psi),
            Psi::Infinite => 0.0,
            Psi::Undefined => a * b,
        }
    })?;
    let violations = candidate.validate(eps);
    Ok(if violations.is_empty() {
        RootOutcome::Root(candidate)
    } else {
        RootOutcome::NotDivisible(violations)
    })
}

/// `sup |H(a x + b, c y + d) - F(x, y)|` over the union of `F`'s grid and
/// the pulled-back grid of `H = nfold(F, n)`.
pub fn max_stable_residual(
    f: &BivariateCdf,
    n: u32,
    norm: &AffineNormalization,
    eps: f64,
) -> Result<f64, CdfError> {
    let h = nfold(f, n, eps)?;
    let moved = affine_transform(&h, norm)?;
    let (a, b) = merge_grids(&moved, f)?;
    Ok(a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
