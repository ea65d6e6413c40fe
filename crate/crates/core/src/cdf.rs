//! Grid-represented distribution functions.
//!
//! A [`UnivariateCdf`] with breaks `b[0] < ... < b[m-1]` and values `v` is the
//! function that is `0` below `b[0]`, `v[i]` on `[b[i], b[i+1])` and `v[m-1]`
//! from `b[m-1]` on. [`BivariateCdf`] uses the same convention on each axis,
//! so `F = 0` as soon as either argument lies below the first break.
//!
//! Constructors only check structure (finite, strictly increasing breaks and
//! matching lengths). The probabilistic axioms are checked by `validate`,
//! which reports violations as data.

use alloc::vec::Vec;
use core::fmt;

/// Default validation tolerance for floating-point CDF values.
pub const DEFAULT_EPS_CDF: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// Position of a violation: a univariate break or a bivariate grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Break(usize),
    Cell(usize, usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Location::Break(i) => write!(f, "index {i}"),
            Location::Cell(i, j) => write!(f, "cell ({i}, {j})"),
        }
    }
}

/// A broken distribution-function axiom.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Value outside `[0, 1]`.
    Range { at: Location, value: f64 },
    /// Value drops below its predecessor along `axis`.
    Monotonicity { at: Location, axis: Axis, drop: f64 },
    /// Value at the last break (or last cell) is not one.
    TotalMass { value: f64 },
    /// Negative mass of the grid cell whose upper-right corner is `at`.
    Rectangle { at: Location, mass: f64 },
    /// `F(s,t) > min(F1(s), F2(t))`.
    FrechetUpper { at: Location, value: f64, bound: f64 },
    /// `F(s,t) < max(0, F1(s) + F2(t) - 1)`.
    FrechetLower { at: Location, value: f64, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range { at, value } => {
                write!(f, "range violation at {at}: value {value} outside [0, 1]")
            }
            Violation::Monotonicity { at, axis, drop } => {
                write!(f, "monotonicity violation at {at} along {axis}: drop of {drop}")
            }
            Violation::TotalMass { value } => {
                write!(f, "total-mass violation: final value {value} != 1")
            }
            Violation::Rectangle { at, mass } => {
                write!(f, "rectangle violation at {at}: cell mass {mass} < 0")
            }
            Violation::FrechetUpper { at, value, bound } => write!(
                f,
                "Frechet upper-bound violation at {at}: value {value} > min of marginals {bound}"
            ),
            Violation::FrechetLower { at, value, bound } => write!(
                f,
                "Frechet lower-bound violation at {at}: value {value} < {bound}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CdfError {
    EmptyGrid,
    LengthMismatch { expected: usize, found: usize },
    /// Breaks must be finite and strictly increasing.
    BadBreaks { axis: Axis, index: usize },
    NonFiniteValue { at: Location },
    /// Input failed validation.
    Invalid(Vec<Violation>),
    /// A fold count of zero.
    ZeroFold,
    NonPositiveScale { axis: Axis, scale: f64 },
    NonFiniteShift { axis: Axis, shift: f64 },
    EmptySamples,
    NonFiniteSample { index: usize },
    /// A trace (probability) outside `[0, 1]`.
    OutOfUnitInterval { value: f64 },
}

impl fmt::Display for CdfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdfError::EmptyGrid => f.write_str("grid has no breakpoints"),
            CdfError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            CdfError::BadBreaks { axis, index } => write!(
                f,
                "{axis} breaks must be finite and strictly increasing (index {index})"
            ),
            CdfError::NonFiniteValue { at } => write!(f, "non-finite CDF value at {at}"),
            CdfError::Invalid(vs) => {
                write!(f, "invalid distribution function ({} violations)", vs.len())?;
                for v in vs {
                    write!(f, "\n  {v}")?;
                }
                Ok(())
            }
            CdfError::ZeroFold => f.write_str("fold count must be at least 1"),
            CdfError::NonPositiveScale { axis, scale } => {
                write!(f, "{axis} scale must be positive, got {scale}")
            }
            CdfError::NonFiniteShift { axis, shift } => {
                write!(f, "{axis} shift must be finite, got {shift}")
            }
            CdfError::EmptySamples => f.write_str("no samples"),
            CdfError::NonFiniteSample { index } => write!(f, "sample {index} is not finite"),
            CdfError::OutOfUnitInterval { value } => {
                write!(f, "trace {value} outside [0, 1]")
            }
        }
    }
}

impl core::error::Error for CdfError {}

fn check_breaks(breaks: &[f64], axis: Axis) -> Result<(), CdfError> {
    if breaks.is_empty() {
        return Err(CdfError::EmptyGrid);
    }
    for (i, b) in breaks.iter().enumerate() {
        if !b.is_finite() || (i > 0 && breaks[i - 1] >= *b) {
            return Err(CdfError::BadBreaks { axis, index: i });
        }
    }
    Ok(())
}

/// Index of the last break `<= s`, or `None` below the grid.
#[inline]
fn step_index(breaks: &[f64], s: f64) -> Option<usize> {
    breaks.partition_point(|b| *b <= s).checked_sub(1)
}

/// Sorted union of two strictly increasing break lists.
pub fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

#[inline]
fn lower_tol(eps: f64, scale: f64) -> f64 {
    // round-off of a handful of operations on values of this magnitude
    eps + 4.0 * f64::EPSILON * scale
}

/// Right-continuous distribution function of a probability measure on the
/// line, stored on a finite breakpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateCdf {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl UnivariateCdf {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self, CdfError> {
        check_breaks(&breaks, Axis::X)?;
        if values.len() != breaks.len() {
            return Err(CdfError::LengthMismatch {
                expected: breaks.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CdfError::NonFiniteValue {
                at: Location::Break(i),
            });
        }
        Ok(Self { breaks, values })
    }

    /// Unit mass at `x`.
    pub fn point_mass(x: f64) -> Result<Self, CdfError> {
        Self::new(alloc::vec![x], alloc::vec![1.0])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breaks.is_empty()
    }

    /// `F(s)`.
    pub fn eval(&self, s: f64) -> f64 {
        step_index(&self.breaks, s).map_or(0.0, |i| self.values[i])
    }

    /// The same function re-expressed on `grid`, which must be finite and
    /// strictly increasing.
    pub fn resample(&self, grid: &[f64]) -> Result<Self, CdfError> {
        let values = grid.iter().map(|&s| self.eval(s)).collect();
        Self::new(grid.to_vec(), values)
    }

    pub fn validate(&self, eps: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            if v < -eps || v > 1.0 + eps {
                out.push(Violation::Range {
                    at: Location::Break(i),
                    value: v,
                });
            }
            if i > 0 && v < self.values[i - 1] - lower_tol(eps, 1.0) {
                out.push(Violation::Monotonicity {
                    at: Location::Break(i),
                    axis: Axis::X,
                    drop: self.values[i - 1] - v,
                });
            }
        }
        let last = self.values[self.values.len() - 1];
        if (last - 1.0).abs() > eps {
            out.push(Violation::TotalMass { value: last });
        }
        out
    }

    pub fn is_valid(&self, eps: f64) -> bool {
        self.validate(eps).is_empty()
    }

    pub(crate) fn require_valid(&self, eps: f64) -> Result<(), CdfError> {
        let v = self.validate(eps);
        if v.is_empty() {
            Ok(())
        } else {
            Err(CdfError::Invalid(v))
        }
    }

    /// Atom masses, one per break.
    pub fn masses(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.values
            .iter()
            .map(|&v| {
                let m = v - prev;
                prev = v;
                m
            })
            .collect()
    }
}

/// Distribution function `F(s,t) = mu((-inf, s] x (-inf, t])` of a probability
/// measure on the plane, stored on a product grid.
///
/// `value(i, j) = F(x_breaks[i], y_breaks[j])`; storage is row-major with one
/// row per x-break.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateCdf {
    x_breaks: Vec<f64>,
    y_breaks: Vec<f64>,
    cdf: Vec<f64>,
}

impl BivariateCdf {
    /// Builds from row-major values, `cdf.len() == x_breaks.len() * y_breaks.len()`.
    pub fn new(x_breaks: Vec<f64>, y_breaks: Vec<f64>, cdf: Vec<f64>) -> Result<Self, CdfError> {
        check_breaks(&x_breaks, Axis::X)?;
        check_breaks(&y_breaks, Axis::Y)?;
        let expected = x_breaks.len() * y_breaks.len();
        if cdf.len() != expected {
            return Err(CdfError::LengthMismatch {
                expected,
                found: cdf.len(),
            });
        }
        let ny = y_breaks.len();
        if let Some(k) = cdf.iter().position(|v| !v.is_finite()) {
            return Err(CdfError::NonFiniteValue {
                at: Location::Cell(k / ny, k % ny),
            });
        }
        Ok(Self {
            x_breaks,
            y_breaks,
            cdf,
        })
    }

    pub fn from_rows(
        x_breaks: Vec<f64>,
        y_breaks: Vec<f64>,
        rows: &[Vec<f64>],
    ) -> Result<Self, CdfError> {
        if rows.len() != x_breaks.len() {
            return Err(CdfError::LengthMismatch {
                expected: x_breaks.len(),
                found: rows.len(),
            });
        }
        let mut cdf = Vec::with_capacity(x_breaks.len() * y_breaks.len());
        for row in rows {
            if row.len() != y_breaks.len() {
                return Err(CdfError::LengthMismatch {
                    expected: y_breaks.len(),
                    found: row.len(),
                });
            }
            cdf.extend_from_slice(row);
        }
        Self::new(x_breaks, y_breaks, cdf)
    }

    pub fn from_fn(
        x_breaks: Vec<f64>,
        y_breaks: Vec<f64>,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, CdfError> {
        let (nx, ny) = (x_breaks.len(), y_breaks.len());
        let mut cdf = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                cdf.push(f(i, j));
            }
        }
        Self::new(x_breaks, y_breaks, cdf)
    }

    /// Unit mass at `(x, y)`.
    pub fn point_mass(x: f64, y: f64) -> Result<Self, CdfError> {
        Self::new(alloc::vec![x], alloc::vec![y], alloc::vec![1.0])
    }

    /// Product of two univariate CDFs (independent coordinates).
    pub fn product(fx: &UnivariateCdf, fy: &UnivariateCdf) -> Result<Self, CdfError> {
        Self::from_fn(fx.breaks.clone(), fy.breaks.clone(), |i, j| {
            fx.values[i] * fy.values[j]
        })
    }

    pub fn x_breaks(&self) -> &[f64] {
        &self.x_breaks
    }

    pub fn y_breaks(&self) -> &[f64] {
        &self.y_breaks
    }

    /// `(rows, columns)` = `(x_breaks.len(), y_breaks.len())`.
    pub fn shape(&self) -> (usize, usize) {
        (self.x_breaks.len(), self.y_breaks.len())
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.cdf[i * self.y_breaks.len() + j]
    }

    /// Row-major values.
    pub fn as_slice(&self) -> &[f64] {
        &self.cdf
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.cdf.chunks(self.y_breaks.len())
    }

    /// `F(s, t)`.
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        match (step_index(&self.x_breaks, s), step_index(&self.y_breaks, t)) {
            (Some(i), Some(j)) => self.value(i, j),
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.cdf[self.cdf.len() - 1]
    }

    /// Marginal CDFs read off the last column and the last row.
    pub fn marginals(&self) -> (UnivariateCdf, UnivariateCdf) {
        let (nx, ny) = self.shape();
        let fx = UnivariateCdf {
            breaks: self.x_breaks.clone(),
            values: (0..nx).map(|i| self.value(i, ny - 1)).collect(),
        };
        let fy = UnivariateCdf {
            breaks: self.y_breaks.clone(),
            values: (0..ny).map(|j| self.value(nx - 1, j)).collect(),
        };
        (fx, fy)
    }

    /// The same function on another grid (right-continuous evaluation).
    pub fn resample(&self, xs: &[f64], ys: &[f64]) -> Result<Self, CdfError> {
        Self::from_fn(xs.to_vec(), ys.to_vec(), |i, j| self.eval(xs[i], ys[j]))
    }

    /// Mass of the grid cell with upper-right corner `(i, j)`.
    pub fn cell_mass(&self, i: usize, j: usize) -> f64 {
        let at = |i: Option<usize>, j: Option<usize>| match (i, j) {
            (Some(i), Some(j)) => self.value(i, j),
            _ => 0.0,
        };
        let (im, jm) = (i.checked_sub(1), j.checked_sub(1));
        (at(Some(i), Some(j)) - at(im, Some(j))) - (at(Some(i), jm) - at(im, jm))
    }

    /// Checks range, monotonicity along rows and columns, the rectangle
    /// inequality on every pair of adjacent rows and columns, total mass and
    /// the Frechet bounds against the marginals.
    pub fn validate(&self, eps: f64) -> Vec<Violation> {
        let (nx, ny) = self.shape();
        let mut out = Vec::new();
        let slack = lower_tol(eps, 1.0);
        for i in 0..nx {
            for j in 0..ny {
                let v = self.value(i, j);
                let at = Location::Cell(i, j);
                if v < -eps || v > 1.0 + eps {
                    out.push(Violation::Range { at, value: v });
                }
                if i > 0 && v < self.value(i - 1, j) - slack {
                    out.push(Violation::Monotonicity {
                        at,
                        axis: Axis::X,
                        drop: self.value(i - 1, j) - v,
                    });
                }
                if j > 0 && v < self.value(i, j - 1) - slack {
                    out.push(Violation::Monotonicity {
                        at,
                        axis: Axis::Y,
                        drop: self.value(i, j - 1) - v,
                    });
                }
                if i > 0 && j > 0 {
                    let mass = self.cell_mass(i, j);
                    if mass < -slack {
                        out.push(Violation::Rectangle { at, mass });
                    }
                }
                let (m1, m2) = (self.value(i, ny - 1), self.value(nx - 1, j));
                let upper = m1.min(m2);
                if v > upper + slack {
                    out.push(Violation::FrechetUpper {
                        at,
                        value: v,
                        bound: upper,
                    });
                }
                let lower = (m1 + m2 - 1.0).max(0.0);
                if v < lower - slack {
                    out.push(Violation::FrechetLower {
                        at,
                        value: v,
                        bound: lower,
                    });
                }
            }
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > eps {
            out.push(Violation::TotalMass { value: total });
        }
        out
    }

    pub fn is_valid(&self, eps: f64) -> bool {
        self.validate(eps).is_empty()
    }

    pub(crate) fn require_valid(&self, eps: f64) -> Result<(), CdfError> {
        let v = self.validate(eps);
        if v.is_empty() {
            Ok(())
        } else {
            Err(CdfError::Invalid(v))
        }
    }
}

/// Checked marginals: rejects an invalid `F`.
pub fn marginals(
    f: &BivariateCdf,
    eps: f64,
) -> Result<(UnivariateCdf, UnivariateCdf), CdfError> {
    f.require_valid(eps)?;
    Ok(f.marginals())
}

/// Re-expresses both CDFs on the union grids. Values at original breakpoints
/// are unchanged and both outputs describe the same measures as the inputs.
pub fn merge_grids(
    f: &BivariateCdf,
    g: &BivariateCdf,
) -> Result<(BivariateCdf, BivariateCdf), CdfError> {
    if f.x_breaks == g.x_breaks && f.y_breaks == g.y_breaks {
        return Ok((f.clone(), g.clone()));
    }
    let xs = merge_breaks(&f.x_breaks, &g.x_breaks);
    let ys = merge_breaks(&f.y_breaks, &g.y_breaks);
    Ok((f.resample(&xs, &ys)?, g.resample(&xs, &ys)?))
}

/// Per-axis affine change of variables `(s, t) -> (a s + b, c t + d)` with
/// `a, c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineNormalization {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl AffineNormalization {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, CdfError> {
        for (axis, scale) in [(Axis::X, a), (Axis::Y, c)] {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(CdfError::NonPositiveScale { axis, scale });
            }
        }
        for (axis, shift) in [(Axis::X, b), (Axis::Y, d)] {
            if !shift.is_finite() {
                return Err(CdfError::NonFiniteShift { axis, shift });
            }
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self {
        a: 1.0,
        b: 0.0,
        c: 1.0,
        d: 0.0,
    };

    /// `(a, b, c, d)`.
    pub fn params(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Normalization with the effect of applying `self` and then `then`.
    pub fn then(&self, then: &Self) -> Self {
        Self {
            a: self.a * then.a,
            b: self.a * then.b + self.b,
            c: self.c * then.c,
            d: self.c * then.d + self.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: 1.0 / self.a,
            b: -self.b / self.a,
            c: 1.0 / self.c,
            d: -self.d / self.c,
        }
    }
}

fn pull_back(breaks: &[f64], scale: f64, shift: f64) -> (Vec<f64>, Vec<usize>) {
    // Rounding may merge neighbouring breaks; the right-most one wins.
    let mut out: Vec<f64> = Vec::with_capacity(breaks.len());
    let mut keep: Vec<usize> = Vec::with_capacity(breaks.len());
    for (k, &x) in breaks.iter().enumerate() {
        let y = (x - shift) / scale;
        if out.last().is_some_and(|&prev| prev >= y) {
            out.pop();
            keep.pop();
        }
        out.push(y);
        keep.push(k);
    }
    (out, keep)
}

/// The CDF `(s, t) -> F(a s + b, c t + d)`: breaks move by `x -> (x - b) / a`
/// and `y -> (y - d) / c`, values are untouched.
pub fn affine_transform(
    f: &BivariateCdf,
    norm: &AffineNormalization,
) -> Result<BivariateCdf, CdfError> {
    let (xs, xi) = pull_back(&f.x_breaks, norm.a, norm.b);
    let (ys, yi) = pull_back(&f.y_breaks, norm.c, norm.d);
    BivariateCdf::from_fn(xs, ys, |i, j| f.value(xi[i], yi[j]))
}

/// Empirical CDF of a point sample. Duplicate coordinates share a break and
/// every value is an integer count divided by the sample size.
pub fn ecdf_from_samples(points: &[(f64, f64)]) -> Result<BivariateCdf, CdfError> {
    if points.is_empty() {
        return Err(CdfError::EmptySamples);
    }
    if let Some(index) = points
        .iter()
        .position(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(CdfError::NonFiniteSample { index });
    }
    let distinct = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let xs = distinct(points.iter().map(|p| p.0).collect());
    let ys = distinct(points.iter().map(|p| p.1).collect());
    let (nx, ny) = (xs.len(), ys.len());

    let mut counts = alloc::vec![0u64; nx * ny];
    for &(x, y) in points {
        let i = xs.partition_point(|b| *b < x);
        let j = ys.partition_point(|b| *b < y);
        counts[i * ny + j] += 1;
    }
    for i in 0..nx {
        for j in 0..ny {
            let mut c = counts[i * ny + j];
            if i > 0 {
                c += counts[(i - 1) * ny + j];
            }
            if j > 0 {
                c += counts[i * ny + j - 1];
            }
            if i > 0 && j > 0 {
                c -= counts[(i - 1) * ny + j - 1];
            }
            counts[i * ny + j] = c;
        }
    }
    let n = points.len() as f64;
    BivariateCdf::new(xs, ys, counts.into_iter().map(|c| c as f64 / n).collect())
}
