//! Transform-side route to the projection-pair formula.
//!
//! For a projection `P` of trace `p` the Cauchy transform is
//! `G_P(z) = (z + p - 1) / (z (z - 1))`, and its inverse `K_P` solves
//! `z K (K - 1) = K + p - 1`. For a commuting pair `(P, Q)` with
//! `phi(PQ) = r` and `delta = r - pq`, the two-variable Cauchy transform and
//! the reduced partial bi-free R-transform
//!
//! ```text
//! R~(z, w) = 1 - z w / G_{P,Q}(K_P(z), K_Q(w)) = delta / ((K_P + p - 1)(K_Q + q - 1) + delta)
//! ```
//!
//! are rational in `K`. R~ is additive over bi-free pairs, which yields the
//! Cauchy transform of `(P + P', Q + Q')` at `(K_{P+P'}(z), K_{Q+Q'}(w))`.
//! Multiplying by `(K_{P+P'} - 2)(K_{Q+Q'} - 2)` and letting `z = w -> inf`
//! along the positive axis extracts the mass of the atom at `(2, 2)`, which is
//! `phi((P ^ P')(Q ^ Q'))`. [`wedge_moment_limit`] follows that path
//! numerically and [`wedge_moment_closed_form`] evaluates the resulting
//! closed form.
//!
//! On the positive real axis `K_P - 1` is computed without cancellation so
//! the ladders can run far out.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::cdf::BivariateCdf;
use crate::sum_minus_one;

/// Tolerance for algebraic identities between closed rational forms.
pub const DEFAULT_EPS_INV: f64 = 1e-10;
/// Two-point stability tolerance for limit ladders.
pub const DEFAULT_EPS_LIM: f64 = 1e-7;

const NEAR_DEGENERATE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    OutOfUnitInterval { name: &'static str, value: f64 },
    /// `r < max(0, p + q - 1)`.
    FrechetLower { r: f64, bound: f64 },
    /// `r > min(p, q)`.
    FrechetUpper { r: f64, bound: f64 },
    NonFinite,
    Pole { at: Complex64 },
    /// `z` sits on the cut of the square root defining `K`.
    BranchUndefined { z: Complex64 },
    InfiniteArgument,
    NonPositive { name: &'static str, value: f64 },
    /// No bracket for the inverse Cauchy transform at this point.
    OutOfRange { at: f64 },
    /// Ladder of `(argument, value)` pairs that never stabilised.
    NonConvergence { trace: Vec<(f64, f64)> },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::OutOfUnitInterval { name, value } => {
                write!(f, "{name} = {value} outside [0, 1]")
            }
            OracleError::FrechetLower { r, bound } => write!(
                f,
                "Frechet lower bound violated: r = {r} < max(0, p + q - 1) = {bound}"
            ),
            OracleError::FrechetUpper { r, bound } => {
                write!(f, "Frechet upper bound violated: r = {r} > min(p, q) = {bound}")
            }
            OracleError::NonFinite => f.write_str("non-finite argument"),
            OracleError::Pole { at } => write!(f, "pole at {at}"),
            OracleError::BranchUndefined { z } => {
                write!(f, "inverse Cauchy transform branch undefined at {z}")
            }
            OracleError::InfiniteArgument => f.write_str("argument at infinity"),
            OracleError::NonPositive { name, value } => {
                write!(f, "{name} must be positive, got {value}")
            }
            OracleError::OutOfRange { at } => {
                write!(f, "cannot invert the Cauchy transform at {at}")
            }
            OracleError::NonConvergence { trace } => {
                write!(f, "limit did not stabilise; trace:")?;
                for (x, v) in trace {
                    write!(f, " ({x:e}, {v})")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexPoint {
    Finite(Complex64),
    Infinity,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint::Finite(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            ComplexPoint::Finite(z) => Some(z),
            ComplexPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ComplexPoint::Infinity)
    }
}

impl From<f64> for ComplexPoint {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        ComplexPoint::Finite(z)
    }
}

/// Law of a commuting projection pair: `p = phi(P)`, `q = phi(Q)`,
/// `r = phi(PQ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPairLaw {
    p: f64,
    q: f64,
    r: f64,
}

fn unit(name: &'static str, value: f64) -> Result<f64, OracleError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(OracleError::OutOfUnitInterval { name, value })
    }
}

impl ProjectionPairLaw {
    /// Requires `p, q` in `[0, 1]` and `max(0, p + q - 1) <= r <= min(p, q)`,
    /// i.e. the four atoms `1 - p - q + r`, `p - r`, `q - r`, `r` are
    /// non-negative.
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self, OracleError> {
        unit("p", p)?;
        unit("q", q)?;
        if !r.is_finite() {
            return Err(OracleError::NonFinite);
        }
        let slack = 4.0 * f64::EPSILON;
        let lower = sum_minus_one(p, q).max(0.0);
        if r < lower - slack {
            return Err(OracleError::FrechetLower { r, bound: lower });
        }
        let upper = p.min(q);
        if r > upper + slack {
            return Err(OracleError::FrechetUpper { r, bound: upper });
        }
        Ok(Self { p, q, r })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `r - pq`; zero exactly when `P` and `Q` are classically independent.
    pub fn delta(&self) -> f64 {
        self.r - self.p * self.q
    }

    /// `r` within `1e-12` of a Frechet bound. Such laws are accepted; limit
    /// ladders may converge more slowly.
    pub fn is_near_degenerate(&self) -> bool {
        let lower = sum_minus_one(self.p, self.q).max(0.0);
        let upper = self.p.min(self.q);
        (self.r - lower).abs() < NEAR_DEGENERATE || (upper - self.r).abs() < NEAR_DEGENERATE
    }

    /// Atoms `(x, y, mass)` of the joint law of `(P, Q)` on `{0, 1}^2`.
    pub fn atoms(&self) -> [(f64, f64, f64); 4] {
        let (p, q, r) = (self.p, self.q, self.r);
        [
            (0.0, 0.0, 1.0 - p - q + r),
            (1.0, 0.0, p - r),
            (0.0, 1.0, q - r),
            (1.0, 1.0, r),
        ]
    }

    /// Distribution function of `(P, Q)` on `{0, 1}^2`.
    pub fn joint_cdf(&self) -> BivariateCdf {
        let (p, q, r) = (self.p, self.q, self.r);
        let corner = (1.0 - p - q + r).max(0.0);
        BivariateCdf::from_rows(
            alloc::vec![0.0, 1.0],
            alloc::vec![0.0, 1.0],
            &[alloc::vec![corner, 1.0 - p], alloc::vec![1.0 - q, 1.0]],
        )
        .expect("fixed 2x2 grid")
    }

    /// Distribution function of `(1 - P, 1 - Q)`. Its values on `[0, 1)^2`
    /// are `F1 = p`, `F2 = q`, `F = r`: the spectral projections of `1 - P`
    /// and `1 - Q` for `(-inf, s]` with `s` in `[0, 1)` are `P` and `Q`.
    /// Convolving two of these reproduces the meet traces at that cell.
    pub fn indicator_cdf(&self) -> BivariateCdf {
        BivariateCdf::from_rows(
            alloc::vec![0.0, 1.0],
            alloc::vec![0.0, 1.0],
            &[alloc::vec![self.r, self.p], alloc::vec![self.q, 1.0]],
        )
        .expect("fixed 2x2 grid")
    }
}

fn finite_arg(z: ComplexPoint) -> Result<Option<Complex64>, OracleError> {
    match z {
        ComplexPoint::Infinity => Ok(None),
        ComplexPoint::Finite(z) if z.re.is_finite() && z.im.is_finite() => Ok(Some(z)),
        ComplexPoint::Finite(_) => Err(OracleError::NonFinite),
    }
}

fn not_pole(z: Complex64) -> Result<Complex64, OracleError> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        Err(OracleError::Pole { at: z })
    } else {
        Ok(z)
    }
}

/// `G_P(z) = p / (z - 1) + (1 - p) / z`; `G_P(inf) = 0`.
pub fn cauchy_projection(z: ComplexPoint, p: f64) -> Result<ComplexPoint, OracleError> {
    unit("p", p)?;
    let Some(z) = finite_arg(z)? else {
        return Ok(ComplexPoint::real(0.0));
    };
    let z = not_pole(z)?;
    Ok(((z + (p - 1.0)) / (z * (z - 1.0))).into())
}

/// `K_P(z) - 1` for finite non-zero `z`.
///
/// The quadratic `z u^2 + (z - 1) u - p = 0` in `u = K - 1` has
/// discriminant `(z - 1)^2 + 4 z p`. The square root is taken aligned with
/// `z + 1`, which on `(0, inf)` picks the root with `K > 1` and `z K -> 1` as
/// `z -> 0`. Of the two algebraically equal expressions for `u` the one
/// without cancellation is used.
fn k_minus_one(z: Complex64, p: f64) -> Result<Complex64, OracleError> {
    if p == 0.0 {
        return Ok(z.inv() - 1.0);
    }
    let disc = (z - 1.0) * (z - 1.0) + z * (4.0 * p);
    let mut s = disc.sqrt();
    let align = (s * (z + 1.0).conj()).re;
    if align < 0.0 {
        s = -s;
    } else if align == 0.0 && s.norm() > 0.0 {
        return Err(OracleError::BranchUndefined { z });
    }
    let big = (z - 1.0) + s;
    let small = (-(z - 1.0)) + s;
    Ok(if big.norm() >= small.norm() {
        (2.0 * p) / big
    } else {
        small / (2.0 * z)
    })
}

/// Real positive-axis version of [`k_minus_one`].
fn k_minus_one_real(z: f64, p: f64) -> f64 {
    if p == 0.0 {
        return 1.0 / z - 1.0;
    }
    let s = libm::sqrt((z - 1.0) * (z - 1.0) + 4.0 * z * p);
    if z >= 1.0 {
        2.0 * p / ((z - 1.0) + s)
    } else {
        ((1.0 - z) + s) / (2.0 * z)
    }
}

/// Inverse Cauchy transform `K_P`, with `K_P(0) = inf`. For `p = 0` the
/// branch is `1/z` everywhere; otherwise see the branch rule above.
pub fn k_projection(z: ComplexPoint, p: f64) -> Result<ComplexPoint, OracleError> {
    unit("p", p)?;
    let Some(z) = finite_arg(z)? else {
        return Err(OracleError::InfiniteArgument);
    };
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ComplexPoint::Infinity);
    }
    Ok((k_minus_one(z, p)? + 1.0).into())
}

/// `G_{P,Q}(z, w) = ((z + p - 1)(w + q - 1) + delta) / (z w (z - 1)(w - 1))`.
pub fn cauchy_pair(
    z: ComplexPoint,
    w: ComplexPoint,
    law: &ProjectionPairLaw,
) -> Result<ComplexPoint, OracleError> {
    let (Some(z), Some(w)) = (finite_arg(z)?, finite_arg(w)?) else {
        return Ok(ComplexPoint::real(0.0));
    };
    let (z, w) = (not_pole(z)?, not_pole(w)?);
    let num = (z + (law.p - 1.0)) * (w + (law.q - 1.0)) + law.delta();
    Ok((num / (z * w * (z - 1.0) * (w - 1.0))).into())
}

/// `G_{P,Q}` as the sum over the four atoms of `(P, Q)`.
pub fn cauchy_pair_atoms(
    z: ComplexPoint,
    w: ComplexPoint,
    law: &ProjectionPairLaw,
) -> Result<ComplexPoint, OracleError> {
    let (Some(z), Some(w)) = (finite_arg(z)?, finite_arg(w)?) else {
        return Ok(ComplexPoint::real(0.0));
    };
    let (z, w) = (not_pole(z)?, not_pole(w)?);
    let sum = law
        .atoms()
        .iter()
        .map(|&(x, y, m)| m / ((z - x) * (w - y)))
        .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t);
    Ok(sum.into())
}

/// Reduced partial bi-free R-transform of a projection pair, closed form
/// `delta / ((K_P(z) + p - 1)(K_Q(w) + q - 1) + delta)`. Exactly zero when
/// `delta = 0` or either `K` is infinite.
pub fn r_tilde_pair(
    z: ComplexPoint,
    w: ComplexPoint,
    law: &ProjectionPairLaw,
) -> Result<ComplexPoint, OracleError> {
    let (kz, kw) = (k_projection(z, law.p)?, k_projection(w, law.q)?);
    let delta = law.delta();
    let (Some(kz), Some(kw)) = (kz.finite(), kw.finite()) else {
        return Ok(ComplexPoint::real(0.0));
    };
    if delta == 0.0 {
        return Ok(ComplexPoint::real(0.0));
    }
    let (uz, uw) = (kz - 1.0, kw - 1.0);
    let den = (uz + law.p) * (uw + law.q) + delta;
    if den == Complex64::new(0.0, 0.0) {
        return Ok(ComplexPoint::Infinity);
    }
    Ok((delta / den).into())
}

/// `1 - z w / G_{P,Q}(K_P(z), K_Q(w))`, the defining expression of R~.
pub fn r_tilde_by_definition(
    z: ComplexPoint,
    w: ComplexPoint,
    law: &ProjectionPairLaw,
) -> Result<ComplexPoint, OracleError> {
    let (Some(zf), Some(wf)) = (finite_arg(z)?, finite_arg(w)?) else {
        return Err(OracleError::InfiniteArgument);
    };
    let (kz, kw) = (k_projection(z, law.p)?, k_projection(w, law.q)?);
    if kz.is_infinite() || kw.is_infinite() {
        return Err(OracleError::InfiniteArgument);
    }
    let g = cauchy_pair(kz, kw, law)?
        .finite()
        .ok_or(OracleError::InfiniteArgument)?;
    Ok((Complex64::new(1.0, 0.0) - zf * wf / g).into())
}

fn positive(name: &'static str, value: f64) -> Result<f64, OracleError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OracleError::NonPositive { name, value })
    }
}

/// `delta / (delta + (K_P + p - 1)(K_Q + q - 1))`, with the `delta = 0` case
/// returning exactly zero.
fn r_tilde_real(u_z: f64, u_w: f64, law: &ProjectionPairLaw) -> f64 {
    let delta = law.delta();
    if delta == 0.0 {
        0.0
    } else {
        delta / (delta + (u_z + law.p) * (u_w + law.q))
    }
}

/// For bi-free projection pairs with laws `law` and `law2` and real
/// `z, w > 0`:
///
/// ```text
/// (K_P + K_P' - 1/z - 2)(K_Q + K_Q' - 1/w - 2) z w / (1 - R~_{P,Q}(z,w) - R~_{P',Q'}(z,w))
/// ```
///
/// which equals `(K_{P+P'}(z) - 2)(K_{Q+Q'}(w) - 2) G_{P+P',Q+Q'}(K_{P+P'}(z), K_{Q+Q'}(w))`.
/// All four traces `p, q, p', q'` must be positive.
pub fn combined_expression(
    z: f64,
    w: f64,
    law: &ProjectionPairLaw,
    law2: &ProjectionPairLaw,
) -> Result<f64, OracleError> {
    positive("p", law.p)?;
    positive("q", law.q)?;
    positive("p'", law2.p)?;
    positive("q'", law2.q)?;
    positive("z", z)?;
    positive("w", w)?;
    let (up, up2) = (k_minus_one_real(z, law.p), k_minus_one_real(z, law2.p));
    let (uq, uq2) = (k_minus_one_real(w, law.q), k_minus_one_real(w, law2.q));
    let first = z * up + z * up2 - 1.0;
    let second = w * uq + w * uq2 - 1.0;
    let rest = 1.0 - r_tilde_real(up, uq, law) - r_tilde_real(up2, uq2, law2);
    Ok(first * second / rest)
}

/// A limit estimate with the ladder that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    /// `(argument, evaluation)` pairs in ladder order.
    pub trace: Vec<(f64, f64)>,
}

/// Smallest and largest decimal exponents of the `z = w = 10^k` ladder. The
/// ladder always reaches `10^7` and extends until two consecutive values
/// agree.
const WEDGE_LADDER: (i32, i32, i32) = (2, 7, 12);

fn degenerate(law: &ProjectionPairLaw, law2: &ProjectionPairLaw) -> Option<(f64, f64)> {
    let a = sum_minus_one(law.p, law2.p).max(0.0);
    let b = sum_minus_one(law.q, law2.q).max(0.0);
    if a > 0.0 && b > 0.0 && law.r > 0.0 && law2.r > 0.0 {
        Some((a, b))
    } else {
        None
    }
}

/// `phi((P ^ P')(Q ^ Q'))` as the limit of [`combined_expression`] along
/// `z = w = 10^k`. Returns exactly zero when `p + p' <= 1`, `q + q' <= 1`,
/// `r = 0` or `r' = 0`.
pub fn wedge_moment_limit(
    law: &ProjectionPairLaw,
    law2: &ProjectionPairLaw,
    eps_lim: f64,
) -> Result<LimitEstimate, OracleError> {
    if degenerate(law, law2).is_none() {
        return Ok(LimitEstimate {
            value: 0.0,
            trace: Vec::new(),
        });
    }
    let (first, min_last, max_last) = WEDGE_LADDER;
    let mut trace: Vec<(f64, f64)> = Vec::new();
    for k in first..=max_last {
        let t = libm::pow(10.0, f64::from(k));
        let v = combined_expression(t, t, law, law2)?;
        let stable = trace
            .last()
            .is_some_and(|&(_, prev)| (v - prev).abs() <= eps_lim);
        trace.push((t, v));
        if k >= min_last && stable {
            return Ok(LimitEstimate { value: v, trace });
        }
    }
    Err(OracleError::NonConvergence { trace })
}

/// Closed form of the meet moment:
/// `(p + p' - 1)(q + q' - 1) / (pq/r + p'q'/r' - 1)`, or zero when any of
/// `(p + p' - 1)_+`, `(q + q' - 1)_+`, `r`, `r'` vanishes.
pub fn wedge_moment_closed_form(law: &ProjectionPairLaw, law2: &ProjectionPairLaw) -> f64 {
    match degenerate(law, law2) {
        Some((a, b)) => {
            let psi = law.p * law.q / law.r;
            let psi2 = law2.p * law2.q / law2.r;
            a * b / sum_minus_one(psi, psi2)
        }
        None => 0.0,
    }
}

/// Number of halvings in the [`atom_mass_limit`] ladder.
pub const ATOM_LADDER_STEPS: i32 = 30;

/// Mass of the atom at `top` of a plane measure supported in
/// `(-inf, top.0] x (-inf, top.1]`, from its Cauchy transform `g`:
/// the limit of `(z - top.0)(w - top.1) g(z, w)` along
/// `z = top.0 + scale 2^-n`, `w = top.1 + scale 2^-n`, `n = 1..=30`.
/// The last two evaluations must agree within `eps_lim`.
pub fn atom_mass_limit<G>(
    mut g: G,
    top: (f64, f64),
    scale: f64,
    eps_lim: f64,
) -> Result<LimitEstimate, OracleError>
where
    G: FnMut(f64, f64) -> Result<f64, OracleError>,
{
    positive("scale", scale)?;
    if !top.0.is_finite() || !top.1.is_finite() {
        return Err(OracleError::NonFinite);
    }
    let mut trace = Vec::with_capacity(ATOM_LADDER_STEPS as usize);
    for n in 1..=ATOM_LADDER_STEPS {
        let h = scale * libm::pow(2.0, -f64::from(n));
        let (z, w) = (top.0 + h, top.1 + h);
        let (dz, dw) = (z - top.0, w - top.1);
        if dz <= 0.0 || dw <= 0.0 {
            break;
        }
        trace.push((h, dz * dw * g(z, w)?));
    }
    match trace.as_slice() {
        [.., (_, a), (_, b)] if (b - a).abs() <= eps_lim => Ok(LimitEstimate { value: *b, trace }),
        _ => Err(OracleError::NonConvergence { trace }),
    }
}

/// Cauchy transform `sum m / ((z - x)(w - y))` of a finite atomic measure
/// given as `(x, y, mass)` triples.
pub fn discrete_cauchy(atoms: &[(f64, f64, f64)], z: f64, w: f64) -> Result<f64, OracleError> {
    atoms.iter().try_fold(0.0, |acc, &(x, y, m)| {
        let d = (z - x) * (w - y);
        if d == 0.0 {
            Err(OracleError::Pole {
                at: Complex64::new(z, w),
            })
        } else {
            Ok(acc + m / d)
        }
    })
}

/// Cauchy transform of `(P + P', Q + Q')` for bi-free projection pairs,
/// assembled from the additivity of R~:
/// `G(K_{P+P'}(x), K_{Q+Q'}(y)) = x y / (1 - R~(x, y) - R~'(x, y))`.
/// Evaluation at real `(z, w)` above `(2, 2)` inverts `K_{P+P'}` and
/// `K_{Q+Q'}` numerically on the positive axis.
#[derive(Debug, Clone, Copy)]
pub struct SumPairCauchy {
    law: ProjectionPairLaw,
    law2: ProjectionPairLaw,
}

impl SumPairCauchy {
    /// All four traces must be positive so that `K` is defined on `(0, inf)`.
    pub fn new(law: ProjectionPairLaw, law2: ProjectionPairLaw) -> Result<Self, OracleError> {
        positive("p", law.p)?;
        positive("q", law.q)?;
        positive("p'", law2.p)?;
        positive("q'", law2.q)?;
        Ok(Self { law, law2 })
    }

    /// `G_{P+P'}(z)` on `z > 2`: the `x > 0` with `K_P(x) + K_P'(x) - 1/x = z`.
    fn invert_sum(p: f64, p2: f64, z: f64) -> Result<f64, OracleError> {
        let d = z - 2.0;
        if !(d.is_finite() && d > 0.0) {
            return Err(OracleError::OutOfRange { at: z });
        }
        // x (K_{P+P'}(x) - 2 - d), positive near 0 and eventually negative
        let excess =
            |x: f64| x * k_minus_one_real(x, p) + x * k_minus_one_real(x, p2) - 1.0 - d * x;
        let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
        let mut guard = 0;
        while excess(lo) <= 0.0 {
            lo *= 0.5;
            guard += 1;
            if guard > 2000 {
                return Err(OracleError::OutOfRange { at: z });
            }
        }
        while excess(hi) > 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 2000 {
                return Err(OracleError::OutOfRange { at: z });
            }
        }
        for _ in 0..200 {
            let mid = libm::sqrt(lo * hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if excess(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(libm::sqrt(lo * hi))
    }

    pub fn eval(&self, z: f64, w: f64) -> Result<f64, OracleError> {
        let x = Self::invert_sum(self.law.p, self.law2.p, z)?;
        let y = Self::invert_sum(self.law.q, self.law2.q, w)?;
        let rest = 1.0
            - r_tilde_real(
                k_minus_one_real(x, self.law.p),
                k_minus_one_real(y, self.law.q),
                &self.law,
            )
            - r_tilde_real(
                k_minus_one_real(x, self.law2.p),
                k_minus_one_real(y, self.law2.q),
                &self.law2,
            );
        Ok(x * y / rest)
    }
}
