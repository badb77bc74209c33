//! Symbolic catalog of positive scalar functions on `(0, ∞)`.
//!
//! The catalog is closed under the transforms used throughout the
//! inequality suites: transpose `t·f(1/t)`, adjoint `f(1/t)^{-1}`, dual
//! `t/f(t)`, multiplication by integer powers `t^n·f(t)`, the
//! substitution `f(t^{1/p})^p`, affine combinations, and numeric
//! inversion of `t^n·f(t)`. Each descriptor can report its boundary
//! limits (`f(0⁺)`, `f'(∞)`, …) so singular-limit code knows when a
//! finite extension to `[0, ∞)` exists.
//!
//! Classification (power monotonicity, geometric convexity, operator
//! monotonicity/convexity on sampled low-dimensional pairs) is
//! grid/sample evidence, never proof; failing flags always carry a
//! re-checkable witness.

use std::fmt;

use crate::error::{Error, Result};
use crate::matcore::SymMatrix;
use crate::randgen::{self, TrialSpec, TrialStructure};

/// One atom of a geodesic-mean combination `Σ wᵢ t^{αᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicAtom {
    /// Exponent in `[0, 1]`.
    pub alpha: f64,
    /// Positive weight; weights sum to 1.
    pub weight: f64,
}

/// Symbolic descriptor of a positive function on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    /// `t^α`.
    Power(f64),
    /// `(1−w) + w·t`, `w ∈ [0,1]`.
    WeightedArith(f64),
    /// `((1−w) + w·t^{−1})^{−1} = t / ((1−w)t + w)`, `w ∈ [0,1]`.
    WeightedHarm(f64),
    /// `Σ wᵢ t^{αᵢ}` with `αᵢ ∈ [0,1]`, `wᵢ > 0`, `Σ wᵢ = 1`.
    Geodesic(Vec<GeodesicAtom>),
    /// `(t−1)/log t`, continued by 1 at `t = 1`.
    LogMean,
    /// `(t^α + t^{1−α})/2`.
    HalfSum(f64),
    /// Transpose `t·f(1/t)`.
    Transpose(Box<ScalarFn>),
    /// Adjoint `f(1/t)^{−1}`.
    Adjoint(Box<ScalarFn>),
    /// Dual `t/f(t)`.
    Dual(Box<ScalarFn>),
    /// `t^n · f(t)`, `n ≥ 1`.
    TPowTimes(u32, Box<ScalarFn>),
    /// `f(t^{1/p})^p`, `p > 0`.
    Subst(f64, Box<ScalarFn>),
    /// `a + b·t + c·f(t)`.
    Affine {
        a: f64,
        b: f64,
        c: f64,
        inner: Box<ScalarFn>,
    },
    /// Functional inverse of `t ↦ t^n·f(t)` (requires that map to be
    /// strictly increasing), evaluated by bracketing + bisection.
    NumericInverse(u32, Box<ScalarFn>),
}

/// Threshold below which `|t − 1|` switches the log-mean to its Taylor
/// form, avoiding cancellation in `(t−1)/log t`.
const LOG_MEAN_TAYLOR_BAND: f64 = 1e-4;

impl ScalarFn {
    /// `t^α`.
    pub fn power(alpha: f64) -> Self {
        ScalarFn::Power(alpha)
    }

    /// The constant function 1.
    pub fn one() -> Self {
        ScalarFn::Power(0.0)
    }

    /// Weighted arithmetic mean `(1−w) + w·t`.
    pub fn weighted_arith(w: f64) -> Result<Self> {
        check_weight(w)?;
        Ok(ScalarFn::WeightedArith(w))
    }

    /// Weighted harmonic mean `((1−w) + w/t)^{−1}`.
    pub fn weighted_harm(w: f64) -> Result<Self> {
        check_weight(w)?;
        Ok(ScalarFn::WeightedHarm(w))
    }

    /// Geodesic-mean combination `Σ wᵢ t^{αᵢ}`.
    pub fn geodesic(atoms: Vec<GeodesicAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::DomainViolation("geodesic needs at least one atom".into()));
        }
        let mut total = 0.0;
        for atom in &atoms {
            if !(0.0..=1.0).contains(&atom.alpha) {
                return Err(Error::DomainViolation(format!(
                    "geodesic exponent {} outside [0,1]",
                    atom.alpha
                )));
            }
            if atom.weight <= 0.0 {
                return Err(Error::DomainViolation(format!(
                    "geodesic weight {} not positive",
                    atom.weight
                )));
            }
            total += atom.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::DomainViolation(format!(
                "geodesic weights sum to {total}, expected 1"
            )));
        }
        Ok(ScalarFn::Geodesic(atoms))
    }

    /// `(t−1)/log t`.
    pub fn log_mean() -> Self {
        ScalarFn::LogMean
    }

    /// `(t^α + t^{1−α})/2`.
    pub fn half_sum(alpha: f64) -> Self {
        ScalarFn::HalfSum(alpha)
    }

    /// Transpose transform `t·f(1/t)`.
    pub fn transpose(f: ScalarFn) -> Self {
        ScalarFn::Transpose(Box::new(f))
    }

    /// Adjoint transform `f(1/t)^{−1}`.
    pub fn adjoint(f: ScalarFn) -> Self {
        ScalarFn::Adjoint(Box::new(f))
    }

    /// Dual transform `t/f(t)`.
    pub fn dual(f: ScalarFn) -> Self {
        ScalarFn::Dual(Box::new(f))
    }

    /// `t^n · f(t)` with `n ≥ 1`.
    pub fn t_pow_times(n: u32, f: ScalarFn) -> Result<Self> {
        if n == 0 {
            return Err(Error::DomainViolation("t-power factor needs n >= 1".into()));
        }
        Ok(ScalarFn::TPowTimes(n, Box::new(f)))
    }

    /// Substitution `f(t^{1/p})^p`, `p > 0`.
    pub fn subst(p: f64, f: ScalarFn) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::DomainViolation(format!("subst exponent {p} must be > 0")));
        }
        Ok(ScalarFn::Subst(p, Box::new(f)))
    }

    /// Affine combination `a + b·t + c·f(t)`.
    pub fn affine(a: f64, b: f64, c: f64, inner: ScalarFn) -> Self {
        ScalarFn::Affine {
            a,
            b,
            c,
            inner: Box::new(inner),
        }
    }

    /// Functional inverse of `t ↦ t^n·f(t)`.
    pub fn numeric_inverse(n: u32, f: ScalarFn) -> Self {
        ScalarFn::NumericInverse(n, Box::new(f))
    }

    /// Pointwise reciprocal `1/f(t)`, expressed inside the catalog as
    /// `dual(t·f)`, since `t / (t·f(t)) = 1/f(t)`.
    pub fn reciprocal(f: ScalarFn) -> Result<Self> {
        Ok(ScalarFn::dual(ScalarFn::t_pow_times(1, f)?))
    }

    /// Argument reflection `f(1/t)`, expressed inside the catalog as
    /// `dual(t·adjoint(f))`, since `t / (t·f(1/t)^{−1}) = f(1/t)`.
    pub fn arg_reciprocal(f: ScalarFn) -> Result<Self> {
        Ok(ScalarFn::dual(ScalarFn::t_pow_times(1, ScalarFn::adjoint(f))?))
    }

    /// Evaluates the function at `t > 0` (or at `t = 0` when a finite
    /// extension exists).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::DomainViolation(format!("non-finite argument {t}")));
        }
        if t < 0.0 {
            return Err(Error::DomainViolation(format!("argument {t} is negative")));
        }
        if t == 0.0 {
            return self.value_at_zero().ok_or_else(|| {
                Error::DomainViolation(format!("{self} has no finite extension at 0"))
            });
        }
        let v = match self {
            ScalarFn::Power(a) => t.powf(*a),
            ScalarFn::WeightedArith(w) => (1.0 - w) + w * t,
            ScalarFn::WeightedHarm(w) => t / ((1.0 - w) * t + w),
            ScalarFn::Geodesic(atoms) => atoms
                .iter()
                .map(|atom| atom.weight * t.powf(atom.alpha))
                .sum(),
            ScalarFn::LogMean => {
                let d = t - 1.0;
                if d.abs() < LOG_MEAN_TAYLOR_BAND {
                    1.0 + d / 2.0 - d * d / 12.0
                } else {
                    d / t.ln()
                }
            }
            ScalarFn::HalfSum(a) => 0.5 * (t.powf(*a) + t.powf(1.0 - a)),
            ScalarFn::Transpose(f) => t * f.eval(1.0 / t)?,
            ScalarFn::Adjoint(f) => 1.0 / f.eval(1.0 / t)?,
            ScalarFn::Dual(f) => t / f.eval(t)?,
            ScalarFn::TPowTimes(n, f) => t.powi(*n as i32) * f.eval(t)?,
            ScalarFn::Subst(p, f) => f.eval(t.powf(1.0 / p))?.powf(*p),
            ScalarFn::Affine { a, b, c, inner } => a + b * t + c * inner.eval(t)?,
            ScalarFn::NumericInverse(n, f) => inverse_monotone(*n, f, t)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::DomainViolation(format!(
                "{self} evaluated at {t} is not finite"
            )))
        }
    }

    /// `f(0⁺)` when finite.
    pub fn value_at_zero(&self) -> Option<f64> {
        finite(self.limit_at_zero())
    }

    /// `f'(∞) = lim_{t→∞} f(t)/t` when finite.
    pub fn slope_at_infinity(&self) -> Option<f64> {
        finite(self.limit_ratio_at_infinity())
    }

    /// `lim_{t→0⁺} f(t)` in `[0, ∞]`; NaN when the recursion cannot
    /// settle the limit.
    pub fn limit_at_zero(&self) -> f64 {
        match self {
            ScalarFn::Power(a) => power_limit_at_zero(*a),
            ScalarFn::WeightedArith(w) => 1.0 - w,
            ScalarFn::WeightedHarm(w) => {
                if *w > 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            ScalarFn::Geodesic(atoms) => atoms
                .iter()
                .map(|atom| if atom.alpha == 0.0 { atom.weight } else { 0.0 })
                .sum(),
            ScalarFn::LogMean => 0.0,
            ScalarFn::HalfSum(a) => {
                0.5 * ext_add(power_limit_at_zero(*a), power_limit_at_zero(1.0 - a))
            }
            ScalarFn::Transpose(f) => f.limit_ratio_at_infinity(),
            ScalarFn::Adjoint(f) => ext_recip(f.limit_at_infinity()),
            ScalarFn::Dual(f) => ext_recip(f.limit_ratio_at_zero()),
            ScalarFn::TPowTimes(_, f) => {
                if f.limit_at_zero().is_finite() {
                    0.0
                } else {
                    f64::NAN
                }
            }
            ScalarFn::Subst(p, f) => ext_pow(f.limit_at_zero(), *p),
            ScalarFn::Affine { a, c, inner, .. } => {
                let l = inner.limit_at_zero();
                if l.is_finite() {
                    nonneg_or_nan(a + c * l)
                } else if *c == 0.0 {
                    nonneg_or_nan(*a)
                } else {
                    f64::NAN
                }
            }
            ScalarFn::NumericInverse(n, f) => {
                // t^n f(t) → 0 at 0 forces the inverse to 0 as well.
                let l = f.limit_at_zero();
                if (*n >= 1 && l.is_finite()) || l == 0.0 {
                    0.0
                } else {
                    f64::NAN
                }
            }
        }
    }

    /// `lim_{t→0⁺} f(t)/t` in `[0, ∞]` (NaN when unknown).
    pub fn limit_ratio_at_zero(&self) -> f64 {
        match self {
            ScalarFn::Power(a) => power_limit_at_zero(a - 1.0),
            ScalarFn::WeightedArith(w) => {
                if *w < 1.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
            ScalarFn::WeightedHarm(w) => ext_recip(*w),
            ScalarFn::Geodesic(atoms) => atoms
                .iter()
                .map(|atom| ext_mul_weight(atom.weight, power_limit_at_zero(atom.alpha - 1.0)))
                .fold(0.0, ext_add),
            ScalarFn::LogMean => f64::INFINITY,
            ScalarFn::HalfSum(a) => 0.5
                * ext_add(
                    power_limit_at_zero(a - 1.0),
                    power_limit_at_zero(-a),
                ),
            ScalarFn::Transpose(f) => f.limit_at_infinity(),
            ScalarFn::Adjoint(f) => ext_recip(f.limit_ratio_at_infinity()),
            ScalarFn::Dual(f) => ext_recip(f.limit_at_zero()),
            ScalarFn::TPowTimes(n, f) => {
                if *n == 1 {
                    f.limit_at_zero()
                } else if f.limit_at_zero().is_finite() {
                    0.0
                } else {
                    f64::NAN
                }
            }
            ScalarFn::Subst(p, f) => ext_pow(f.limit_ratio_at_zero(), *p),
            ScalarFn::Affine { a, b, c, inner } => {
                let at_zero = self.limit_at_zero();
                if at_zero.is_nan() {
                    f64::NAN
                } else if at_zero > 0.0 {
                    f64::INFINITY
                } else if *a == 0.0 {
                    let r = inner.limit_ratio_at_zero();
                    if r.is_finite() {
                        nonneg_or_nan(b + c * r)
                    } else if *c == 0.0 {
                        nonneg_or_nan(*b)
                    } else {
                        f64::NAN
                    }
                } else {
                    f64::NAN
                }
            }
            ScalarFn::NumericInverse(_, _) => f64::NAN,
        }
    }

    /// `lim_{t→∞} f(t)` in `[0, ∞]` (NaN when unknown).
    pub fn limit_at_infinity(&self) -> f64 {
        match self {
            ScalarFn::Power(a) => power_limit_at_infinity(*a),
            ScalarFn::WeightedArith(w) => {
                if *w > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
            ScalarFn::WeightedHarm(w) => {
                if *w < 1.0 {
                    1.0 / (1.0 - w)
                } else {
                    f64::INFINITY
                }
            }
            ScalarFn::Geodesic(atoms) => atoms
                .iter()
                .map(|atom| ext_mul_weight(atom.weight, power_limit_at_infinity(atom.alpha)))
                .fold(0.0, ext_add),
            ScalarFn::LogMean => f64::INFINITY,
            ScalarFn::HalfSum(a) => 0.5
                * ext_add(power_limit_at_infinity(*a), power_limit_at_infinity(1.0 - a)),
            ScalarFn::Transpose(f) => f.limit_ratio_at_zero(),
            ScalarFn::Adjoint(f) => ext_recip(f.limit_at_zero()),
            ScalarFn::Dual(f) => ext_recip(f.limit_ratio_at_infinity()),
            ScalarFn::TPowTimes(_, f) => {
                let l = f.limit_at_infinity();
                if l.is_nan() || l > 0.0 {
                    if l.is_nan() {
                        f64::NAN
                    } else {
                        f64::INFINITY
                    }
                } else {
                    f64::NAN
                }
            }
            ScalarFn::Subst(p, f) => ext_pow(f.limit_at_infinity(), *p),
            ScalarFn::Affine { a, b, c, inner } => {
                let mut acc = *a;
                if *b > 0.0 {
                    acc = ext_add(acc, f64::INFINITY);
                } else if *b < 0.0 {
                    return f64::NAN;
                }
                let l = inner.limit_at_infinity();
                if *c == 0.0 {
                    nonneg_or_nan(acc)
                } else if l.is_nan() {
                    f64::NAN
                } else if l.is_infinite() {
                    if *c > 0.0 {
                        f64::INFINITY
                    } else {
                        f64::NAN
                    }
                } else {
                    nonneg_or_nan(ext_add(acc, c * l))
                }
            }
            ScalarFn::NumericInverse(_, _) => f64::INFINITY,
        }
    }

    /// `lim_{t→∞} f(t)/t` in `[0, ∞]` (NaN when unknown).
    pub fn limit_ratio_at_infinity(&self) -> f64 {
        match self {
            ScalarFn::Power(a) => power_limit_at_infinity(a - 1.0),
            ScalarFn::WeightedArith(w) => *w,
            ScalarFn::WeightedHarm(w) => {
                if *w < 1.0 {
                    0.0
                } else {
                    1.0
                }
            }
            ScalarFn::Geodesic(atoms) => atoms
                .iter()
                .map(|atom| ext_mul_weight(atom.weight, power_limit_at_infinity(atom.alpha - 1.0)))
                .fold(0.0, ext_add),
            ScalarFn::LogMean => 0.0,
            ScalarFn::HalfSum(a) => 0.5
                * ext_add(
                    power_limit_at_infinity(a - 1.0),
                    power_limit_at_infinity(-a),
                ),
            ScalarFn::Transpose(f) => f.limit_at_zero(),
            ScalarFn::Adjoint(f) => ext_recip(f.limit_ratio_at_zero()),
            ScalarFn::Dual(f) => ext_recip(f.limit_at_infinity()),
            ScalarFn::TPowTimes(n, f) => {
                if *n == 1 {
                    f.limit_at_infinity()
                } else {
                    let l = f.limit_at_infinity();
                    if l.is_nan() {
                        f64::NAN
                    } else if l > 0.0 {
                        f64::INFINITY
                    } else {
                        f64::NAN
                    }
                }
            }
            ScalarFn::Subst(p, f) => ext_pow(f.limit_ratio_at_infinity(), *p),
            ScalarFn::Affine { b, c, inner, .. } => {
                let r = inner.limit_ratio_at_infinity();
                if *c == 0.0 {
                    nonneg_or_nan(*b)
                } else if r.is_finite() {
                    nonneg_or_nan(b + c * r)
                } else if r.is_infinite() && *c > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NAN
                }
            }
            ScalarFn::NumericInverse(_, _) => f64::NAN,
        }
    }

    /// `f'(1)` by central differences with one Richardson step.
    pub fn deriv_at_one(&self) -> Result<f64> {
        let diff = |h: f64| -> Result<f64> {
            Ok((self.eval(1.0 + h)? - self.eval(1.0 - h)?) / (2.0 * h))
        };
        let h = 1e-5;
        let d1 = diff(h)?;
        let d2 = diff(h / 2.0)?;
        Ok((4.0 * d2 - d1) / 3.0)
    }

    /// Grid/sample classification of the function.
    pub fn classify(&self, grid: &ProbeGrid) -> FnClassReport {
        classify_impl(self, grid)
    }

    /// Parses the CLI descriptor grammar (`pow(0.5)`,
    /// `tpow(2, geodesic(0:0.5,1:0.5))`, …).
    pub fn parse(text: &str) -> Result<ScalarFn> {
        let mut parser = Parser::new(text);
        let f = parser.parse_expr()?;
        parser.expect_end()?;
        Ok(f)
    }
}

fn check_weight(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("weight {w} outside [0,1]")))
    }
}

fn finite(x: f64) -> Option<f64> {
    if x.is_finite() {
        Some(x)
    } else {
        None
    }
}

fn power_limit_at_zero(e: f64) -> f64 {
    if e > 0.0 {
        0.0
    } else if e == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn power_limit_at_infinity(e: f64) -> f64 {
    if e > 0.0 {
        f64::INFINITY
    } else if e == 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Extended-real addition over `[0, ∞]`; NaN is absorbing.
fn ext_add(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a + b
    }
}

/// `w · x` for positive weight over `[0, ∞]`.
fn ext_mul_weight(w: f64, x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x.is_infinite() {
        f64::INFINITY
    } else {
        w * x
    }
}

/// Reciprocal over `[0, ∞]` with `1/0 = ∞` and `1/∞ = 0`.
fn ext_recip(x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x == 0.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// `x^p` over `[0, ∞]` for `p > 0`.
fn ext_pow(x: f64, p: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x.is_infinite() {
        f64::INFINITY
    } else {
        x.powf(p)
    }
}

/// Keeps a limit only when it is a valid value for a nonnegative
/// function; otherwise unknown.
fn nonneg_or_nan(x: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        f64::NAN
    }
}

/// Solves `t^n · h(t) = y` for strictly increasing `t ↦ t^n h(t)`.
///
/// Brackets outward from `[y^{1/(n+1)}/2, 2·y^{1/(n+1)}]` by repeated
/// doubling/halving (at most 200 steps each way), then bisects until
/// the residual satisfies `|t^n h(t) − y| ≤ 1e−12·max(1, y)`.
pub fn inverse_monotone(n: u32, h: &ScalarFn, y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::DomainViolation(format!(
            "inverse target {y} must be positive and finite"
        )));
    }
    let g = |t: f64| -> Result<f64> { Ok(t.powi(n as i32) * h.eval(t)?) };
    let seed = y.powf(1.0 / (n as f64 + 1.0));
    let mut lo = seed / 2.0;
    let mut hi = seed * 2.0;
    let mut steps = 0;
    while g(lo)? > y {
        lo /= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::InverseNotBracketed(format!(
                "no lower bracket for target {y}"
            )));
        }
    }
    steps = 0;
    while g(hi)? < y {
        hi *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::InverseNotBracketed(format!(
                "no upper bracket for target {y}"
            )));
        }
    }
    let tol = 1e-12 * y.max(1.0);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if (v - y).abs() <= tol {
            return Ok(mid);
        }
        if v < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The bisection has collapsed to machine precision; accept the
    // midpoint if the residual is within a small multiple of the target
    // tolerance (the map may be too steep for the absolute residual).
    let v = g(mid)?;
    if (v - y).abs() <= 1e-9 * y.max(1.0) {
        Ok(mid)
    } else {
        Err(Error::InverseNotBracketed(format!(
            "bisection stalled at residual {:e} for target {y}",
            (v - y).abs()
        )))
    }
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// Sampling grid for the scalar classifiers.
#[derive(Debug, Clone)]
pub struct ProbeGrid {
    /// Evaluation points (log-uniform by default).
    pub t_values: Vec<f64>,
    /// Exponents `p ≥ 1` for the power-monotonicity predicates; each is
    /// also probed mirrored as `1/p`.
    pub p_values: Vec<f64>,
    /// Relative tolerance for grid comparisons.
    pub rel_tol: f64,
    /// Trials per dimension for the matrix-sampled flags.
    pub matrix_trials: usize,
    /// Seed for the matrix-sampled flags.
    pub seed: u64,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        let t_values = (0..49).map(|i| (-6.0 + 0.25 * i as f64).exp()).collect();
        ProbeGrid {
            t_values,
            p_values: vec![1.1, 1.5, 2.0, 3.0, 5.0],
            rel_tol: 1e-9,
            matrix_trials: 20,
            seed: 0xC1A5_51F1,
        }
    }
}

/// Witness for a failing classification flag.
#[derive(Debug, Clone)]
pub enum ClassWitness {
    /// Scalar grid point `(t, p)` violating the predicate.
    Scalar { t: f64, p: f64 },
    /// Matrix pair violating the sampled operator predicate.
    MatrixPair { a: SymMatrix, b: SymMatrix },
    /// The predicate needs a finite `f(0⁺)` of a specific value.
    ValueAtZero { value: Option<f64> },
    /// Evaluation failed at a grid point.
    EvalError { t: f64, message: String },
}

/// Outcome of one sampled predicate.
#[derive(Debug, Clone)]
pub enum ClassFlag {
    HoldsOnSample,
    FailsWith(ClassWitness),
}

impl ClassFlag {
    pub fn holds(&self) -> bool {
        matches!(self, ClassFlag::HoldsOnSample)
    }
}

/// Report of all sampled classifications of one function.
#[derive(Debug, Clone)]
pub struct FnClassReport {
    /// Power monotone increasing: `f(t^p) ≥ f(t)^p` on the grid.
    pub pmi: ClassFlag,
    /// Power monotone decreasing: `f(t^p) ≤ f(t)^p` on the grid.
    pub pmd: ClassFlag,
    /// `log f(e^x)` midpoint-convex on the log grid.
    pub geom_convex: ClassFlag,
    /// Operator monotone on sampled 2×2 / 3×3 ordered pairs.
    pub om_plus_sampled: ClassFlag,
    /// Operator monotone decreasing on sampled ordered pairs.
    pub omd_plus_sampled: ClassFlag,
    /// Operator midpoint-convex on sampled pairs, with `f(0⁺) = 0`.
    pub oc_plus_zero_sampled: ClassFlag,
    /// Number of scalar grid points probed.
    pub grid_points: usize,
    /// Number of matrix pairs probed per flag.
    pub matrix_pairs: usize,
}

fn classify_impl(f: &ScalarFn, grid: &ProbeGrid) -> FnClassReport {
    let rel = grid.rel_tol;

    // Scalar power-monotonicity sweeps, in both the p >= 1 and the
    // mirrored 1/p direction.
    let mut pmi = ClassFlag::HoldsOnSample;
    let mut pmd = ClassFlag::HoldsOnSample;
    'outer: for &t in &grid.t_values {
        for &p in &grid.p_values {
            for (q, up) in [(p, true), (1.0 / p, false)] {
                let (ftq, ftp) = match (f.eval(t.powf(q)), f.eval(t)) {
                    (Ok(a), Ok(b)) => (a, b.powf(q)),
                    (Err(e), _) | (_, Err(e)) => {
                        let w = ClassWitness::EvalError {
                            t,
                            message: e.to_string(),
                        };
                        pmi = ClassFlag::FailsWith(w.clone());
                        pmd = ClassFlag::FailsWith(w);
                        break 'outer;
                    }
                };
                let tol = rel * ftp.abs().max(1.0);
                // pmi at exponent q >= 1 means f(t^q) >= f(t)^q; the
                // mirrored direction q <= 1 flips the inequality.
                let pmi_ok = if up { ftq >= ftp - tol } else { ftq <= ftp + tol };
                let pmd_ok = if up { ftq <= ftp + tol } else { ftq >= ftp - tol };
                if !pmi_ok && pmi.holds() {
                    pmi = ClassFlag::FailsWith(ClassWitness::Scalar { t, p: q });
                }
                if !pmd_ok && pmd.holds() {
                    pmd = ClassFlag::FailsWith(ClassWitness::Scalar { t, p: q });
                }
            }
        }
    }

    // Geometric convexity: log f(e^x) midpoint-convex over all grid pairs.
    let mut geom_convex = ClassFlag::HoldsOnSample;
    let xs: Vec<f64> = grid.t_values.iter().map(|t| t.ln()).collect();
    'geo: for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            let eval_log = |x: f64| f.eval(x.exp()).map(|v| v.ln());
            match (eval_log(xs[i]), eval_log(xs[j]), eval_log(0.5 * (xs[i] + xs[j]))) {
                (Ok(pi), Ok(pj), Ok(pm)) => {
                    let tol = rel * (1.0 + pi.abs() + pj.abs());
                    if pm > 0.5 * (pi + pj) + tol {
                        geom_convex = ClassFlag::FailsWith(ClassWitness::Scalar {
                            t: (0.5 * (xs[i] + xs[j])).exp(),
                            p: 0.0,
                        });
                        break 'geo;
                    }
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    geom_convex = ClassFlag::FailsWith(ClassWitness::EvalError {
                        t: grid.t_values[i],
                        message: e.to_string(),
                    });
                    break 'geo;
                }
            }
        }
    }

    // Matrix-sampled flags on random ordered pairs in dimensions 2 and 3.
    let om_tol = 1e-8;
    let mut om = ClassFlag::HoldsOnSample;
    let mut omd = ClassFlag::HoldsOnSample;
    let mut trial = 0u64;
    'mat: for dim in [2usize, 3] {
        for _ in 0..grid.matrix_trials {
            let spec = TrialSpec {
                master_seed: grid.seed,
                trial_index: trial,
                dim,
                cond_target: 50.0,
                structure: TrialStructure::GenericPd,
            };
            trial += 1;
            let a = randgen::rand_spd(&spec);
            let bump_spec = TrialSpec {
                trial_index: trial,
                ..spec.clone()
            };
            trial += 1;
            let bump = randgen::rand_spd(&bump_spec).scale(0.5);
            let b = a.add(&bump).expect("same dim");
            let (fa, fb) = match (a.apply_fn(f), b.apply_fn(f)) {
                (Ok(x), Ok(y)) => (x, y),
                _ => {
                    let w = ClassWitness::MatrixPair { a, b };
                    om = ClassFlag::FailsWith(w.clone());
                    omd = ClassFlag::FailsWith(w);
                    break 'mat;
                }
            };
            let scale = fa
                .op_norm()
                .unwrap_or(1.0)
                .max(fb.op_norm().unwrap_or(1.0))
                .max(1.0);
            let gap = fb.sub(&fa).expect("same dim").lambda_min().unwrap_or(f64::NEG_INFINITY);
            if gap < -om_tol * scale && om.holds() {
                om = ClassFlag::FailsWith(ClassWitness::MatrixPair { a: a.clone(), b: b.clone() });
            }
            let gap_dec = fa.sub(&fb).expect("same dim").lambda_min().unwrap_or(f64::NEG_INFINITY);
            if gap_dec < -om_tol * scale && omd.holds() {
                omd = ClassFlag::FailsWith(ClassWitness::MatrixPair { a, b });
            }
            if !om.holds() && !omd.holds() {
                break 'mat;
            }
        }
    }

    // Operator midpoint convexity with f(0+) = 0.
    let mut oc = match f.value_at_zero() {
        Some(v) if v.abs() <= 1e-9 => ClassFlag::HoldsOnSample,
        other => ClassFlag::FailsWith(ClassWitness::ValueAtZero { value: other }),
    };
    if oc.holds() {
        'oc: for dim in [2usize, 3] {
            for _ in 0..grid.matrix_trials {
                let mk = |idx: u64| {
                    randgen::rand_spd(&TrialSpec {
                        master_seed: grid.seed ^ 0x0C0C,
                        trial_index: idx,
                        dim,
                        cond_target: 50.0,
                        structure: TrialStructure::GenericPd,
                    })
                };
                let a = mk(trial);
                let b = mk(trial + 1);
                trial += 2;
                let mid = a.add(&b).expect("dim").scale(0.5);
                let lhs = match mid.apply_fn(f) {
                    Ok(x) => x,
                    Err(_) => {
                        oc = ClassFlag::FailsWith(ClassWitness::MatrixPair { a, b });
                        break 'oc;
                    }
                };
                let rhs = match (a.apply_fn(f), b.apply_fn(f)) {
                    (Ok(x), Ok(y)) => x.add(&y).expect("dim").scale(0.5),
                    _ => {
                        oc = ClassFlag::FailsWith(ClassWitness::MatrixPair { a, b });
                        break 'oc;
                    }
                };
                let scale = rhs.op_norm().unwrap_or(1.0).max(1.0);
                let gap = rhs.sub(&lhs).expect("dim").lambda_min().unwrap_or(f64::NEG_INFINITY);
                if gap < -om_tol * scale {
                    oc = ClassFlag::FailsWith(ClassWitness::MatrixPair { a, b });
                    break 'oc;
                }
            }
        }
    }

    FnClassReport {
        pmi,
        pmd,
        geom_convex,
        om_plus_sampled: om,
        omd_plus_sampled: omd,
        oc_plus_zero_sampled: oc,
        grid_points: grid.t_values.len() * grid.p_values.len() * 2,
        matrix_pairs: grid.matrix_trials * 2,
    }
}

// ---------------------------------------------------------------------------
// Descriptor grammar
// ---------------------------------------------------------------------------

impl fmt::Display for ScalarFn {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Power(a) => write!(out, "pow({a})"),
            ScalarFn::WeightedArith(w) => write!(out, "warith({w})"),
            ScalarFn::WeightedHarm(w) => write!(out, "wharm({w})"),
            ScalarFn::Geodesic(atoms) => {
                write!(out, "geodesic(")?;
                for (i, atom) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{}:{}", atom.alpha, atom.weight)?;
                }
                write!(out, ")")
            }
            ScalarFn::LogMean => write!(out, "logmean"),
            ScalarFn::HalfSum(a) => write!(out, "halfsum({a})"),
            ScalarFn::Transpose(f) => write!(out, "transpose({f})"),
            ScalarFn::Adjoint(f) => write!(out, "adjoint({f})"),
            ScalarFn::Dual(f) => write!(out, "dual({f})"),
            ScalarFn::TPowTimes(n, f) => write!(out, "tpow({n}, {f})"),
            ScalarFn::Subst(p, f) => write!(out, "subst({p}, {f})"),
            ScalarFn::Affine { a, b, c, inner } => write!(out, "affine({a}, {b}, {c}, {inner})"),
            ScalarFn::NumericInverse(n, f) => write!(out, "inv({n}, {f})"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len_utf8();
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{token}' at position {} in descriptor",
                self.pos
            )))
        }
    }

    fn peek_is(&mut self, token: char) -> bool {
        self.skip_ws();
        self.rest().starts_with(token)
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_alphanumeric() && *c != '_')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(Error::Parse(format!(
                "expected a function name at position {}",
                self.pos
            )));
        }
        let word = rest[..end].to_ascii_lowercase();
        self.pos += end;
        Ok(word)
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, c)| !matches!(c, '0'..='9' | '.' | '-' | '+' | 'e' | 'E'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let word = &rest[..end];
        let value: f64 = word
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{word}'")))?;
        self.pos += end;
        Ok(value)
    }

    fn parse_expr(&mut self) -> Result<ScalarFn> {
        let head = self.ident()?;
        match head.as_str() {
            "logmean" => Ok(ScalarFn::LogMean),
            "one" => Ok(ScalarFn::one()),
            "pow" => {
                self.eat('(')?;
                let a = self.number()?;
                self.eat(')')?;
                Ok(ScalarFn::Power(a))
            }
            "warith" => {
                self.eat('(')?;
                let w = self.number()?;
                self.eat(')')?;
                ScalarFn::weighted_arith(w)
            }
            "wharm" => {
                self.eat('(')?;
                let w = self.number()?;
                self.eat(')')?;
                ScalarFn::weighted_harm(w)
            }
            "halfsum" => {
                self.eat('(')?;
                let a = self.number()?;
                self.eat(')')?;
                Ok(ScalarFn::HalfSum(a))
            }
            "geodesic" => {
                self.eat('(')?;
                let mut atoms = Vec::new();
                loop {
                    let alpha = self.number()?;
                    self.eat(':')?;
                    let weight = self.number()?;
                    atoms.push(GeodesicAtom { alpha, weight });
                    if self.peek_is(',') {
                        self.eat(',')?;
                    } else {
                        break;
                    }
                }
                self.eat(')')?;
                ScalarFn::geodesic(atoms)
            }
            "transpose" | "adjoint" | "dual" => {
                self.eat('(')?;
                let inner = self.parse_expr()?;
                self.eat(')')?;
                Ok(match head.as_str() {
                    "transpose" => ScalarFn::transpose(inner),
                    "adjoint" => ScalarFn::adjoint(inner),
                    _ => ScalarFn::dual(inner),
                })
            }
            "tpow" | "inv" => {
                self.eat('(')?;
                let n = self.number()?;
                if n < 0.0 || n.fract() != 0.0 {
                    return Err(Error::Parse(format!("'{head}' needs a nonnegative integer, got {n}")));
                }
                self.eat(',')?;
                let inner = self.parse_expr()?;
                self.eat(')')?;
                if head == "tpow" {
                    ScalarFn::t_pow_times(n as u32, inner)
                } else {
                    Ok(ScalarFn::numeric_inverse(n as u32, inner))
                }
            }
            "subst" => {
                self.eat('(')?;
                let p = self.number()?;
                self.eat(',')?;
                let inner = self.parse_expr()?;
                self.eat(')')?;
                ScalarFn::subst(p, inner)
            }
            "affine" => {
                self.eat('(')?;
                let a = self.number()?;
                self.eat(',')?;
                let b = self.number()?;
                self.eat(',')?;
                let c = self.number()?;
                self.eat(',')?;
                let inner = self.parse_expr()?;
                self.eat(')')?;
                Ok(ScalarFn::affine(a, b, c, inner))
            }
            other => Err(Error::Parse(format!("unknown function head '{other}'"))),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "trailing input '{}' in descriptor",
                self.rest()
            )))
        }
    }
}
