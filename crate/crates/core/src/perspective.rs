//! Operator perspectives, operator means, Log-Euclidean means, the
//! generalized Kantorovich constant, and singular (positive
//! semidefinite) extensions via support compression and ε-limits.

use crate::error::{Error, Result};
use crate::funclib::ScalarFn;
use crate::matcore::{PsdKind, SymMatrix, PSD_TOL};

/// Relative tolerance for operator-inequality margins (the `λ_min`
/// convention used by every suite check).
pub const OP_INEQ_REL_TOL: f64 = 1e-8;

/// Relative tolerance for support-inclusion checks.
const SUPPORT_TOL: f64 = 1e-9;

fn require_pd(m: &SymMatrix, role: &str) -> Result<()> {
    let class = m.psd_class()?;
    if class.classification != PsdKind::PositiveDefinite {
        return Err(Error::DomainViolation(format!(
            "{role} must be positive definite (lambda_min = {:e})",
            class.lambda_min
        )));
    }
    Ok(())
}

/// Operator perspective `P_f(A,B) = B^{1/2} f(B^{−1/2} A B^{−1/2}) B^{1/2}`.
///
/// `B` must be positive definite; `A` may be positive semidefinite when
/// `f` extends finitely to 0.
pub fn perspective(f: &ScalarFn, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    require_pd(b, "second perspective argument")?;
    let root = b.mat_pow(0.5)?;
    let inv_root = b.mat_pow(-0.5)?;
    let inner = inv_root.sandwich(a)?;
    let mapped = inner.apply_fn(f)?;
    root.sandwich(&mapped)
}

/// Operator mean `A σ_h B = A^{1/2} h(A^{−1/2} B A^{−1/2}) A^{1/2}`
/// (equal to `perspective(h, B, A)`).
pub fn mean_sigma(h: &ScalarFn, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    require_pd(a, "first mean argument")?;
    let root = a.mat_pow(0.5)?;
    let inv_root = a.mat_pow(-0.5)?;
    let inner = inv_root.sandwich(b)?;
    let mapped = inner.apply_fn(h)?;
    root.sandwich(&mapped)
}

/// Weighted geometric mean `A #_α B = A^{1/2}(A^{−1/2} B A^{−1/2})^α A^{1/2}`.
pub fn weighted_geo(alpha: f64, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    mean_sigma(&ScalarFn::power(alpha), a, b)
}

/// Residual of the transpose identity `P_{f̃}(A,B) = P_f(B,A)`.
pub fn transpose_identity_check(f: &ScalarFn, a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let lhs = perspective(&ScalarFn::transpose(f.clone()), a, b)?;
    let rhs = perspective(f, b, a)?;
    lhs.sub(&rhs)?.op_norm()
}

/// Residual of the adjoint identity `P_{f*}(A,B) = P_f(A⁻¹,B⁻¹)⁻¹`.
pub fn adjoint_identity_check(f: &ScalarFn, a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let lhs = perspective(&ScalarFn::adjoint(f.clone()), a, b)?;
    let inner = perspective(f, &a.mat_pow(-1.0)?, &b.mat_pow(-1.0)?)?;
    let rhs = inner.mat_pow(-1.0)?;
    lhs.sub(&rhs)?.op_norm()
}

/// Generalized Kantorovich constant
/// `K(ξ,p) = (ξ^p−ξ)/((p−1)(ξ−1)) · [((p−1)/p)·(ξ^p−1)/(ξ^p−ξ)]^p`,
/// continued by 1 at `p ∈ {0, 1}` and at `ξ = 1`.
pub fn kantorovich(xi: f64, p: f64) -> Result<f64> {
    if !(xi >= 1.0) {
        return Err(Error::DomainViolation(format!(
            "condition-number argument {xi} must be >= 1"
        )));
    }
    if xi == 1.0 || p == 1.0 || p == 0.0 {
        return Ok(1.0);
    }
    let xp = xi.powf(p);
    let first = (xp - xi) / ((p - 1.0) * (xi - 1.0));
    let second = ((p - 1.0) / p) * ((xp - 1.0) / (xp - xi));
    Ok(first * second.powf(p))
}

/// Signed operator-inequality margin for `X ≥ Y`:
/// `λ_min(X−Y) / max(1, ‖X‖, ‖Y‖)`. Nonnegative (within `OP_INEQ_REL_TOL`)
/// means the inequality holds.
pub fn op_ineq_margin(x: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    let scale = x.op_norm()?.max(y.op_norm()?).max(1.0);
    Ok(x.sub(y)?.lambda_min()? / scale)
}

/// Whether `range(A) ⊆ range(B)` up to tolerance, compared through the
/// support projections.
pub fn support_leq(a: &SymMatrix, b: &SymMatrix) -> Result<bool> {
    let pa = a.support_projection()?;
    let pb = b.support_projection()?;
    let n = a.dim();
    let complement = SymMatrix::identity(n).sub(&pb)?;
    let leak = complement.sandwich(&pa)?.op_norm()?;
    Ok(leak <= 1e-8)
}

/// `D(A/B)`: the unique positive `W` supported in `s(B)` with
/// `A = B^{1/2} W B^{1/2}` (equal to `B^{−1/2} A B^{−1/2}` for positive
/// definite `B`), built by compressing to the support of `B`.
pub fn d_ratio(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let n = a.dim();
    if n != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let pb = b.support_projection()?;
    let complement = SymMatrix::identity(n).sub(&pb)?;
    let leak = complement.sandwich(a)?.op_norm()?;
    if leak > SUPPORT_TOL * a.op_norm()?.max(1.0) {
        return Err(Error::SupportViolation(format!(
            "numerator is not dominated by the denominator (leak {leak:e})"
        )));
    }
    let spec = b.eigh()?;
    let scale = spec
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, l| m.max(l.abs()))
        .max(1.0);
    let thr = PSD_TOL * scale;
    let kept: Vec<usize> = (0..n).filter(|&i| spec.eigenvalues[i] > thr).collect();
    if kept.iter().any(|&i| spec.eigenvalues[i] <= 0.0) {
        return Err(Error::DomainViolation("denominator is not positive semidefinite".into()));
    }
    let r = kept.len();
    // Compressed A on the support basis: A_s[i][j] = q_iᵀ A q_j.
    let q = spec.vectors();
    let mut a_s = vec![0.0; r * r];
    for (ci, &ei) in kept.iter().enumerate() {
        for (cj, &ej) in kept.iter().enumerate() {
            let mut acc = 0.0;
            for x in 0..n {
                let mut row = 0.0;
                for y in 0..n {
                    row += a.get(x, y) * q[y * n + ej];
                }
                acc += q[x * n + ei] * row;
            }
            a_s[ci * r + cj] = acc;
        }
    }
    // W_s = D^{−1/2} A_s D^{−1/2} on the support, embedded back.
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in x..n {
            let mut acc = 0.0;
            for (ci, &ei) in kept.iter().enumerate() {
                for (cj, &ej) in kept.iter().enumerate() {
                    let w = a_s[ci * r + cj]
                        / (spec.eigenvalues[ei].sqrt() * spec.eigenvalues[ej].sqrt());
                    acc += q[x * n + ei] * w * q[y * n + ej];
                }
            }
            data[x * n + y] = acc;
            data[y * n + x] = acc;
        }
    }
    Ok(SymMatrix::symmetrized(n, data))
}

/// Singular-limit perspective for positive semidefinite arguments.
///
/// Uses the closed form `B^{1/2} f(D(A/B)) B^{1/2}` when `f(0⁺)` is
/// finite and `s(A) ≤ s(B)`, or the mirrored
/// `A^{1/2} f̃(D(B/A)) A^{1/2}` when `f'(∞)` is finite and
/// `s(B) ≤ s(A)`; errors when neither regime applies (the ε-limit then
/// diverges).
pub fn perspective_singular(f: &ScalarFn, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if f.value_at_zero().is_some() && support_leq(a, b)? {
        let w = d_ratio(a, b)?;
        let mapped = w.apply_fn(f)?;
        return b.congruence(&mapped);
    }
    if f.slope_at_infinity().is_some() && support_leq(b, a)? {
        let transposed = ScalarFn::transpose(f.clone());
        let w = d_ratio(b, a)?;
        let mapped = w.apply_fn(&transposed)?;
        return a.congruence(&mapped);
    }
    Err(Error::DomainViolation(
        "no finite extension: neither (finite f(0+), s(A) <= s(B)) nor (finite f'(inf), s(B) <= s(A)) holds"
            .into(),
    ))
}

/// Geometric schedule of regularization parameters `ε₀·2^{−k}`.
#[derive(Debug, Clone)]
pub struct EpsSchedule {
    pub eps0: f64,
    pub halvings: usize,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule {
            eps0: 1e-2,
            halvings: 20,
        }
    }
}

/// Outcome of running `P_f(A+εI, B+εI)` down a regularization schedule.
#[derive(Debug, Clone)]
pub struct LimitReport {
    /// Operator norms of the iterates, one per schedule point.
    pub norms: Vec<f64>,
    /// Operator norms of successive iterate differences.
    pub diffs: Vec<f64>,
    /// Differences shrink geometrically (factor ≥ 1.5) at the tail, or
    /// have already collapsed to round-off.
    pub cauchy: bool,
    /// Differences still growing at the tail of the schedule.
    pub diverged: bool,
    /// Final iterate.
    pub last: SymMatrix,
    /// Geometric extrapolation of the iterate sequence: when the tail
    /// differences decay by a stable factor `r < 1`, the remaining gap
    /// to the limit is the geometric sum `(X_k − X_{k−1})·r/(1−r)`.
    /// Equals `last` when no stable decay is observed.
    pub extrapolated: SymMatrix,
}

/// Evaluates `perspective(f, A+εI, B+εI)` along the schedule and
/// reports convergence evidence. Divergence (the incomparable-support
/// regime) is a reported outcome, not an error.
pub fn eps_limit(
    f: &ScalarFn,
    a: &SymMatrix,
    b: &SymMatrix,
    schedule: &EpsSchedule,
) -> Result<LimitReport> {
    let n = a.dim();
    if n != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let id = SymMatrix::identity(n);
    let mut norms = Vec::with_capacity(schedule.halvings + 1);
    let mut diffs = Vec::with_capacity(schedule.halvings);
    let mut prev: Option<SymMatrix> = None;
    let mut second_last: Option<SymMatrix> = None;
    let mut eps = schedule.eps0;
    let mut last = SymMatrix::zeros(n);
    let mut blew_up = false;
    for k in 0..=schedule.halvings {
        let x = match perspective(f, &a.add(&id.scale(eps))?, &b.add(&id.scale(eps))?) {
            Ok(x) => x,
            Err(e) => {
                // Deep in the schedule the regularized contrast can leave
                // the function's numerically representable domain exactly
                // because the iterates blow up; with the tail already
                // growing, treat that as divergence rather than an error.
                let tail_grows =
                    diffs.len() >= 2 && diffs[diffs.len() - 1] > diffs[diffs.len() - 2];
                if k >= 3 && tail_grows {
                    blew_up = true;
                    break;
                }
                return Err(e);
            }
        };
        norms.push(x.op_norm()?);
        if let Some(p) = &prev {
            diffs.push(x.sub(p)?.op_norm()?);
        }
        second_last = prev.take();
        prev = Some(x.clone());
        last = x;
        eps *= 0.5;
        // Stop early only on an unambiguous blow-up: sustained growth
        // of the differences together with a 50-fold escape of the
        // iterate norms. (A large ε can transiently mask a small
        // genuine eigenvalue, so early growth alone proves nothing.)
        if diffs.len() >= 4 {
            let w = &diffs[diffs.len() - 4..];
            let escaped = norms.last().unwrap_or(&0.0).abs() > 50.0 * norms[0].abs().max(1e-300);
            if w[1] > w[0] && w[2] > w[1] && w[3] > w[2] && escaped {
                blew_up = true;
                break;
            }
        }
    }
    let scale = norms.iter().fold(1.0_f64, |m, &v| m.max(v.abs()));
    // Divergence is judged at the tail of the schedule: transient
    // growth followed by decay is the convergent regime approaching a
    // limit the initial ε was too coarse to resolve. Growth at
    // round-off level (below 1e-10 of the iterate scale) is jitter.
    let tail_grows = diffs.len() >= 4 && {
        let w = &diffs[diffs.len() - 4..];
        w[1] > w[0] && w[2] > w[1] && w[3] > w[2] && w[3] > 1e-10 * scale
    };
    let diverged = blew_up || tail_grows;
    let tail_ok = diffs.len() >= 4
        && diffs[diffs.len() - 4..]
            .windows(2)
            .all(|w| w[1] <= w[0] / 1.5 || w[1] <= 1e-11 * scale);
    let settled = diffs.last().map(|&d| d <= 1e-11 * scale).unwrap_or(false);
    // With a stable tail decay factor r, sum the remaining geometric
    // series along the latest step direction.
    let mut extrapolated = last.clone();
    if !diverged && diffs.len() >= 2 {
        let d_last = diffs[diffs.len() - 1];
        let d_prev = diffs[diffs.len() - 2];
        if d_prev > 0.0 {
            let r = d_last / d_prev;
            if (1e-6..0.9).contains(&r) && d_last > 1e-13 * scale {
                if let Some(sl) = &second_last {
                    let step = last.sub(sl)?;
                    extrapolated = last.add(&step.scale(r / (1.0 - r)))?;
                }
            }
        }
    }
    Ok(LimitReport {
        norms,
        diffs,
        cauchy: !diverged && (tail_ok || settled),
        diverged,
        last,
        extrapolated,
    })
}

/// Matrix logarithm of a positive definite matrix.
pub fn matrix_log(m: &SymMatrix) -> Result<SymMatrix> {
    require_pd(m, "logarithm argument")?;
    m.apply_spectral(|l| Ok(l.ln()))
}

/// Matrix exponential of a symmetric matrix.
pub fn matrix_exp(m: &SymMatrix) -> Result<SymMatrix> {
    m.apply_spectral(|l| Ok(l.exp()))
}

/// Weighted Log-Euclidean mean `exp(α log A + (1−α) log B)`.
pub fn log_euclidean(alpha: f64, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    weighted_exp_log(alpha, 1.0 - alpha, a, b)
}

/// `exp(α log A + β log B)` for positive definite inputs.
pub fn weighted_exp_log(alpha: f64, beta: f64, a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let la = matrix_log(a)?;
    let lb = matrix_log(b)?;
    matrix_exp(&la.scale(alpha).add(&lb.scale(beta))?)
}

/// Result of the support-compressed exponential combination.
#[derive(Debug, Clone)]
pub struct DottedExp {
    /// `P₀ exp(α P₀(log A)P₀ + β P₀(log B)P₀) P₀` on the support
    /// intersection `P₀ = s(A) ∧ s(B)`; zero when the intersection is
    /// trivial.
    pub value: SymMatrix,
    /// Rank of the support intersection.
    pub support_rank: usize,
}

/// Support-compressed `exp(α log A ∔ β log B)` for positive
/// semidefinite `A`, `B`: logs are taken on each support, compressed to
/// the intersection `P₀ = s(A) ∧ s(B)`, exponentiated there, and
/// embedded back (zero on the complement).
///
/// Valid regimes: both weights positive, or (`s(A) ≤ s(B)`, `β < 0`,
/// `α + β > 0`).
pub fn dotted_exp(alpha: f64, beta: f64, a: &SymMatrix, b: &SymMatrix) -> Result<DottedExp> {
    let n = a.dim();
    if n != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let both_positive = alpha > 0.0 && beta > 0.0;
    let mirror = beta < 0.0 && alpha + beta > 0.0 && support_leq(a, b)?;
    if !both_positive && !mirror {
        return Err(Error::DomainViolation(format!(
            "weights ({alpha}, {beta}) outside the two supported regimes"
        )));
    }
    let pa = a.support_projection()?;
    let pb = b.support_projection()?;
    // Intersection projection: eigenspace of s(A)+s(B) at eigenvalue 2.
    let sum = pa.add(&pb)?;
    let spec = sum.eigh()?;
    let kept: Vec<usize> = (0..n)
        .filter(|&i| (spec.eigenvalues[i] - 2.0).abs() <= 1e-9)
        .collect();
    let r = kept.len();
    if r == 0 {
        return Ok(DottedExp {
            value: SymMatrix::zeros(n),
            support_rank: 0,
        });
    }
    let support_log = |m: &SymMatrix| -> Result<SymMatrix> {
        let s = m.eigh()?;
        let scale = s
            .eigenvalues
            .iter()
            .fold(0.0_f64, |mx, l| mx.max(l.abs()))
            .max(1.0);
        let thr = PSD_TOL * scale;
        let mapped: Vec<f64> = s
            .eigenvalues
            .iter()
            .map(|&l| if l > thr { l.ln() } else { 0.0 })
            .collect();
        Ok(s.reassemble(&mapped))
    };
    let combined = support_log(a)?
        .scale(alpha)
        .add(&support_log(b)?.scale(beta))?;
    // Compress to the intersection basis, exponentiate there, embed back.
    let q = spec.vectors();
    let mut l0 = vec![0.0; r * r];
    for (ci, &ei) in kept.iter().enumerate() {
        for (cj, &ej) in kept.iter().enumerate() {
            let mut acc = 0.0;
            for x in 0..n {
                let mut row = 0.0;
                for y in 0..n {
                    row += combined.get(x, y) * q[y * n + ej];
                }
                acc += q[x * n + ei] * row;
            }
            l0[ci * r + cj] = acc;
        }
    }
    let small = SymMatrix::symmetrized(r, l0);
    let exp_small = matrix_exp(&small)?;
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in x..n {
            let mut acc = 0.0;
            for (ci, &ei) in kept.iter().enumerate() {
                for (cj, &ej) in kept.iter().enumerate() {
                    acc += q[x * n + ei] * exp_small.get(ci, cj) * q[y * n + ej];
                }
            }
            data[x * n + y] = acc;
            data[y * n + x] = acc;
        }
    }
    Ok(DottedExp {
        value: SymMatrix::symmetrized(n, data),
        support_rank: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::{rand_spd, TrialSpec, TrialStructure};

    fn spd(seed: u64, idx: u64, dim: usize, cond: f64) -> SymMatrix {
        rand_spd(&TrialSpec {
            master_seed: seed,
            trial_index: idx,
            dim,
            cond_target: cond,
            structure: TrialStructure::GenericPd,
        })
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn perspective_with_identity_base() {
        let a = spd(1, 0, 4, 30.0);
        let f = ScalarFn::power(2.0);
        let direct = a.apply_fn(&f).unwrap();
        let via = perspective(&f, &a, &SymMatrix::identity(4)).unwrap();
        assert!(via.sub(&direct).unwrap().max_abs() <= 1e-9 * direct.max_abs().max(1.0));
    }

    #[test]
    fn perspective_scalar_pair() {
        // A = aI, B = bI gives b f(a/b) I.
        let a = SymMatrix::identity(3).scale(3.0);
        let b = SymMatrix::identity(3);
        let p = perspective(&ScalarFn::power(2.0), &a, &b).unwrap();
        assert!(p.sub(&SymMatrix::identity(3).scale(9.0)).unwrap().max_abs() <= 1e-9);
    }

    #[test]
    fn perspective_rank_one_construction() {
        // Rank-one A with diagonal B and f = t·g collapses to a scalar
        // multiple of A.
        let theta: f64 = std::f64::consts::FRAC_PI_4;
        let (c, s) = (theta.cos(), theta.sin());
        let a = SymMatrix::new(2, vec![c * c, c * s, c * s, s * s]).unwrap();
        let (aa, bb) = (2.0, 3.0);
        let b = SymMatrix::diag(&[1.0 / aa, 1.0 / bb]);
        // f = t·g with g = pow(1), so f = t^2.
        let f = ScalarFn::t_pow_times(1, ScalarFn::power(1.0)).unwrap();
        let result = perspective(&f, &a, &b).unwrap();
        let expected = a.scale(aa * c * c + bb * s * s);
        assert!(result.sub(&expected).unwrap().max_abs() <= 1e-9);
    }

    #[test]
    fn perspective_homogeneous() {
        let a = spd(2, 0, 3, 100.0);
        let b = spd(2, 1, 3, 100.0);
        let f = ScalarFn::LogMean;
        let base = perspective(&f, &a, &b).unwrap();
        for c in [0.1, 1.0, 7.3] {
            let scaled = perspective(&f, &a.scale(c), &b.scale(c)).unwrap();
            let err = scaled.sub(&base.scale(c)).unwrap().max_abs();
            assert!(err <= 1e-9 * (1.0 + c * base.max_abs()), "c={c}, err={err:e}");
        }
    }

    #[test]
    fn mean_matches_perspective() {
        let a = spd(3, 0, 4, 50.0);
        let b = spd(3, 1, 4, 50.0);
        let h = ScalarFn::power(0.5);
        let lhs = mean_sigma(&h, &a, &b).unwrap();
        let rhs = perspective(&h, &b, &a).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-10 * lhs.max_abs().max(1.0));
        // Arithmetic connection is (A+B)/2.
        let am = mean_sigma(&ScalarFn::weighted_arith(0.5).unwrap(), &a, &b).unwrap();
        let direct = a.add(&b).unwrap().scale(0.5);
        assert!(am.sub(&direct).unwrap().max_abs() <= 1e-9 * direct.max_abs());
    }

    #[test]
    fn weighted_geo_endpoints() {
        let a = SymMatrix::diag(&[1.0, 4.0]);
        let b = SymMatrix::diag(&[4.0, 1.0]);
        let mid = weighted_geo(0.5, &a, &b).unwrap();
        assert!(mid.sub(&SymMatrix::diag(&[2.0, 2.0])).unwrap().max_abs() <= 1e-9);
        let a0 = weighted_geo(0.0, &a, &b).unwrap();
        assert!(a0.sub(&a).unwrap().max_abs() <= 1e-10);
        let a1 = weighted_geo(1.0, &a, &b).unwrap();
        assert!(a1.sub(&b).unwrap().max_abs() <= 1e-10);
        // Exchange symmetry.
        let x = spd(4, 0, 3, 40.0);
        let y = spd(4, 1, 3, 40.0);
        let lhs = weighted_geo(0.3, &x, &y).unwrap();
        let rhs = weighted_geo(0.7, &y, &x).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-9 * lhs.max_abs());
        // Inversion identity.
        let inv = weighted_geo(0.3, &x.mat_pow(-1.0).unwrap(), &y.mat_pow(-1.0).unwrap()).unwrap();
        let err = inv.sub(&lhs.mat_pow(-1.0).unwrap()).unwrap().max_abs();
        assert!(err <= 1e-8 * inv.max_abs().max(1.0));
    }

    #[test]
    fn identity_residuals() {
        let a = spd(7, 0, 3, 100.0);
        let b = spd(7, 1, 3, 100.0);
        for f in [
            ScalarFn::power(0.4),
            ScalarFn::LogMean,
            ScalarFn::weighted_harm(0.5).unwrap(),
        ] {
            let tr = transpose_identity_check(&f, &a, &b).unwrap();
            let ad = adjoint_identity_check(&f, &a, &b).unwrap();
            assert!(tr <= 1e-8, "transpose residual {tr:e}");
            assert!(ad <= 1e-8, "adjoint residual {ad:e}");
        }
    }

    #[test]
    fn kantorovich_values() {
        for xi in [1.5, 4.0, 100.0] {
            close(kantorovich(xi, 1.0).unwrap(), 1.0, 1e-15);
            let k2 = kantorovich(xi, 2.0).unwrap();
            close(k2, (xi + 1.0) * (xi + 1.0) / (4.0 * xi), 1e-10);
        }
        close(kantorovich(1.0 + 1e-8, 1.7).unwrap(), 1.0, 1e-6);
        close(kantorovich(1.0, 3.0).unwrap(), 1.0, 0.0);
        assert!(kantorovich(0.5, 2.0).is_err());
    }

    #[test]
    fn d_ratio_cases() {
        // PD denominator: plain congruence by the inverse root.
        let a = spd(9, 0, 3, 20.0);
        let b = spd(9, 1, 3, 20.0);
        let w = d_ratio(&a, &b).unwrap();
        let direct = b.mat_pow(-0.5).unwrap().sandwich(&a).unwrap();
        assert!(w.sub(&direct).unwrap().max_abs() <= 1e-8 * direct.max_abs().max(1.0));
        // A = B singular: support projection.
        let sing = SymMatrix::diag(&[2.0, 0.0]);
        let w2 = d_ratio(&sing, &sing).unwrap();
        assert!(w2.sub(&SymMatrix::diag(&[1.0, 0.0])).unwrap().max_abs() <= 1e-10);
        // Diagonal singular pair.
        let w3 = d_ratio(&SymMatrix::diag(&[1.0, 0.0]), &SymMatrix::diag(&[4.0, 0.0])).unwrap();
        assert!(w3.sub(&SymMatrix::diag(&[0.25, 0.0])).unwrap().max_abs() <= 1e-10);
        // Defining property: B^{1/2} W B^{1/2} = A.
        let back = b.congruence(&w).unwrap();
        assert!(back.sub(&a).unwrap().op_norm().unwrap() <= 1e-8 * (1.0 + a.op_norm().unwrap()));
        // Support violation when the numerator sticks out.
        let out = d_ratio(&SymMatrix::diag(&[1.0, 1.0]), &SymMatrix::diag(&[1.0, 0.0]));
        assert!(matches!(out, Err(Error::SupportViolation(_))));
    }

    #[test]
    fn singular_perspective_interior_consistency() {
        let a = spd(12, 0, 3, 50.0);
        let b = spd(12, 1, 3, 50.0);
        let f = ScalarFn::power(2.0);
        let sing = perspective_singular(&f, &a, &b).unwrap();
        let plain = perspective(&f, &a, &b).unwrap();
        assert!(sing.sub(&plain).unwrap().op_norm().unwrap() <= 1e-9 * plain.op_norm().unwrap().max(1.0));
    }

    #[test]
    fn singular_perspective_zero_numerator() {
        let b = SymMatrix::diag(&[2.0, 1.0, 0.0]);
        let f = ScalarFn::power(2.0);
        let out = perspective_singular(&f, &SymMatrix::zeros(3), &b).unwrap();
        assert!(out.op_norm().unwrap() <= 1e-12);
    }

    #[test]
    fn singular_perspective_shared_rank_one() {
        let a = SymMatrix::diag(&[1.0, 0.0]);
        let f = ScalarFn::power(2.0);
        let out = perspective_singular(&f, &a, &a).unwrap();
        assert!(out.sub(&a).unwrap().max_abs() <= 1e-10);
        // Agrees with the regularized limit.
        let limit = eps_limit(&f, &a, &a, &EpsSchedule::default()).unwrap();
        assert!(limit.cauchy && !limit.diverged);
        assert!(limit.last.sub(&out).unwrap().op_norm().unwrap() <= 1e-6);
    }

    #[test]
    fn eps_limit_divergence() {
        // Incomparable supports with f'(inf) = inf: ~1/eps blow-up.
        let a = SymMatrix::diag(&[0.0, 1.0]);
        let b = SymMatrix::diag(&[1.0, 0.0]);
        let report = eps_limit(&ScalarFn::power(2.0), &a, &b, &EpsSchedule::default()).unwrap();
        assert!(report.diverged);
        assert!(!report.cauchy);
        assert!(matches!(
            perspective_singular(&ScalarFn::power(2.0), &a, &b),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn log_euclidean_basics() {
        let a = spd(15, 0, 3, 30.0);
        let b = spd(15, 1, 3, 30.0);
        for alpha in [0.0, 0.4, 1.0] {
            let le = log_euclidean(alpha, &a, &a).unwrap();
            assert!(le.sub(&a).unwrap().max_abs() <= 1e-9 * a.max_abs());
            let _ = alpha;
        }
        let le1 = log_euclidean(1.0, &a, &b).unwrap();
        assert!(le1.sub(&a).unwrap().max_abs() <= 1e-9 * a.max_abs().max(1.0));
        let mid = log_euclidean(
            0.5,
            &SymMatrix::diag(&[4.0, 1.0]),
            &SymMatrix::diag(&[1.0, 4.0]),
        )
        .unwrap();
        assert!(mid.sub(&SymMatrix::diag(&[2.0, 2.0])).unwrap().max_abs() <= 1e-9);
    }

    #[test]
    fn dotted_exp_cases() {
        // PD inputs: plain weighted exp-log.
        let a = spd(20, 0, 3, 20.0);
        let b = spd(20, 1, 3, 20.0);
        let d = dotted_exp(0.6, 0.4, &a, &b).unwrap();
        assert_eq!(d.support_rank, 3);
        let plain = weighted_exp_log(0.6, 0.4, &a, &b).unwrap();
        assert!(d.value.sub(&plain).unwrap().op_norm().unwrap() <= 1e-8 * plain.op_norm().unwrap());
        // Shared projection with weights summing to 1 returns it.
        let p = SymMatrix::diag(&[1.0, 1.0, 0.0]);
        let dp = dotted_exp(0.3, 0.7, &p, &p).unwrap();
        assert!(dp.value.sub(&p).unwrap().max_abs() <= 1e-10);
        assert_eq!(dp.support_rank, 2);
        // Disjoint supports: zero with a zero rank flag.
        let da = SymMatrix::diag(&[1.0, 0.0]);
        let db = SymMatrix::diag(&[0.0, 1.0]);
        let dz = dotted_exp(0.5, 0.5, &da, &db).unwrap();
        assert_eq!(dz.support_rank, 0);
        assert!(dz.value.op_norm().unwrap() == 0.0);
        // Invalid weight regime.
        assert!(dotted_exp(0.3, -0.5, &a, &b).is_err());
    }

    #[test]
    fn dotted_exp_against_eps_oracle() {
        // Shared rank-2 support in dimension 3.
        let q = {
            let mut s = crate::randgen::Stream::new(33, 0);
            crate::randgen::rand_orthogonal(&mut s, 3)
        };
        let build = |e: &[f64]| {
            let mut data = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for k in 0..3 {
                        acc += q[i * 3 + k] * e[k] * q[j * 3 + k];
                    }
                    data[i * 3 + j] = acc;
                }
            }
            SymMatrix::symmetrized(3, data)
        };
        let a = build(&[2.0, 0.5, 0.0]);
        let b = build(&[1.5, 3.0, 0.0]);
        let d = dotted_exp(0.6, 0.4, &a, &b).unwrap();
        assert_eq!(d.support_rank, 2);
        // Lemma-style epsilon oracle: exp(a log(A + eps s(A)^perp) + ...).
        let eps = 1e-6;
        let id = SymMatrix::identity(3);
        let reg = |m: &SymMatrix| {
            let p = m.support_projection().unwrap();
            let comp = id.sub(&p).unwrap();
            m.add(&comp.scale(eps)).unwrap()
        };
        let oracle = weighted_exp_log(0.6, 0.4, &reg(&a), &reg(&b)).unwrap();
        let err = d.value.sub(&oracle).unwrap().op_norm().unwrap();
        assert!(err <= 1e-4, "err {err:e}");
    }

    #[test]
    fn op_ineq_margin_sign() {
        let big = SymMatrix::diag(&[3.0, 2.0]);
        let small = SymMatrix::diag(&[1.0, 1.0]);
        assert!(op_ineq_margin(&big, &small).unwrap() > 0.0);
        assert!(op_ineq_margin(&small, &big).unwrap() < 0.0);
    }
}
