//! Eigenvalue-product orderings: weak log-majorization, log-majorization,
//! log-supermajorization, and weak majorization.
//!
//! All predicates compare descending spectra. Products are compared in
//! log space with `log 0 := −∞`: a `−∞` on the small side of the
//! inequality satisfies it, and ties of `−∞` against `−∞` satisfy it —
//! the limit semantics of the determinant products.

use crate::error::{Error, Result};
use crate::matcore::{clamp_spectrum, SymMatrix};

/// Which ordering a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorizationRelation {
    /// Prefix products of `A` dominated by those of `B`.
    WeakLog,
    /// Weak log-majorization plus equal determinants.
    Log,
    /// Tail products of `A` dominating those of `B` (the `≺^{wlog}` mirror).
    SuperLog,
    /// Prefix sums of eigenvalues dominated.
    Weak,
}

/// Outcome of one majorization comparison.
#[derive(Debug, Clone)]
pub struct MajorizationVerdict {
    pub relation: MajorizationRelation,
    pub holds: bool,
    /// Margin per prefix (or tail) length `k = 1..=n`, oriented so that
    /// nonnegative means "satisfied at this k". Infinite margins encode
    /// zero eigenvalues on exactly one side.
    pub margins: Vec<f64>,
    /// Index (1-based k) of the smallest margin.
    pub worst_k: usize,
    /// Tolerance applied at the worst k.
    pub tolerance: f64,
}

/// Base relative tolerance per prefix step.
pub const MARGIN_REL_TOL: f64 = 1e-8;

struct LogSpectrum {
    /// ln of positive eigenvalues, descending eigenvalue order;
    /// zero eigenvalues recorded as None.
    logs: Vec<Option<f64>>,
    max_abs_log: f64,
}

fn log_spectrum(m: &SymMatrix) -> Result<LogSpectrum> {
    let spec = m.eigh()?;
    let clamped = clamp_spectrum(&spec.eigenvalues).map_err(|_| {
        Error::DomainViolation("majorization needs positive semidefinite inputs".into())
    })?;
    let mut max_abs_log = 0.0_f64;
    let logs = clamped
        .iter()
        .map(|&l| {
            if l == 0.0 {
                None
            } else {
                let v = l.ln();
                max_abs_log = max_abs_log.max(v.abs());
                Some(v)
            }
        })
        .collect();
    Ok(LogSpectrum { logs, max_abs_log })
}

fn tolerance_at(k: usize, scale: f64) -> f64 {
    MARGIN_REL_TOL * k as f64 * (1.0 + scale)
}

/// Compares prefix log-products: margin_k = Σ_{i<k} log λ_i(big) − log λ_i(small).
fn prefix_margins(small: &LogSpectrum, big: &LogSpectrum) -> Vec<f64> {
    let n = small.logs.len();
    let mut margins = Vec::with_capacity(n);
    let mut sum_small = 0.0;
    let mut zeros_small = 0usize;
    let mut sum_big = 0.0;
    let mut zeros_big = 0usize;
    for k in 0..n {
        match small.logs[k] {
            Some(v) => sum_small += v,
            None => zeros_small += 1,
        }
        match big.logs[k] {
            Some(v) => sum_big += v,
            None => zeros_big += 1,
        }
        let margin = if zeros_small > 0 && zeros_big > 0 {
            // Both products are zero: tie, satisfied.
            0.0
        } else if zeros_small > 0 {
            f64::INFINITY
        } else if zeros_big > 0 {
            f64::NEG_INFINITY
        } else {
            sum_big - sum_small
        };
        margins.push(margin);
    }
    margins
}

fn verdict_from_margins(
    relation: MajorizationRelation,
    margins: Vec<f64>,
    scale: f64,
) -> MajorizationVerdict {
    let mut worst_k = 1;
    let mut worst = f64::INFINITY;
    for (i, &m) in margins.iter().enumerate() {
        // Compare margins normalized by their k-dependent tolerance.
        let t = tolerance_at(i + 1, scale);
        if m / t < worst {
            worst = m / t;
            worst_k = i + 1;
        }
    }
    let tolerance = tolerance_at(worst_k, scale);
    let holds = margins
        .iter()
        .enumerate()
        .all(|(i, &m)| m >= -tolerance_at(i + 1, scale));
    MajorizationVerdict {
        relation,
        holds,
        margins,
        worst_k,
        tolerance,
    }
}

fn check_dims(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// Weak log-majorization `A ≺_wlog B`: prefix eigenvalue products of
/// `A` dominated by those of `B`.
pub fn weak_log_majorize(a: &SymMatrix, b: &SymMatrix) -> Result<MajorizationVerdict> {
    check_dims(a, b)?;
    let sa = log_spectrum(a)?;
    let sb = log_spectrum(b)?;
    let scale = sa.max_abs_log.max(sb.max_abs_log);
    let margins = prefix_margins(&sa, &sb);
    Ok(verdict_from_margins(
        MajorizationRelation::WeakLog,
        margins,
        scale,
    ))
}

/// Log-majorization `A ≺_log B`: weak log-majorization with equality of
/// the full products (determinants).
pub fn log_majorize(a: &SymMatrix, b: &SymMatrix) -> Result<MajorizationVerdict> {
    check_dims(a, b)?;
    let n = a.dim();
    let sa = log_spectrum(a)?;
    let sb = log_spectrum(b)?;
    let scale = sa.max_abs_log.max(sb.max_abs_log);
    let mut margins = prefix_margins(&sa, &sb);
    // The last prefix must be an equality, not just dominated.
    let holds_weak = margins
        .iter()
        .enumerate()
        .all(|(i, &m)| m >= -tolerance_at(i + 1, scale));
    let det_margin = margins[n - 1];
    let det_equal = if det_margin.is_infinite() {
        false
    } else {
        det_margin.abs() <= tolerance_at(n, scale)
    };
    // Record the determinant constraint by folding |margin_n| into the
    // final entry so failures point at k = n.
    if !det_margin.is_infinite() {
        margins[n - 1] = -det_margin.abs();
    }
    let mut verdict = verdict_from_margins(MajorizationRelation::Log, margins, scale);
    verdict.holds = holds_weak && det_equal;
    Ok(verdict)
}

/// Log-supermajorization `A ≺^{wlog} B`: tail eigenvalue products of
/// `A` dominate those of `B` (equivalently, for positive definite
/// inputs, `B⁻¹ ≺_wlog A⁻¹`).
pub fn log_supermajorize(a: &SymMatrix, b: &SymMatrix) -> Result<MajorizationVerdict> {
    check_dims(a, b)?;
    let sa = log_spectrum(a)?;
    let sb = log_spectrum(b)?;
    let scale = sa.max_abs_log.max(sb.max_abs_log);
    // Tail products: reverse the spectra (ascending), then the relation
    // asks prefix products of A (from the bottom) to dominate those of B.
    let rev = |s: &LogSpectrum| LogSpectrum {
        logs: s.logs.iter().rev().cloned().collect(),
        max_abs_log: s.max_abs_log,
    };
    let margins = prefix_margins(&rev(&sb), &rev(&sa));
    Ok(verdict_from_margins(
        MajorizationRelation::SuperLog,
        margins,
        scale,
    ))
}

/// Weak majorization `A ≺_w B`: prefix eigenvalue sums dominated.
pub fn weak_majorize(a: &SymMatrix, b: &SymMatrix) -> Result<MajorizationVerdict> {
    check_dims(a, b)?;
    let ea = a.eigh()?.eigenvalues;
    let eb = b.eigh()?.eigenvalues;
    let scale = ea
        .iter()
        .chain(&eb)
        .fold(0.0_f64, |m, &l| m.max(l.abs()));
    let mut margins = Vec::with_capacity(ea.len());
    let mut sa = 0.0;
    let mut sb = 0.0;
    for k in 0..ea.len() {
        sa += ea[k];
        sb += eb[k];
        margins.push(sb - sa);
    }
    Ok(verdict_from_margins(MajorizationRelation::Weak, margins, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflexive() {
        let a = SymMatrix::diag(&[3.0, 1.0, 0.5]);
        for f in [weak_log_majorize, log_majorize, log_supermajorize, weak_majorize] {
            let v = f(&a, &a).unwrap();
            assert!(v.holds, "{:?}", v.relation);
        }
    }

    #[test]
    fn direct_products() {
        let a = SymMatrix::diag(&[2.0, 2.0]);
        let b = SymMatrix::diag(&[4.0, 1.0]);
        assert!(weak_log_majorize(&a, &b).unwrap().holds);
        let rev = weak_log_majorize(&b, &a).unwrap();
        assert!(!rev.holds);
        assert_eq!(rev.worst_k, 1);
        // Equal determinants: diag(2,2) ≺_log diag(4,1) holds, mirror fails.
        assert!(log_majorize(&a, &b).unwrap().holds);
        assert!(!log_majorize(&b, &a).unwrap().holds);
    }

    #[test]
    fn supermajorize_matches_inverse_characterization() {
        let a = SymMatrix::diag(&[5.0, 2.0, 1.0]);
        let b = SymMatrix::diag(&[4.0, 2.5, 1.3]);
        for (x, y) in [(&a, &b), (&b, &a)] {
            let direct = log_supermajorize(x, y).unwrap().holds;
            let via_inverse = weak_log_majorize(
                &x.mat_pow(-1.0).unwrap(),
                &y.mat_pow(-1.0).unwrap(),
            )
            .unwrap()
            .holds;
            assert_eq!(direct, via_inverse);
        }
    }

    #[test]
    fn zero_eigenvalue_semantics() {
        // Zero products on the dominated side always satisfy ≺_wlog.
        let a = SymMatrix::diag(&[2.0, 0.0]);
        let b = SymMatrix::diag(&[3.0, 1.0]);
        assert!(weak_log_majorize(&a, &b).unwrap().holds);
        // Zero product only on the dominating side fails.
        assert!(!weak_log_majorize(&b, &a).unwrap().holds);
        // -inf vs -inf ties satisfy.
        let c = SymMatrix::diag(&[2.0, 0.0]);
        assert!(weak_log_majorize(&c, &c.scale(1.5)).unwrap().holds);
    }

    #[test]
    fn dimension_mismatch() {
        let a = SymMatrix::identity(2);
        let b = SymMatrix::identity(3);
        assert!(matches!(
            weak_log_majorize(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn weak_log_implies_weak() {
        // Spot check of the implication on simple spectra.
        let a = SymMatrix::diag(&[2.0, 1.8, 0.1]);
        let b = SymMatrix::diag(&[4.0, 1.0, 0.5]);
        if weak_log_majorize(&a, &b).unwrap().holds {
            assert!(weak_majorize(&a, &b).unwrap().holds);
        }
    }

    #[test]
    fn unitary_invariance() {
        use crate::randgen::{rand_orthogonal, Stream};
        let a = SymMatrix::diag(&[3.0, 1.0, 0.4]);
        let b = SymMatrix::diag(&[2.5, 1.5, 0.5]);
        let mut s = Stream::new(11, 0);
        let q = rand_orthogonal(&mut s, 3);
        let rot = |m: &SymMatrix| m.congruence_by(&crate::matcore::transpose(3, &q)).unwrap();
        let v1 = weak_log_majorize(&a, &b).unwrap();
        let v2 = weak_log_majorize(&rot(&a), &rot(&b)).unwrap();
        assert_eq!(v1.holds, v2.holds);
        for (m1, m2) in v1.margins.iter().zip(&v2.margins) {
            assert!((m1 - m2).abs() <= 1e-10 * (1.0 + m1.abs()));
        }
    }
}
