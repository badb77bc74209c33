//! Dense real symmetric matrices, the cyclic-Jacobi eigensolver, and
//! Hermitian functional calculus.
//!
//! All operators handled by this crate live in this type. Matrices are
//! immutable after construction, dimension is capped at
//! [`MAX_DIM`], and every operation is a pure function of its inputs so
//! values can be shared freely across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funclib::ScalarFn;

/// Hard cap on matrix dimension; the O(n³)-per-sweep Jacobi solver is
/// meant for desk-scale verification, not large problems.
pub const MAX_DIM: usize = 64;

/// Relative tolerance for the symmetry check at construction.
pub const SYM_TOL: f64 = 1e-12;

/// Jacobi sweep budget before reporting [`Error::NonConvergence`].
pub const JACOBI_SWEEP_BUDGET: usize = 30;

/// Convergence threshold: off-diagonal Frobenius mass relative to the
/// Frobenius norm of the input.
pub const JACOBI_REL_TOL: f64 = 1e-14;

/// Relative threshold below which an eigenvalue is treated as zero for
/// positive-semidefinite classification and clamping. The scale is
/// `max(1, |λ|_max)`.
pub const PSD_TOL: f64 = 1e-10;

/// Serialized shape of a matrix: `{"n": <int>, "data": [[row0...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    data: Vec<Vec<f64>>,
}

/// Dense real symmetric matrix, row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl TryFrom<MatrixRepr> for SymMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.n || r.data.iter().any(|row| row.len() != r.n) {
            return Err(Error::InvalidMatrix(format!(
                "data shape does not match declared dimension {}",
                r.n
            )));
        }
        let flat: Vec<f64> = r.data.into_iter().flatten().collect();
        SymMatrix::new(r.n, flat)
    }
}

impl From<SymMatrix> for MatrixRepr {
    fn from(m: SymMatrix) -> Self {
        let data = (0..m.n)
            .map(|i| m.data[i * m.n..(i + 1) * m.n].to_vec())
            .collect();
        MatrixRepr { n: m.n, data }
    }
}

impl SymMatrix {
    /// Builds a symmetric matrix from row-major entries.
    ///
    /// Rejects non-finite entries, dimensions outside `1..=MAX_DIM`,
    /// and asymmetry beyond `SYM_TOL` relative to the largest entry;
    /// the stored matrix is symmetrized to `(M + Mᵀ)/2`.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidMatrix(format!(
                "dimension {n} outside 1..={MAX_DIM}"
            )));
        }
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let max_abs = data.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let tol = SYM_TOL * max_abs.max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (data[i * n + j] - data[j * n + i]).abs() > tol {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetry at ({i},{j}) exceeds tolerance"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(n, data))
    }

    /// Builds from row-major entries without the asymmetry check,
    /// symmetrizing unconditionally. Used internally for products that
    /// are symmetric up to round-off.
    pub(crate) fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        SymMatrix { n, data }
    }

    /// Builds a matrix by evaluating `f(i, j)` for the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self::new(n, data)
    }

    /// The zero matrix.
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry accessor.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Trace.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Entrywise sum with another matrix.
    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SymMatrix { n: self.n, data })
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SymMatrix { n: self.n, data })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    fn check_dim(&self, other: &SymMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Symmetric part of the product `self · other` (exact when the
    /// two commute; used for chains that are symmetric up to round-off).
    pub fn mul_sym(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_dim(other)?;
        let g = mat_mul(self.n, &self.data, &other.data);
        Ok(SymMatrix::symmetrized(self.n, g))
    }

    /// Sandwich product `self · x · self`, symmetrized.
    pub fn sandwich(&self, x: &SymMatrix) -> Result<SymMatrix> {
        self.check_dim(x)?;
        let sx = mat_mul(self.n, &self.data, &x.data);
        let sxs = mat_mul(self.n, &sx, &self.data);
        Ok(SymMatrix::symmetrized(self.n, sxs))
    }

    /// Congruence `tᵀ · self · t` by a general (not necessarily
    /// symmetric) row-major square matrix `t`.
    pub fn congruence_by(&self, t: &[f64]) -> Result<SymMatrix> {
        if t.len() != self.n * self.n {
            return Err(Error::DimensionMismatch(self.n, t.len() / self.n.max(1)));
        }
        let mt = mat_mul(self.n, &self.data, t);
        let tt = transpose(self.n, t);
        let r = mat_mul(self.n, &tt, &mt);
        Ok(SymMatrix::symmetrized(self.n, r))
    }

    /// Eigendecomposition by cyclic Jacobi rotations.
    ///
    /// Converges when the off-diagonal Frobenius mass drops below
    /// `JACOBI_REL_TOL` times the Frobenius norm of the input, within a
    /// budget of `JACOBI_SWEEP_BUDGET` sweeps. Eigenvalues are sorted
    /// descending with stable tie order, so repeated runs on identical
    /// bits produce identical output.
    pub fn eigh(&self) -> Result<Spectral> {
        let n = self.n;
        let norm = self.frobenius();
        let mut a = self.data.clone();
        let mut q = SymMatrix::identity(n).data;
        let target = JACOBI_REL_TOL * norm;

        let mut converged = off_diag_frobenius(n, &a) <= target;
        let mut sweeps = 0;
        while !converged && sweeps < JACOBI_SWEEP_BUDGET {
            for p in 0..n {
                for r in (p + 1)..n {
                    let apr = a[p * n + r];
                    if apr == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let arr = a[r * n + r];
                    // Stable rotation choice (smaller angle root).
                    let theta = (arr - app) / (2.0 * apr);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Update rows/columns p and r of A.
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akr = a[k * n + r];
                        a[k * n + p] = c * akp - s * akr;
                        a[k * n + r] = s * akp + c * akr;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let ark = a[r * n + k];
                        a[p * n + k] = c * apk - s * ark;
                        a[r * n + k] = s * apk + c * ark;
                    }
                    // Accumulate the rotation into Q (columns are
                    // eigenvector candidates).
                    for k in 0..n {
                        let qkp = q[k * n + p];
                        let qkr = q[k * n + r];
                        q[k * n + p] = c * qkp - s * qkr;
                        q[k * n + r] = s * qkp + c * qkr;
                    }
                }
            }
            sweeps += 1;
            converged = off_diag_frobenius(n, &a) <= target;
        }
        if !converged {
            return Err(Error::NonConvergence {
                sweeps,
                offdiag: off_diag_frobenius(n, &a),
            });
        }

        let raw: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort: descending by value, ties keep original index order.
        order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
        let mut vectors = vec![0.0; n * n];
        for (col, &src) in order.iter().enumerate() {
            for k in 0..n {
                vectors[k * n + col] = q[k * n + src];
            }
        }
        Ok(Spectral {
            n,
            eigenvalues,
            vectors,
        })
    }

    /// Applies a scalar map to the spectrum: `Q f(Λ) Qᵀ`.
    ///
    /// The closure receives each eigenvalue exactly as produced by
    /// [`SymMatrix::eigh`] (no clamping); callers wanting semidefinite
    /// clamping should go through [`SymMatrix::apply_fn`] /
    /// [`SymMatrix::mat_pow`].
    pub fn apply_spectral(&self, f: impl Fn(f64) -> Result<f64>) -> Result<SymMatrix> {
        let spec = self.eigh()?;
        let mapped: Result<Vec<f64>> = spec.eigenvalues.iter().map(|&l| f(l)).collect();
        Ok(spec.reassemble(&mapped?))
    }

    /// Hermitian functional calculus with a catalog function: applies
    /// `f` to every eigenvalue after semidefinite clamping.
    ///
    /// Eigenvalues within the `PSD_TOL` band around zero are treated as
    /// exactly zero and evaluated through the finite extension
    /// `f(0⁺)` when the function has one; eigenvalues below the band
    /// are a domain violation (the catalog lives on `(0, ∞)`).
    pub fn apply_fn(&self, f: &ScalarFn) -> Result<SymMatrix> {
        let spec = self.eigh()?;
        let clamped = clamp_spectrum(&spec.eigenvalues)?;
        let zero_value = f.value_at_zero();
        let mapped: Result<Vec<f64>> = clamped
            .iter()
            .map(|&l| {
                if l == 0.0 {
                    zero_value.ok_or_else(|| {
                        Error::DomainViolation(format!(
                            "{f} has no finite value at 0 but the spectrum touches 0"
                        ))
                    })
                } else {
                    f.eval(l)
                }
            })
            .collect();
        Ok(spec.reassemble(&mapped?))
    }

    /// Real matrix power `M^p` through the spectrum.
    ///
    /// Requires positive definiteness for `p < 0` and positive
    /// semidefiniteness (up to clamping) for `p ≥ 0`; `M^0` is the
    /// support projection (`0^0 := 0` on the kernel).
    pub fn mat_pow(&self, p: f64) -> Result<SymMatrix> {
        let spec = self.eigh()?;
        let clamped = clamp_spectrum(&spec.eigenvalues)?;
        if p < 0.0 {
            if clamped.iter().any(|&l| l == 0.0) {
                return Err(Error::DomainViolation(format!(
                    "negative power {p} of a singular matrix"
                )));
            }
        }
        let mapped: Vec<f64> = clamped
            .iter()
            .map(|&l| {
                if l == 0.0 {
                    0.0
                } else if p == 0.0 {
                    1.0
                } else {
                    l.powf(p)
                }
            })
            .collect();
        Ok(spec.reassemble(&mapped))
    }

    /// Operator norm: largest absolute eigenvalue.
    pub fn op_norm(&self) -> Result<f64> {
        let spec = self.eigh()?;
        Ok(spec
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, l| m.max(l.abs())))
    }

    /// Smallest eigenvalue.
    pub fn lambda_min(&self) -> Result<f64> {
        let spec = self.eigh()?;
        Ok(*spec.eigenvalues.last().expect("n >= 1"))
    }

    /// `B^{1/2} · X · B^{1/2}` (self is `B`), re-symmetrized.
    pub fn congruence(&self, x: &SymMatrix) -> Result<SymMatrix> {
        let root = self.mat_pow(0.5)?;
        root.sandwich(x)
    }

    /// Orthogonal projection onto the span of eigenvectors with
    /// eigenvalue above the zero band.
    pub fn support_projection(&self) -> Result<SymMatrix> {
        let spec = self.eigh()?;
        let clamped = clamp_spectrum(&spec.eigenvalues)?;
        let mapped: Vec<f64> = clamped
            .iter()
            .map(|&l| if l > 0.0 { 1.0 } else { 0.0 })
            .collect();
        Ok(spec.reassemble(&mapped))
    }

    /// Classification of the spectrum against the `PSD_TOL` zero band.
    pub fn psd_class(&self) -> Result<PsdClass> {
        let spec = self.eigh()?;
        let scale = spec
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, l| m.max(l.abs()))
            .max(1.0);
        let thr = PSD_TOL * scale;
        let lambda_min = *spec.eigenvalues.last().expect("n >= 1");
        let support_rank = spec.eigenvalues.iter().filter(|&&l| l > thr).count();
        let classification = if lambda_min > thr {
            PsdKind::PositiveDefinite
        } else if lambda_min >= -thr {
            PsdKind::PsdSingular
        } else {
            PsdKind::Indefinite
        };
        Ok(PsdClass {
            classification,
            lambda_min,
            support_rank,
        })
    }
}

/// Eigendecomposition of a [`SymMatrix`]: descending eigenvalues and an
/// orthogonal matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectral {
    n: usize,
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Row-major orthogonal matrix; column `i` pairs with
    /// `eigenvalues[i]`.
    vectors: Vec<f64>,
}

impl Spectral {
    /// Dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The eigenvector matrix, row-major, columns = eigenvectors.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// Column `i` as a vector.
    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|k| self.vectors[k * self.n + i]).collect()
    }

    /// Rebuilds `Q · diag(values) · Qᵀ` with replacement eigenvalues.
    pub fn reassemble(&self, values: &[f64]) -> SymMatrix {
        let n = self.n;
        debug_assert_eq!(values.len(), n);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.vectors[i * n + k] * values[k] * self.vectors[j * n + k];
                }
                out[i * n + j] = acc;
                out[j * n + i] = acc;
            }
        }
        SymMatrix { n, data: out }
    }
}

/// Spectrum classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdKind {
    PositiveDefinite,
    PsdSingular,
    Indefinite,
}

/// Result of classifying a spectrum against the zero band.
#[derive(Debug, Clone)]
pub struct PsdClass {
    pub classification: PsdKind,
    pub lambda_min: f64,
    pub support_rank: usize,
}

/// Clamps a spectrum for semidefinite operations: eigenvalues within
/// the `PSD_TOL` band become exactly zero; eigenvalues below the band
/// are a domain violation.
pub fn clamp_spectrum(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let scale = eigenvalues
        .iter()
        .fold(0.0_f64, |m, l| m.max(l.abs()))
        .max(1.0);
    let thr = PSD_TOL * scale;
    eigenvalues
        .iter()
        .map(|&l| {
            if l.abs() <= thr {
                Ok(0.0)
            } else if l < 0.0 {
                Err(Error::DomainViolation(format!(
                    "eigenvalue {l:e} below the semidefinite band (threshold {thr:e})"
                )))
            } else {
                Ok(l)
            }
        })
        .collect()
}

/// Row-major product of two square matrices.
pub(crate) fn mat_mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Row-major transpose of a square matrix.
pub(crate) fn transpose(n: usize, a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

fn off_diag_frobenius(n: usize, a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j] * a[i * n + j];
            }
        }
    }
    acc.sqrt()
}
