//! Dense numerical helpers shared by the rest of the crate.
//!
//! Everything here works on `nalgebra` dense types. Complex scalars are
//! `Complex64` (re-exported from `nalgebra`'s `num_complex`).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;

/// Real dense matrix, used for the real-stacked configuration systems.
pub type RealMatrix = DMatrix<f64>;

/// Complex dense matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default relative cut-off for singular values in [`min_norm_least_squares`].
pub const DEFAULT_RANK_RTOL: f64 = 1e-10;

/// Absolute floor used wherever a relative tolerance meets an exact zero.
pub const ABS_FLOOR: f64 = 1e-300;

/// A non-empty vector of finite complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("complex vector must have at least one entry"));
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::input(format!("entry {k} is not finite")));
        }
        Ok(ComplexVec(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.0)
    }
}

impl std::ops::Index<usize> for ComplexVec {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

/// Euclidean norm of a complex slice, computed with scaling so that very large
/// or very small entries do not overflow.
pub fn norm2(v: &[Complex64]) -> f64 {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

/// Minimum-norm least-squares solution of `A x ≈ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsSolution {
    pub x: Vec<f64>,
    /// `‖A x − b‖₂` of the returned `x`.
    pub residual_norm: f64,
    /// Number of singular values kept.
    pub numerical_rank: usize,
}

struct ThinSvd {
    u: RealMatrix,
    sigma: Vec<f64>,
    v: RealMatrix,
}

/// `A = U diag(σ) Vᵀ` with `min(m, n)` columns in `U` and `V`.
///
/// Computed with faer: nalgebra's bidiagonal SVD can lose all accuracy on
/// exactly rank-deficient input, which is the case the tree optimizer cares about.
fn thin_svd(a: &RealMatrix) -> Result<ThinSvd> {
    let m = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let svd = m.thin_svd().map_err(|e| Error::numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let k = s.nrows();
    Ok(ThinSvd {
        u: RealMatrix::from_fn(a.nrows(), k, |i, j| u[(i, j)]),
        sigma: (0..k).map(|i| s[i]).collect(),
        v: RealMatrix::from_fn(a.ncols(), k, |i, j| v[(i, j)]),
    })
}

/// Eigenvalues `λ` and orthonormal eigenvectors (columns of `Q`) of a real
/// symmetric matrix, `M = Q diag(λ) Qᵀ`. Only the lower triangle is read.
pub fn symmetric_eigen(m: &RealMatrix) -> Result<(Vec<f64>, RealMatrix)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::input("eigendecomposition needs a square matrix"));
    }
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::numerical(format!("eigendecomposition did not converge: {e:?}")))?;
    let (q, lambda) = (eig.U(), eig.S().column_vector());
    Ok(((0..n).map(|i| lambda[i]).collect(), RealMatrix::from_fn(n, n, |i, j| q[(i, j)])))
}

/// Solves `min ‖A x − b‖₂` and, among all minimizers, returns the one of least
/// Euclidean norm.
///
/// Uses the SVD `A = U Σ Vᵀ`; singular values `σ ≤ rank_rtol · σ_max` are
/// treated as zero. Normal equations are deliberately avoided: the systems built
/// by the tree-connected optimizer are rank deficient for adversarial channels.
pub fn min_norm_least_squares(a: &RealMatrix, b: &[f64], rank_rtol: f64) -> Result<LsSolution> {
    if a.nrows() != b.len() {
        return Err(Error::input(format!("matrix has {} rows but right-hand side has {} entries", a.nrows(), b.len())));
    }
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::input("matrix must be non-empty"));
    }
    if !(rank_rtol > 0.0 && rank_rtol < 1.0) {
        return Err(Error::input(format!("rank tolerance {rank_rtol} not in (0, 1)")));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::input("matrix or right-hand side contains non-finite values"));
    }

    let svd = thin_svd(a)?;
    let sigma_max = svd.sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = (rank_rtol * sigma_max).max(ABS_FLOOR);

    let b_vec = DVector::from_column_slice(b);
    let mut x = DVector::zeros(a.ncols());
    let mut rank = 0;
    for (k, &sigma) in svd.sigma.iter().enumerate() {
        if sigma <= cutoff {
            continue;
        }
        rank += 1;
        let coeff = svd.u.column(k).dot(&b_vec) / sigma;
        x += svd.v.column(k) * coeff;
    }

    let residual_norm = (a * &x - &b_vec).norm();
    Ok(LsSolution { x: x.as_slice().to_vec(), residual_norm, numerical_rank: rank })
}

/// Numerical rank of `a`: number of singular values above `rank_rtol · σ_max`.
pub fn numerical_rank(a: &RealMatrix, rank_rtol: f64) -> Result<usize> {
    let sv = thin_svd(a)?.sigma;
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = (rank_rtol * sigma_max).max(ABS_FLOOR);
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

/// Outcome of [`check_symmetric_unitary`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryCheck {
    /// `max |M − Mᵀ|` entrywise.
    pub symmetry_defect: f64,
    /// `max |MᴴM − I|` entrywise.
    pub unitarity_defect: f64,
    pub ok: bool,
}

/// Measures how far `m` is from being symmetric and unitary.
pub fn check_symmetric_unitary(m: &ComplexMatrix, tol: f64) -> Result<UnitaryCheck> {
    symmetric_unitary_defects(m, tol, tol)
}

pub(crate) fn symmetric_unitary_defects(m: &ComplexMatrix, sym_tol: f64, unit_tol: f64) -> Result<UnitaryCheck> {
    if !m.is_square() {
        return Err(Error::input(format!("matrix is {}x{}, expected square", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    let mut symmetry_defect: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            symmetry_defect = symmetry_defect.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    let gram = m.adjoint() * m;
    let mut unitarity_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            unitarity_defect = unitarity_defect.max((gram[(i, j)] - target).norm());
        }
    }
    Ok(UnitaryCheck {
        symmetry_defect,
        unitarity_defect,
        ok: symmetry_defect <= sym_tol && unitarity_defect <= unit_tol,
    })
}
