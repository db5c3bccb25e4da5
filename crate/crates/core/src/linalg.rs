//! Dense linear-algebra helpers on top of `nalgebra`.
//!
//! Nonsymmetric eigendecompositions (eigenvalues and right eigenvectors)
//! are delegated to `faer`; everything else stays in `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SvoError};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Symmetric part `(M + M^T) / 2`.
pub fn sym_part(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn sym_min_eig(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    sym_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest singular value.
pub fn spectral_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Induced 1-norm (max column sum).
pub fn norm1(m: &Mat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU factorization with an attached reciprocal condition estimate.
#[derive(Debug, Clone)]
pub struct Factorized {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    inverse: Mat,
    rcond: f64,
}

impl Factorized {
    /// Factors `m`; fails with `SingularSystem(name)` when the reciprocal
    /// 1-norm condition number falls below `min_rcond`.
    pub fn new(m: &Mat, name: &'static str, min_rcond: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(SvoError::DimensionMismatch(format!("{name} is not square")));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(SvoError::SingularSystem(name));
        }
        let lu = m.clone().lu();
        let inverse = lu.try_inverse().ok_or(SvoError::SingularSystem(name))?;
        let denom = norm1(m) * norm1(&inverse);
        let rcond = if denom.is_finite() && denom > 0.0 { 1.0 / denom } else { 0.0 };
        if rcond < min_rcond {
            return Err(SvoError::SingularSystem(name));
        }
        Ok(Self { lu, inverse, rcond })
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn inverse(&self) -> &Mat {
        &self.inverse
    }

    pub fn solve(&self, rhs: &Vector) -> Vector {
        self.lu.solve(rhs).unwrap_or_else(|| &self.inverse * rhs)
    }
}

/// Reciprocal 1-norm condition number, 0 for singular matrices.
pub fn rcond(m: &Mat) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => {
            let denom = norm1(m) * norm1(&inv);
            if denom.is_finite() && denom > 0.0 {
                1.0 / denom
            } else {
                0.0
            }
        }
        None => 0.0,
    }
}

/// Solves `m x = rhs` with one step of iterative refinement and checks the
/// residual against `res_tol * (1 + ||rhs||)`.
pub fn solve_checked(m: &Mat, rhs: &Vector, name: &'static str, min_rcond: f64, res_tol: f64) -> Result<(Vector, f64)> {
    let fact = Factorized::new(m, name, min_rcond)?;
    let mut x = fact.solve(rhs);
    let r = rhs - m * &x;
    x += fact.solve(&r);
    let residual = (rhs - m * &x).norm();
    if !residual.is_finite() || residual > res_tol * (1.0 + rhs.norm()) {
        return Err(SvoError::SingularSystem(name));
    }
    Ok((x, residual))
}

/// Eigenvalues and unit-norm right eigenvectors of a real square matrix.
///
/// Each eigenvector is scaled to unit 2-norm with its largest-magnitude
/// component real and positive. Eigenpairs are ordered by real part, then
/// imaginary part. The decomposition runs single-threaded so results do
/// not depend on the worker count; callers parallelize across matrices.
pub fn eigen(m: &Mat) -> Result<(Vec<Complex64>, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(SvoError::Eigen("matrix has non-finite entries".into()));
    }
    faer::set_global_parallelism(faer::Par::Seq);
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let evd = fm.eigen().map_err(|e| SvoError::Eigen(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut pairs: Vec<(Complex64, CVector)> = (0..n)
        .map(|k| {
            let lambda = s[k];
            let mut v = CVector::from_fn(n, |i, _| u[(i, k)]);
            normalize_eigvec(&mut v);
            (Complex64::new(lambda.re, lambda.im), v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });
    let values = pairs.iter().map(|p| p.0).collect();
    let mut vecs = CMat::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vecs.set_column(k, v);
    }
    Ok((values, vecs))
}

pub(crate) fn normalize_eigvec(v: &mut CVector) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return;
    }
    let max_mag = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max_mag * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    let scale = phase.conj() / norm;
    for z in v.iter_mut() {
        *z *= scale;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
}

/// 2-norm condition number of a complex matrix.
pub fn cond2(m: &CMat) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn to_complex_vec(v: &Vector) -> CVector {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Block-diagonal assembly of square or rectangular blocks.
pub fn block_diag(blocks: &[Mat]) -> Mat {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Assembles `[[tl, tr], [bl, br]]`.
pub fn block2x2(tl: &Mat, tr: &Mat, bl: &Mat, br: &Mat) -> Mat {
    let (r1, c1) = tl.shape();
    let (r2, c2) = br.shape();
    let mut out = Mat::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(tl);
    out.view_mut((0, c1), (r1, c2)).copy_from(tr);
    out.view_mut((r1, 0), (r2, c1)).copy_from(bl);
    out.view_mut((r1, c1), (r2, c2)).copy_from(br);
    out
}

pub fn concat(top: &Vector, bottom: &Vector) -> Vector {
    let mut out = Vector::zeros(top.len() + bottom.len());
    out.rows_mut(0, top.len()).copy_from(top);
    out.rows_mut(top.len(), bottom.len()).copy_from(bottom);
    out
}

/// Angle between two vectors folded into `[0, pi/2]`, reported as
/// `1 - |cos|`.
pub fn alignment_error(a: &Vector, b: &Vector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    1.0 - (a.dot(b) / (na * nb)).abs().min(1.0)
}

pub fn rel_diff(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
