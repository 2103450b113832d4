//! Dense Hermitian eigensolves and SVDs with an explicit thread budget.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::linalg::svd::{self, ComputeSvdVectors};
use faer::traits::{math_utils, ComplexField};
use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Matrix scalars handled here: `f64` and `c64`.
pub trait Scalar: ComplexField<Real = f64> + Copy + Send + Sync + 'static {
    fn from_c64(z: c64) -> Self;
    fn to_c64(self) -> c64;
    fn conj_s(self) -> Self;
    fn from_re(x: f64) -> Self;
}

impl Scalar for f64 {
    fn from_c64(z: c64) -> Self {
        z.re
    }
    fn to_c64(self) -> c64 {
        c64::new(self, 0.0)
    }
    fn conj_s(self) -> Self {
        self
    }
    fn from_re(x: f64) -> Self {
        x
    }
}

impl Scalar for c64 {
    fn from_c64(z: c64) -> Self {
        z
    }
    fn to_c64(self) -> c64 {
        self
    }
    fn conj_s(self) -> Self {
        self.conj()
    }
    fn from_re(x: f64) -> Self {
        c64::new(x, 0.0)
    }
}

/// Fills an `nrows × ncols` matrix from `f(i, j)`, column by column.
pub fn build_matrix<T: Scalar>(
    nrows: usize,
    ncols: usize,
    exec: Exec,
    f: impl Fn(usize, usize) -> T + Sync + Send,
) -> Mat<T> {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let mut m = Mat::<T>::zeros(nrows, ncols);
        m.as_mut().par_col_chunks_mut(1).enumerate().for_each(|(j, mut col)| {
            for i in 0..nrows {
                col[(i, 0)] = f(i, j);
            }
        });
        return m;
    }
    let _ = exec;
    Mat::from_fn(nrows, ncols, f)
}

/// Eigenvalues of the Hermitian matrix `a` (lower triangle read), ascending.
pub fn eigvalsh<T: Scalar>(a: MatRef<'_, T>, exec: Exec) -> Result<Vec<f64>> {
    let n = a.nrows();
    square(a)?;
    let par = exec.faer_par();
    let mut s = Diag::<T>::zeros(n);
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::No,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(a, s.as_mut(), None, par, MemStack::new(&mut mem), Default::default())
        .map_err(|e| Error::Solver(format!("eigensolver: {e:?}")))?;
    Ok((0..n).map(|i| math_utils::real(&s[i])).collect())
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of Hermitian `a`.
pub fn eigh<T: Scalar>(a: MatRef<'_, T>, exec: Exec) -> Result<(Vec<f64>, Mat<T>)> {
    let n = a.nrows();
    square(a)?;
    let par = exec.faer_par();
    let mut s = Diag::<T>::zeros(n);
    let mut u = Mat::<T>::zeros(n, n);
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(
        a,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Solver(format!("eigensolver: {e:?}")))?;
    Ok(((0..n).map(|i| math_utils::real(&s[i])).collect(), u))
}

/// Singular values of `a`, nonincreasing.
pub fn singular_values<T: Scalar>(a: MatRef<'_, T>, exec: Exec) -> Result<Vec<f64>> {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(Vec::new());
    }
    let par = exec.faer_par();
    let mut s = Diag::<T>::zeros(k);
    let mut mem = MemBuffer::new(svd::svd_scratch::<T>(
        a.nrows(),
        a.ncols(),
        ComputeSvdVectors::No,
        ComputeSvdVectors::No,
        par,
        Default::default(),
    ));
    svd::svd(
        a,
        s.as_mut(),
        None,
        None,
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Solver(format!("svd: {e:?}")))?;
    let mut out: Vec<f64> = (0..k).map(|i| math_utils::real(&s[i]).abs()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// `V·diag(g(λ))·V*` for Hermitian `a` with eigenpairs `(λ, V)`.
pub fn spectral_map<T: Scalar>(a: MatRef<'_, T>, exec: Exec, g: impl Fn(f64) -> f64) -> Result<Mat<T>> {
    let (lam, v) = eigh(a, exec)?;
    let n = lam.len();
    let mut scaled = v.clone();
    for (j, &l) in lam.iter().enumerate() {
        let gl = T::from_re(g(l));
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)] * gl;
        }
    }
    let vh = Mat::from_fn(n, n, |i, j| v[(j, i)].conj_s());
    Ok(matmul(scaled.as_ref(), vh.as_ref(), exec))
}

/// Positive part `a_+` of a Hermitian matrix.
pub fn positive_part<T: Scalar>(a: MatRef<'_, T>, exec: Exec) -> Result<Mat<T>> {
    spectral_map(a, exec, |l| l.max(0.0))
}

/// `a·b`.
pub fn matmul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>, exec: Exec) -> Mat<T> {
    let mut c = Mat::<T>::zeros(a.nrows(), b.ncols());
    faer::linalg::matmul::matmul(c.as_mut(), faer::Accum::Replace, a, b, T::from_re(1.0), exec.faer_par());
    c
}

/// Largest `|a_ij − s·conj(a_ji)|` with `s = 1` (Hermitian) or `−1`
/// (skew-Hermitian), and the largest `|a_ij|`.
pub fn hermitian_defect<T: Scalar>(a: MatRef<'_, T>, skew: bool) -> (f64, f64) {
    let sign = if skew { -1.0 } else { 1.0 };
    let mut defect: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, j)].to_c64();
            let y = a[(j, i)].to_c64().conj() * sign;
            defect = defect.max((x - y).norm());
            scale = scale.max(x.norm());
        }
    }
    (defect, scale)
}

/// Frobenius norm, accumulated column by column in a fixed order.
pub fn frobenius<T: Scalar>(a: MatRef<'_, T>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += math_utils::abs2(&a[(i, j)]);
        }
    }
    s.sqrt()
}

fn square<T: Scalar>(a: MatRef<'_, T>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::ContractViolation(format!(
            "Hermitian solve needs a square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}
