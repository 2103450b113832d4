use std::io::{Read, Write};

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use super::coeffs::{fourier_coeffs_with, CoeffMethod, CoeffTable, DEFAULT_OVERSAMPLE};
use super::lattice::LatticeBasis;
use super::spectral::{self, Scalar};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::orlicz::TorusFunction;
use crate::seq::{mu_from_eigs, SingularValueSeq};

/// Largest Hermiticity defect tolerated, relative to the largest entry.
pub const HERMITIAN_RTOL: f64 = 1e-10;

/// Which product of `M_f` and the weight `W = (1−Δ)^{−d/4}` a matrix holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `W M_f W`: entry `w(k)·ĉ(k−l)·w(l)`.
    Symmetric,
    /// `M_f W²`: entry `ĉ(k−l)·w(l)²`.
    Asymmetric,
    /// `M_f`: entry `ĉ(k−l)`.
    Multiplication,
    /// `[M_f, W]`: entry `ĉ(k−l)·(w(l) − w(k))`.
    Commutator,
    /// `M_f W`: entry `ĉ(k−l)·w(l)`.
    HalfWeighted,
}

impl OperatorKind {
    fn entry(self, c: c64, wk: f64, wl: f64) -> c64 {
        match self {
            OperatorKind::Symmetric => c * (wk * wl),
            OperatorKind::Asymmetric => c * (wl * wl),
            OperatorKind::Multiplication => c,
            OperatorKind::Commutator => c * (wl - wk),
            OperatorKind::HalfWeighted => c * wl,
        }
    }
}

/// Dense matrix storage; real when all coefficients are real.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

impl Matrix {
    pub fn nrows(&self) -> usize {
        match self {
            Matrix::Real(m) => m.nrows(),
            Matrix::Complex(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Matrix::Real(m) => m.ncols(),
            Matrix::Complex(m) => m.ncols(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        match self {
            Matrix::Real(m) => c64::new(m[(i, j)], 0.0),
            Matrix::Complex(m) => m[(i, j)],
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Matrix::Real(_))
    }

    pub fn to_complex(&self) -> Mat<c64> {
        match self {
            Matrix::Real(m) => Mat::from_fn(m.nrows(), m.ncols(), |i, j| c64::new(m[(i, j)], 0.0)),
            Matrix::Complex(m) => m.clone(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        match self {
            Matrix::Real(m) => spectral::frobenius(m.as_ref()),
            Matrix::Complex(m) => spectral::frobenius(m.as_ref()),
        }
    }

    /// `(max |A − s·A*|, max |A|)`.
    pub fn hermitian_defect(&self, skew: bool) -> (f64, f64) {
        match self {
            Matrix::Real(m) => spectral::hermitian_defect(m.as_ref(), skew),
            Matrix::Complex(m) => spectral::hermitian_defect(m.as_ref(), skew),
        }
    }

    fn build(real: bool, n: usize, exec: Exec, f: impl Fn(usize, usize) -> c64 + Sync + Send) -> Self {
        if real {
            Matrix::Real(spectral::build_matrix(n, n, exec, |i, j| f(i, j).re))
        } else {
            Matrix::Complex(spectral::build_matrix(n, n, exec, f))
        }
    }

    /// Binary container: two little-endian `u64` (rows, cols), then
    /// row-major `(re, im)` pairs of little-endian `f64`.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        let (r, c) = (self.nrows(), self.ncols());
        let mut buf = Vec::with_capacity(16 + 16 * r * c);
        buf.extend_from_slice(&(r as u64).to_le_bytes());
        buf.extend_from_slice(&(c as u64).to_le_bytes());
        for i in 0..r {
            for j in 0..c {
                let z = self.get(i, j);
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<Mat<c64>> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let rows = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let cols = u64::from_le_bytes(word) as usize;
        let mut data = vec![0u8; 16 * rows * cols];
        r.read_exact(&mut data)?;
        let val = |k: usize| f64::from_le_bytes(data[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        Ok(Mat::from_fn(rows, cols, |i, j| {
            let k = 2 * (i * cols + j);
            c64::new(val(k), val(k + 1))
        }))
    }
}

/// A Fourier-lattice truncation of an operator built from `M_f` and `W`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    basis: LatticeBasis,
    kind: OperatorKind,
    function: TorusFunction,
    matrix: Matrix,
}

/// Options for operator construction.
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub oversample: usize,
    pub method: CoeffMethod,
    pub exec: Exec,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            oversample: DEFAULT_OVERSAMPLE,
            method: CoeffMethod::Auto,
            exec: Exec::best(),
        }
    }
}

/// Coefficients of `f` covering every difference `k − l` in `basis`.
pub fn coeffs_for_basis(f: &TorusFunction, basis: &LatticeBasis, opts: &BuildOptions) -> Result<CoeffTable> {
    if f.dim() != basis.dim() {
        return Err(Error::InvalidParameter(format!(
            "function lives on T^{} but the basis on T^{}",
            f.dim(),
            basis.dim()
        )));
    }
    fourier_coeffs_with(
        f,
        basis.max_difference().max(1),
        opts.oversample,
        opts.method,
        opts.exec,
    )
}

impl TruncatedOperator {
    /// Builds `kind` for `f` on `basis`, computing coefficients.
    pub fn build(kind: OperatorKind, f: &TorusFunction, basis: &LatticeBasis, opts: &BuildOptions) -> Result<Self> {
        let table = coeffs_for_basis(f, basis, opts)?;
        Self::from_coeffs(kind, f, basis, &table, opts.exec)
    }

    /// Builds `kind` from a precomputed table (shared across kinds).
    pub fn from_coeffs(
        kind: OperatorKind,
        f: &TorusFunction,
        basis: &LatticeBasis,
        table: &CoeffTable,
        exec: Exec,
    ) -> Result<Self> {
        if kind == OperatorKind::Symmetric && !f.is_real() {
            return Err(Error::InvalidFunction(format!(
                "the symmetric operator needs a real function, got {}",
                f.family().name()
            )));
        }
        if table.max_freq() < basis.max_difference() || table.dim() != basis.dim() {
            return Err(Error::BuildFailure(format!(
                "coefficient window ±{} does not cover basis differences ±{}",
                table.max_freq(),
                basis.max_difference()
            )));
        }
        let d = basis.dim();
        let side = table.side() as i64;
        let mut strides = vec![1i64; d];
        for a in (0..d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * side;
        }
        let centre: i64 = strides.iter().map(|s| s * table.max_freq()).sum();
        let offsets: Vec<i64> = basis
            .points()
            .map(|k| k.iter().zip(&strides).map(|(x, s)| x * s).sum())
            .collect();
        let w = basis.weights();
        let raw = table.raw();
        let n = basis.len();
        let matrix = Matrix::build(table.is_real(), n, exec, |i, j| {
            let c = raw[(centre + offsets[i] - offsets[j]) as usize];
            kind.entry(c, w[i], w[j])
        });
        let op = Self {
            basis: basis.clone(),
            kind,
            function: f.clone(),
            matrix,
        };
        op.check_structure()?;
        Ok(op)
    }

    fn check_structure(&self) -> Result<()> {
        let skew = match (self.kind, self.function.is_real()) {
            (OperatorKind::Symmetric, _) | (OperatorKind::Multiplication, true) => false,
            (OperatorKind::Commutator, true) => true,
            _ => return Ok(()),
        };
        let (defect, scale) = self.matrix.hermitian_defect(skew);
        if defect > HERMITIAN_RTOL * scale {
            return Err(Error::BuildFailure(format!(
                "{:?} matrix is not {}Hermitian: defect {defect:.3e} vs scale {scale:.3e}",
                self.kind,
                if skew { "skew-" } else { "" }
            )));
        }
        Ok(())
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn function(&self) -> &TorusFunction {
        &self.function
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Self-adjoint: symmetric kind, or `M_f` with real `f`.
    pub fn is_hermitian(&self) -> bool {
        matches!(self.kind, OperatorKind::Symmetric)
            || (self.kind == OperatorKind::Multiplication && self.function.is_real())
    }

    /// All eigenvalues, descending.
    pub fn eig_hermitian(&self, exec: Exec) -> Result<Vec<f64>> {
        if !self.is_hermitian() {
            return Err(Error::ContractViolation(format!(
                "{:?} operator of {} is not Hermitian",
                self.kind,
                self.function.label()
            )));
        }
        let mut e = match &self.matrix {
            Matrix::Real(m) => spectral::eigvalsh(m.as_ref(), exec)?,
            Matrix::Complex(m) => spectral::eigvalsh(m.as_ref(), exec)?,
        };
        e.reverse();
        Ok(e)
    }

    /// Singular values: `|λ|` for Hermitian operators, an SVD otherwise.
    pub fn singvals(&self, exec: Exec) -> Result<SingularValueSeq> {
        if self.is_hermitian() {
            return Ok(mu_from_eigs(&self.eig_hermitian(exec)?));
        }
        let s = match &self.matrix {
            Matrix::Real(m) => spectral::singular_values(m.as_ref(), exec)?,
            Matrix::Complex(m) => spectral::singular_values(m.as_ref(), exec)?,
        };
        SingularValueSeq::from_unsorted(s)
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.frobenius()
    }

    pub fn write_binary(&self, w: impl Write) -> Result<()> {
        self.matrix.write_binary(w)
    }
}

/// `W M_f W` on `basis`.
pub fn build_symmetric(f: &TorusFunction, basis: &LatticeBasis) -> Result<TruncatedOperator> {
    TruncatedOperator::build(OperatorKind::Symmetric, f, basis, &BuildOptions::default())
}

/// `M_f W²` on `basis`.
pub fn build_asymmetric(f: &TorusFunction, basis: &LatticeBasis) -> Result<TruncatedOperator> {
    TruncatedOperator::build(OperatorKind::Asymmetric, f, basis, &BuildOptions::default())
}

/// `[M_f, W]` on `basis`.
pub fn build_commutator(f: &TorusFunction, basis: &LatticeBasis) -> Result<TruncatedOperator> {
    TruncatedOperator::build(OperatorKind::Commutator, f, basis, &BuildOptions::default())
}

/// `M_f` on `basis`.
pub fn build_multiplication(f: &TorusFunction, basis: &LatticeBasis) -> Result<TruncatedOperator> {
    TruncatedOperator::build(OperatorKind::Multiplication, f, basis, &BuildOptions::default())
}

/// Writes `rank,singular_value` rows.
pub fn write_spectrum_csv(seq: &SingularValueSeq, mut w: impl Write) -> Result<()> {
    let mut out = String::from("rank,singular_value\n");
    for (k, v) in seq.values().iter().enumerate() {
        out.push_str(&format!("{k},{v:.17e}\n"));
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// Converts a generic matrix reference into storage of the matching kind.
pub fn matrix_from<T: Scalar>(m: MatRef<'_, T>) -> Matrix {
    let z = Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].to_c64());
    if z.col_iter().all(|c| c.iter().all(|x| x.im == 0.0)) {
        Matrix::Real(Mat::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)].re))
    } else {
        Matrix::Complex(z)
    }
}
