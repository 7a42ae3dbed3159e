//! Dense complex linear-algebra kernel.
//!
//! Provides the [`ComplexMatrix`] carrier type, a cyclic-Jacobi Hermitian
//! eigensolver, the matrix absolute value `|M| = (M*M)^{1/2}`, PSD square
//! roots, the operator norm, Loewner-order and accretivity predicates, and
//! the Schur-complement block positivity test.
//!
//! All comparisons are scale-aware: a tolerance configuration `(rel, abs)`
//! turns into the scale `abs + rel·max(1, s)` where `s` measures the inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

/// Relative/absolute tolerance pair used by every predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ToleranceConfig {
    /// Relative tolerance, scaled by `max(1, input magnitude)`.
    #[cfg_attr(feature = "serde", serde(default = "default_rel"))]
    pub rel: f64,
    /// Absolute floor added to every scaled tolerance.
    #[cfg_attr(feature = "serde", serde(default = "default_abs"))]
    pub abs: f64,
}

#[cfg(feature = "serde")]
fn default_rel() -> f64 {
    1e-9
}

#[cfg(feature = "serde")]
fn default_abs() -> f64 {
    1e-12
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl ToleranceConfig {
    pub fn new(rel: f64, abs: f64) -> Self {
        assert!(rel.is_finite() && rel >= 0.0, "rel must be finite and >= 0");
        assert!(abs.is_finite() && abs >= 0.0, "abs must be finite and >= 0");
        Self { rel, abs }
    }

    /// Tolerance at the magnitude scale `s`: `abs + rel·max(1, s)`.
    pub fn scale(&self, s: f64) -> f64 {
        self.abs + self.rel * s.max(1.0)
    }
}

/// Errors from the matrix kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum MatError {
    NotSquare { rows: usize, cols: usize },
    NotHermitian { residual: f64 },
    NoConvergence { off_diagonal: f64 },
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    NotPsd { min_eigenvalue: f64 },
    BNotInvertible { min_eigenvalue: f64 },
    NonFiniteEntry { row: usize, col: usize },
    EmptyMatrix,
    BadEntryCount { expected: usize, got: usize },
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::NotSquare { rows, cols } => {
                write!(f, "matrix is not square: {rows}x{cols}")
            }
            MatError::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (symmetry residual {residual:.3e})")
            }
            MatError::NoConvergence { off_diagonal } => {
                write!(f, "eigensolver hit its sweep cap (off-diagonal {off_diagonal:.3e})")
            }
            MatError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            MatError::NotPsd { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")
            }
            MatError::BNotInvertible { min_eigenvalue } => {
                write!(f, "block B is not strictly positive (min eigenvalue {min_eigenvalue:.3e})")
            }
            MatError::NonFiniteEntry { row, col } => {
                write!(f, "non-finite entry at ({row},{col})")
            }
            MatError::EmptyMatrix => write!(f, "matrix has zero rows or columns"),
            MatError::BadEntryCount { expected, got } => {
                write!(f, "entry buffer has length {got}, expected {expected}")
            }
        }
    }
}

impl core::error::Error for MatError {}

/// Dense complex matrix, row-major storage. The carrier for every algebra
/// element, map output and module vector in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry buffer, validating shape and
    /// finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, MatError> {
        if rows == 0 || cols == 0 {
            return Err(MatError::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(MatError::BadEntryCount { expected: rows * cols, got: entries.len() });
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(MatError::NonFiniteEntry { row: idx / cols, col: idx % cols });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be non-empty");
        Self { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Convenience constructor from real row slices (tests and builtins).
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix must be non-empty");
        let c = rows[0].len();
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(v, 0.0));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn require_square(&self) -> Result<usize, MatError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Unnormalized trace `Σ a_ii`.
    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// `self − α·I`.
    pub fn sub_scalar(&self, alpha: Complex64) -> Self {
        debug_assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m.set(i, i, m.get(i, i) - alpha);
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise deviation from conjugate symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_residual() <= tol
    }

    /// Hermitian part `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * Complex64::new(0.5, 0.0)
        })
    }

    /// `M* M` (square for any rectangular input).
    pub fn gram(&self) -> Self {
        self.adjoint().mul(self)
    }
}

#[cfg(feature = "serde")]
mod matrix_serde {
    //! Wire format shared repo-wide:
    //! `{"rows": n, "cols": m, "entries": [[re, im], ...]}` row-major, with
    //! exact IEEE doubles.

    use super::ComplexMatrix;
    use alloc::vec::Vec;
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct MatrixDto {
        rows: usize,
        cols: usize,
        entries: Vec<(f64, f64)>,
    }

    impl Serialize for ComplexMatrix {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let dto = MatrixDto {
                rows: self.rows,
                cols: self.cols,
                entries: self.entries.iter().map(|z| (z.re, z.im)).collect(),
            };
            dto.serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for ComplexMatrix {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let dto = MatrixDto::deserialize(deserializer)?;
            let entries = dto.entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            ComplexMatrix::new(dto.rows, dto.cols, entries)
                .map_err(|e| D::Error::custom(alloc::format!("{e}")))
        }
    }
}

/// Spectral data of a Hermitian matrix: ascending eigenvalues and a unitary
/// matrix of column eigenvectors.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Spectral radius `max |λ_i|`; equals the operator norm of the input.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()))
    }

    /// Rebuilds `V f(Λ) V*`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lam) in self.eigenvalues.iter().enumerate() {
                    acc += v.get(i, k) * f(lam) * v.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass `sqrt(Σ_{i≠j} |a_ij|²)`.
fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic two-sided Jacobi on a Hermitian matrix. Returns ascending
/// eigenvalues, the unitary of eigenvectors and whether the off-diagonal
/// mass reached machine-level convergence within the sweep cap.
fn jacobi_hermitian(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, f64, bool) {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob = a.frobenius_norm();
    let conv_tol = f64::EPSILON * frob.max(f64::MIN_POSITIVE) * (n as f64);

    let mut off = off_diagonal_norm(&a);
    let mut converged = off <= conv_tol;
    if !converged {
        for _sweep in 0..MAX_JACOBI_SWEEPS {
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r < 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    // Phase that makes the (p,q) entry real, then a real
                    // Jacobi rotation zeroes it.
                    let u = apq / r; // e^{iφ}
                    let zeta = (aqq - app) / (2.0 * r);
                    let t = if zeta == 0.0 {
                        1.0
                    } else {
                        let sign = if zeta > 0.0 { 1.0 } else { -1.0 };
                        sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let ubar = u.conj();
                    let w_qp = -ubar * s; // W[q][p]
                    let w_qq = ubar * c; // W[q][q]

                    // Columns p,q of A and of V: right-multiply by W.
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * c + aiq * w_qp);
                        a.set(i, q, aip * s + aiq * w_qq);
                        let vip = v.get(i, p);
                        let viq = v.get(i, q);
                        v.set(i, p, vip * c + viq * w_qp);
                        v.set(i, q, vip * s + viq * w_qq);
                    }
                    // Rows p,q by conjugate symmetry of W* A W.
                    for j in 0..n {
                        a.set(p, j, a.get(j, p).conj());
                        a.set(q, j, a.get(j, q).conj());
                    }
                    // Closed-form 2x2 block: the pivot is annihilated and the
                    // diagonal stays real.
                    a.set(p, p, Complex64::new(app - t * r, 0.0));
                    a.set(q, q, Complex64::new(aqq + t * r, 0.0));
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                }
            }
            off = off_diagonal_norm(&a);
            if off <= conv_tol {
                converged = true;
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    (eigenvalues, vectors, off, converged)
}

/// Hermitian eigendecomposition with residual contract
/// `‖MV − VΛ‖ ≤ tol·max(1, ‖M‖)` and `‖V*V − I‖ ≤ tol`.
pub fn hermitian_eigen(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<HermEigen, MatError> {
    m.require_square()?;
    let residual = m.hermitian_residual();
    if residual > cfg.scale(m.frobenius_norm()) {
        return Err(MatError::NotHermitian { residual });
    }
    let (eigenvalues, eigenvectors, off, converged) = jacobi_hermitian(m);
    if !converged && off > cfg.scale(m.frobenius_norm()) {
        return Err(MatError::NoConvergence { off_diagonal: off });
    }
    Ok(HermEigen { eigenvalues, eigenvectors })
}

/// Eigendecomposition of a matrix that is Hermitian by construction
/// (Gram matrices, Hermitian parts). Skips the symmetry gate.
pub(crate) fn eigen_hermitian_unchecked(m: &ComplexMatrix) -> HermEigen {
    let (eigenvalues, eigenvectors, _, _) = jacobi_hermitian(m);
    HermEigen { eigenvalues, eigenvectors }
}

/// Matrix absolute value `|M| = (M*M)^{1/2}`.
pub fn matrix_abs(m: &ComplexMatrix) -> Result<ComplexMatrix, MatError> {
    m.require_square()?;
    let gram = m.gram();
    let eig = eigen_hermitian_unchecked(&gram);
    Ok(eig.apply_spectral(|l| l.max(0.0).sqrt()))
}

/// PSD square root. Eigenvalues in `[−tolscale, 0)` are clamped to zero;
/// anything below `−tolscale` is a genuine negativity and errors out.
pub fn psd_sqrt(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix, MatError> {
    let eig = hermitian_eigen(m, cfg)?;
    let tol = cfg.scale(eig.spectral_radius());
    let min = eig.min_eigenvalue();
    if min < -tol {
        return Err(MatError::NotPsd { min_eigenvalue: min });
    }
    Ok(eig.apply_spectral(|l| l.max(0.0).sqrt()))
}

/// Operator norm (largest singular value), valid for rectangular inputs.
/// Computed as the square root of the top eigenvalue of the smaller Gram
/// matrix.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = if m.rows() >= m.cols() { m.gram() } else { m.mul(&m.adjoint()) };
    let eig = eigen_hermitian_unchecked(&gram);
    eig.max_eigenvalue().max(0.0).sqrt()
}

/// Singular values in ascending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = if m.rows() >= m.cols() { m.gram() } else { m.mul(&m.adjoint()) };
    let eig = eigen_hermitian_unchecked(&gram);
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Outcome of a Loewner-order comparison `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerCheck {
    pub holds: bool,
    /// Min eigenvalue of `B − A`; negative margin quantifies the violation.
    pub margin: f64,
}

/// Loewner order test `A ≤ B` for Hermitian `A`, `B` of equal dimension.
pub fn loewner_leq(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<LoewnerCheck, MatError> {
    a.require_square()?;
    b.require_square()?;
    if a.rows() != b.rows() {
        return Err(MatError::DimensionMismatch {
            expected: (a.rows(), a.cols()),
            got: (b.rows(), b.cols()),
        });
    }
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    let tol = cfg.scale(scale);
    let ra = a.hermitian_residual();
    if ra > tol {
        return Err(MatError::NotHermitian { residual: ra });
    }
    let rb = b.hermitian_residual();
    if rb > tol {
        return Err(MatError::NotHermitian { residual: rb });
    }
    let diff = b.sub(a).hermitian_part();
    let eig = eigen_hermitian_unchecked(&diff);
    let margin = eig.min_eigenvalue();
    Ok(LoewnerCheck { holds: margin >= -tol, margin })
}

/// Real part and accretivity verdict of a square matrix.
#[derive(Debug, Clone)]
pub struct AccretiveCheck {
    pub re: ComplexMatrix,
    pub accretive: bool,
    /// Min eigenvalue of `Re(M)`.
    pub margin: f64,
}

/// `Re(M) = (M + M*)/2`; `M` is accretive when `Re(M) ≥ 0`.
pub fn real_part_accretive(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<AccretiveCheck, MatError> {
    m.require_square()?;
    let re = m.hermitian_part();
    let eig = eigen_hermitian_unchecked(&re);
    let margin = eig.min_eigenvalue();
    let tol = cfg.scale(m.frobenius_norm());
    Ok(AccretiveCheck { re, accretive: margin >= -tol, margin })
}

/// Verdicts of the two equivalent block-positivity routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurCheck {
    /// PSD test on the assembled 2x2 block matrix.
    pub direct: bool,
    /// Schur-complement route: `X B⁻¹ X* ≤ A`.
    pub schur: bool,
    pub block_min_eigenvalue: f64,
    pub schur_margin: f64,
}

/// Tests positivity of `[[A, X], [X*, B]]` both directly and through the
/// Schur complement (`B` must be strictly positive for the latter).
pub fn schur_block_psd(
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<SchurCheck, MatError> {
    let p = a.require_square()?;
    let q = b.require_square()?;
    if x.rows() != p || x.cols() != q {
        return Err(MatError::DimensionMismatch { expected: (p, q), got: (x.rows(), x.cols()) });
    }
    let scale = a.frobenius_norm().max(b.frobenius_norm()).max(x.frobenius_norm());
    let tol = cfg.scale(scale);
    if a.hermitian_residual() > tol {
        return Err(MatError::NotHermitian { residual: a.hermitian_residual() });
    }
    if b.hermitian_residual() > tol {
        return Err(MatError::NotHermitian { residual: b.hermitian_residual() });
    }

    let b_eig = eigen_hermitian_unchecked(&b.hermitian_part());
    if b_eig.min_eigenvalue() <= tol {
        return Err(MatError::BNotInvertible { min_eigenvalue: b_eig.min_eigenvalue() });
    }
    let b_inv = b_eig.apply_spectral(|l| 1.0 / l);

    let mut block = ComplexMatrix::zeros(p + q, p + q);
    for i in 0..p {
        for j in 0..p {
            block.set(i, j, a.get(i, j));
        }
        for j in 0..q {
            block.set(i, p + j, x.get(i, j));
            block.set(p + j, i, x.get(i, j).conj());
        }
    }
    for i in 0..q {
        for j in 0..q {
            block.set(p + i, p + j, b.get(i, j));
        }
    }
    let block_eig = eigen_hermitian_unchecked(&block.hermitian_part());
    let block_min = block_eig.min_eigenvalue();

    let s = x.mul(&b_inv).mul(&x.adjoint());
    let schur_check = loewner_leq(&s.hermitian_part(), a, cfg)?;

    Ok(SchurCheck {
        direct: block_min >= -tol,
        schur: schur_check.holds,
        block_min_eigenvalue: block_min,
        schur_margin: schur_check.margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    /// Residual `‖MV − VΛ‖_F` of an eigendecomposition.
    fn eigen_residual(m: &ComplexMatrix, e: &HermEigen) -> f64 {
        let mv = m.mul(&e.eigenvectors);
        let vl = e.eigenvectors.mul(&ComplexMatrix::diag(&e.eigenvalues));
        mv.sub(&vl).frobenius_norm()
    }

    fn unitarity_residual(e: &HermEigen) -> f64 {
        let n = e.eigenvalues.len();
        e.eigenvectors.gram().sub(&ComplexMatrix::identity(n)).frobenius_norm()
    }

    /// Deterministic pseudo-random Hermitian matrix for kernel tests.
    fn test_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state >> 30;
            state = state.wrapping_mul(0xbf58476d1ce4e5b9);
            state ^= state >> 27;
            state = state.wrapping_mul(0x94d049bb133111eb);
            state ^= state >> 31;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let g = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
        g.hermitian_part()
    }

    #[test]
    fn eigen_diagonal_input() {
        let m = ComplexMatrix::diag(&[2.0, 1.0]);
        let e = hermitian_eigen(&m, &cfg()).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!(eigen_residual(&m, &e) < 1e-12);
    }

    #[test]
    fn eigen_2x2_closed_form_real() {
        // Characteristic polynomial roots of [[3, 0.5], [0.5, 2]].
        let m = ComplexMatrix::from_real(&[&[3.0, 0.5], &[0.5, 2.0]]);
        let e = hermitian_eigen(&m, &cfg()).unwrap();
        let lo = (5.0 - 2.0f64.sqrt()) / 2.0;
        let hi = (5.0 + 2.0f64.sqrt()) / 2.0;
        assert!((e.eigenvalues[0] - lo).abs() < 1e-12, "{} vs {}", e.eigenvalues[0], lo);
        assert!((e.eigenvalues[1] - hi).abs() < 1e-12);
        assert!(eigen_residual(&m, &e) < 1e-12);
        assert!(unitarity_residual(&e) < 1e-12);
    }

    #[test]
    fn eigen_2x2_closed_form_complex() {
        // [[1, i], [−i, 1]] has eigenvalues {0, 2}.
        let m =
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)])
                .unwrap();
        let e = hermitian_eigen(&m, &cfg()).unwrap();
        assert!(e.eigenvalues[0].abs() < 1e-12);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!(eigen_residual(&m, &e) < 1e-12);
    }

    #[test]
    fn eigen_rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&rect, &cfg()), Err(MatError::NotSquare { .. })));
        let skew = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&skew, &cfg()), Err(MatError::NotHermitian { .. })));
    }

    #[test]
    fn matrix_abs_rotation_example() {
        let m = ComplexMatrix::from_real(&[&[0.0, -6.0], &[6.0, 0.0]]);
        let a = matrix_abs(&m).unwrap();
        let expected = ComplexMatrix::diag(&[6.0, 6.0]);
        assert!(a.sub(&expected).frobenius_norm() < 1e-12);
    }

    #[test]
    fn matrix_abs_zero_and_psd_fixed_point() {
        let z = ComplexMatrix::zeros(3, 3);
        assert!(matrix_abs(&z).unwrap().frobenius_norm() < 1e-15);
        let p = test_hermitian(4, 7).gram(); // PSD
        let a = matrix_abs(&p).unwrap();
        assert!(a.sub(&p).frobenius_norm() < 1e-10 * p.frobenius_norm().max(1.0));
    }

    #[test]
    fn psd_sqrt_matches_examples() {
        let m = ComplexMatrix::diag(&[2.25, 2.25]);
        let s = psd_sqrt(&m, &cfg()).unwrap();
        assert!(s.sub(&ComplexMatrix::diag(&[1.5, 1.5])).frobenius_norm() < 1e-13);

        let i4 = ComplexMatrix::identity(4);
        assert!(psd_sqrt(&i4, &cfg()).unwrap().sub(&i4).frobenius_norm() < 1e-14);

        let neg = ComplexMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg, &cfg()), Err(MatError::NotPsd { .. })));
    }

    #[test]
    fn psd_sqrt_reconstructs_random_psd() {
        for seed in 0..10 {
            let p = test_hermitian(5, seed).gram();
            let s = psd_sqrt(&p, &cfg()).unwrap();
            let resid = s.mul(&s).sub(&p).frobenius_norm();
            assert!(resid < 1e-8 * p.frobenius_norm().max(1.0), "resid {resid}");
        }
    }

    #[test]
    fn operator_norm_examples() {
        let t = ComplexMatrix::from_real(&[&[1.0, -0.1], &[-0.1, 1.0]]);
        assert!((operator_norm(&t) - 1.1).abs() < 1e-12);

        assert!((operator_norm(&ComplexMatrix::identity(5)) - 1.0).abs() < 1e-13);

        let t2 = ComplexMatrix::from_real(&[&[1.0, -1.0], &[-1.0, 2.0]]);
        let expected = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((operator_norm(&t2) - expected).abs() < 1e-12);
    }

    #[test]
    fn loewner_examples() {
        let a = ComplexMatrix::diag(&[6.0, 6.0]);
        let b = ComplexMatrix::diag(&[3.75, 3.75]);
        let r = loewner_leq(&a, &b, &cfg()).unwrap();
        assert!(!r.holds);
        assert!((r.margin + 2.25).abs() < 1e-12);

        let r2 = loewner_leq(&a, &a, &cfg()).unwrap();
        assert!(r2.holds && r2.margin.abs() < 1e-13);

        let w = test_hermitian(4, 3).gram();
        let z = ComplexMatrix::zeros(4, 4);
        assert!(loewner_leq(&z, &w, &cfg()).unwrap().holds);
    }

    #[test]
    fn accretivity_basics() {
        let p = test_hermitian(3, 11).gram();
        assert!(real_part_accretive(&p, &cfg()).unwrap().accretive);

        // i·H has vanishing Hermitian part.
        let h = test_hermitian(3, 12);
        let ih = h.scale(c(0.0, 1.0));
        let r = real_part_accretive(&ih, &cfg()).unwrap();
        assert!(r.accretive);
        assert!(r.margin.abs() < 1e-12);
        assert!(r.re.frobenius_norm() < 1e-12);
    }

    #[test]
    fn accretivity_of_spectral_band() {
        // C_{m,M}(A) = (A−m)(M−A) is PSD when σ(A) ⊂ [m, M].
        for seed in 0..5 {
            let a = test_hermitian(4, seed);
            let e = eigen_hermitian_unchecked(&a);
            let (m, mm) = (e.min_eigenvalue(), e.max_eigenvalue());
            let am = a.sub_scalar(c(m, 0.0));
            let ma = a.sub_scalar(c(mm, 0.0)).scale_re(-1.0);
            let prod = am.adjoint().mul(&ma);
            assert!(real_part_accretive(&prod, &cfg()).unwrap().accretive);
        }
    }

    #[test]
    fn real_part_identity_for_disk_operators() {
        // Re C_{S,T}(A) = ¼|T−S|² − |A−(S+T)/2|² for scalar S, T.
        for seed in 0..8 {
            let a = test_hermitian(3, seed + 40).scale(c(0.3, 0.4)).add(&test_hermitian(3, seed));
            let s = c(-0.7, 0.2);
            let t = c(1.1, -0.5);
            let cst = a.sub_scalar(s).adjoint().mul(&a.sub_scalar(t).scale_re(-1.0));
            let re = cst.hermitian_part();

            let mid = (s + t) * c(0.5, 0.0);
            let dev = a.sub_scalar(mid);
            let dev_sq = dev.gram();
            let quarter = (t - s).norm_sqr() / 4.0;
            let rhs = ComplexMatrix::identity(3).scale_re(quarter).sub(&dev_sq);

            let lhs_min = eigen_hermitian_unchecked(&re).min_eigenvalue();
            let rhs_min = eigen_hermitian_unchecked(&rhs.hermitian_part()).min_eigenvalue();
            assert!((lhs_min - rhs_min).abs() < 1e-9, "identity broken at seed {seed}");
            assert!(re.sub(&rhs.hermitian_part()).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn schur_examples() {
        let i2 = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let r = schur_block_psd(&i2, &z, &i2, &cfg()).unwrap();
        assert!(r.direct && r.schur);

        let x = i2.scale_re(2.0);
        let r2 = schur_block_psd(&i2, &x, &i2, &cfg()).unwrap();
        assert!(!r2.direct && !r2.schur);

        let singular = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(matches!(
            schur_block_psd(&i2, &z, &singular, &cfg()),
            Err(MatError::BNotInvertible { .. })
        ));
    }

    #[test]
    fn schur_paper_corner_block() {
        // (1,1)/(2,2)-corner of the 3x3 operator block built from
        // A = [[1,2],[2,4]], B = [[1,0],[0,4]]: the covariance block of the
        // corner functional. Assembled directly from the matrix entries.
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let b = ComplexMatrix::diag(&[1.0, 4.0]);
        // Top-left 2x2 of [[A*A, A*B],[B*A, B*B]] compressed to scalars via
        // the (1,1) entry, with the Schur test against the Gram corner.
        let aa = a.gram();
        let ab = a.adjoint().mul(&b);
        let bb = b.gram();
        let block_a = ComplexMatrix::new(1, 1, vec![aa.get(0, 0)]).unwrap();
        let block_x = ComplexMatrix::new(1, 1, vec![ab.get(0, 0)]).unwrap();
        let block_b = ComplexMatrix::new(1, 1, vec![bb.get(0, 0)]).unwrap();
        let r = schur_block_psd(&block_a, &block_x, &block_b, &cfg()).unwrap();
        assert!(r.direct && r.schur);
    }

    #[test]
    fn tolerance_config_scale() {
        let t = ToleranceConfig::default();
        assert!((t.scale(0.5) - (1e-12 + 1e-9)).abs() < 1e-24);
        assert!((t.scale(10.0) - (1e-12 + 1e-8)).abs() < 1e-22);
    }

    #[test]
    fn new_validates() {
        assert!(matches!(ComplexMatrix::new(0, 2, vec![]), Err(MatError::EmptyMatrix)));
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(MatError::BadEntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(f64::NAN, 0.0), c(0.0, 0.0)]),
            Err(MatError::NonFiniteEntry { .. })
        ));
    }

    proptest! {
        #[test]
        fn spectral_reconstruction(seed in 0u64..500, n in 2usize..=8) {
            let m = test_hermitian(n, seed);
            let e = hermitian_eigen(&m, &cfg()).unwrap();
            let scale = operator_norm(&m).max(1.0);
            prop_assert!(eigen_residual(&m, &e) <= 1e-8 * scale);
            prop_assert!(unitarity_residual(&e) <= 1e-8);
            // Reconstruction V Λ V* = M.
            let rec = e.apply_spectral(|l| l);
            prop_assert!(rec.sub(&m).frobenius_norm() <= 1e-8 * scale);
        }

        #[test]
        fn abs_preserves_operator_norm(seed in 0u64..200, n in 2usize..=6) {
            let g = test_hermitian(n, seed).scale(c(0.8, -0.3)).add(&test_hermitian(n, seed + 999));
            let a = matrix_abs(&g).unwrap();
            let lhs = operator_norm(&a);
            let rhs = operator_norm(&g);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        }

        #[test]
        fn loewner_antisymmetry_at_tolerance(seed in 0u64..200, n in 2usize..=5) {
            let a = test_hermitian(n, seed);
            let mut b = a.clone();
            // Perturb within tolerance.
            b.set(0, 0, b.get(0, 0) + c(1e-13, 0.0));
            let ab = loewner_leq(&a, &b, &cfg()).unwrap();
            let ba = loewner_leq(&b, &a, &cfg()).unwrap();
            if ab.holds && ba.holds {
                let tol = cfg().scale(a.frobenius_norm().max(b.frobenius_norm()));
                prop_assert!(operator_norm(&a.sub(&b)) <= 2.0 * tol);
            }
        }

        #[test]
        fn schur_equivalence(seed in 0u64..1000) {
            // Random instances with B ≥ 0.1·I: the direct and Schur verdicts agree.
            let p = 2usize;
            let a = test_hermitian(p, seed).gram().scale_re(0.5);
            let x = test_hermitian(p, seed + 1).scale(c(0.4, 0.1));
            let b = test_hermitian(p, seed + 2).gram().add(&ComplexMatrix::identity(p).scale_re(0.1));
            let r = schur_block_psd(&a, &x, &b, &cfg()).unwrap();
            // Skip razor-edge cases where both routes sit inside the tolerance band.
            if r.block_min_eigenvalue.abs() > 1e-7 && r.schur_margin.abs() > 1e-7 {
                prop_assert_eq!(r.direct, r.schur);
            }
        }
    }
}
