//! Linear maps between matrix algebras `M_n → M_m`.
//!
//! A map is represented as a Kraus family `A ↦ Σ_j K_j A K_j*`, a Choi
//! matrix, or a named builtin. Kraus maps are completely positive by
//! construction; complete positivity in general is certified through the
//! Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`. Non-k-positivity is *falsified* by
//! sampling Schmidt-rank-k vectors against the Choi quadratic form and
//! refining the best candidate with alternating least squares; absence of a
//! witness is not a proof of k-positivity.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::matcore::{
    eigen_hermitian_unchecked, hermitian_eigen, ComplexMatrix, MatError, ToleranceConfig,
};
use crate::rng::SplitMix64;

/// Builtin maps used throughout the worked examples.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinMap {
    /// `A ↦ [a_rc]` as a 1x1 matrix; positive (and unital) exactly when `row == col`.
    Corner { row: usize, col: usize, dim: usize },
    /// `A ↦ Aᵗ`; positive but not 2-positive.
    Transpose { dim: usize },
    /// `A ↦ μ·Tr(A)·I − A` with the unnormalized trace; for `μ = 2, dim = 3`
    /// this is 2-positive but not 3-positive, and `Ψ(I) = (μ·dim − 1)·I`.
    Tomiyama { mu: f64, dim: usize },
    /// `A ↦ τ(TA)` as a 1x1 matrix, with the normalized trace `τ`.
    TraceDensity { density: ComplexMatrix },
    /// Conditional expectation onto the diagonal.
    DiagExpectation { dim: usize },
}

/// A linear map between matrix algebras.
#[derive(Debug, Clone, PartialEq)]
pub enum LinMap {
    Kraus { ops: Vec<ComplexMatrix> },
    Choi { input_dim: usize, output_dim: usize, matrix: ComplexMatrix },
    Builtin(BuiltinMap),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapError {
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    RaggedBlocks,
    EmptyKraus,
    InconsistentKraus,
    BadCornerIndex { row: usize, col: usize, dim: usize },
    InvalidDensity { detail: String },
    BadChoiDimension { expected: usize, got: usize },
    Mat(MatError),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::DimensionMismatch { expected, got } => {
                write!(f, "map expects {}x{} input, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            MapError::RaggedBlocks => write!(f, "block array is ragged"),
            MapError::EmptyKraus => write!(f, "Kraus family is empty"),
            MapError::InconsistentKraus => write!(f, "Kraus operators have mixed shapes"),
            MapError::BadCornerIndex { row, col, dim } => {
                write!(f, "corner index ({row},{col}) out of range for dimension {dim}")
            }
            MapError::InvalidDensity { detail } => write!(f, "invalid density operator: {detail}"),
            MapError::BadChoiDimension { expected, got } => {
                write!(f, "Choi matrix has dimension {got}, expected {expected}")
            }
            MapError::Mat(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MapError {}

impl From<MatError> for MapError {
    fn from(e: MatError) -> Self {
        MapError::Mat(e)
    }
}

impl LinMap {
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self, MapError> {
        if ops.is_empty() {
            return Err(MapError::EmptyKraus);
        }
        let shape = (ops[0].rows(), ops[0].cols());
        if ops.iter().any(|k| (k.rows(), k.cols()) != shape) {
            return Err(MapError::InconsistentKraus);
        }
        Ok(LinMap::Kraus { ops })
    }

    pub fn transpose(dim: usize) -> Self {
        LinMap::Builtin(BuiltinMap::Transpose { dim })
    }

    pub fn corner(row: usize, col: usize, dim: usize) -> Result<Self, MapError> {
        if row >= dim || col >= dim {
            return Err(MapError::BadCornerIndex { row, col, dim });
        }
        Ok(LinMap::Builtin(BuiltinMap::Corner { row, col, dim }))
    }

    pub fn tomiyama(mu: f64, dim: usize) -> Self {
        LinMap::Builtin(BuiltinMap::Tomiyama { mu, dim })
    }

    /// `A ↦ τ(TA)` for a density operator `T` (PSD, normalized trace 1).
    pub fn trace_density(density: ComplexMatrix) -> Result<Self, MapError> {
        let n = density.require_square()?;
        let cfg = ToleranceConfig::default();
        let eig = hermitian_eigen(&density, &cfg)
            .map_err(|e| MapError::InvalidDensity { detail: alloc::format!("{e}") })?;
        if eig.min_eigenvalue() < -cfg.scale(eig.spectral_radius()) {
            return Err(MapError::InvalidDensity {
                detail: alloc::format!("min eigenvalue {:.3e}", eig.min_eigenvalue()),
            });
        }
        let tau = density.trace().re / n as f64;
        if (tau - 1.0).abs() > 1e-10 {
            return Err(MapError::InvalidDensity {
                detail: alloc::format!("normalized trace {tau} != 1"),
            });
        }
        Ok(LinMap::Builtin(BuiltinMap::TraceDensity { density }))
    }

    pub fn diag_expectation(dim: usize) -> Self {
        LinMap::Builtin(BuiltinMap::DiagExpectation { dim })
    }

    pub fn input_dim(&self) -> usize {
        match self {
            LinMap::Kraus { ops } => ops[0].cols(),
            LinMap::Choi { input_dim, .. } => *input_dim,
            LinMap::Builtin(b) => match b {
                BuiltinMap::Corner { dim, .. }
                | BuiltinMap::Transpose { dim }
                | BuiltinMap::Tomiyama { dim, .. }
                | BuiltinMap::DiagExpectation { dim } => *dim,
                BuiltinMap::TraceDensity { density } => density.rows(),
            },
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            LinMap::Kraus { ops } => ops[0].rows(),
            LinMap::Choi { output_dim, .. } => *output_dim,
            LinMap::Builtin(b) => match b {
                BuiltinMap::Corner { .. } | BuiltinMap::TraceDensity { .. } => 1,
                BuiltinMap::Transpose { dim }
                | BuiltinMap::Tomiyama { dim, .. }
                | BuiltinMap::DiagExpectation { dim } => *dim,
            },
        }
    }

    /// Structurally *-linear: `Φ(A*) = Φ(A)*`. Kraus families always are;
    /// a Choi representation is iff its matrix is Hermitian; among builtins
    /// only an off-diagonal corner fails.
    pub fn is_star_linear(&self) -> bool {
        match self {
            LinMap::Kraus { .. } => true,
            LinMap::Choi { matrix, .. } => {
                matrix.hermitian_residual() <= 1e-10 * matrix.frobenius_norm().max(1.0)
            }
            LinMap::Builtin(BuiltinMap::Corner { row, col, .. }) => row == col,
            LinMap::Builtin(_) => true,
        }
    }

    /// `Φ(I)`.
    pub fn identity_image(&self) -> Result<ComplexMatrix, MapError> {
        apply_map(self, &ComplexMatrix::identity(self.input_dim()))
    }

    pub fn is_unital(&self, cfg: &ToleranceConfig) -> Result<bool, MapError> {
        let img = self.identity_image()?;
        let dev = img.sub(&ComplexMatrix::identity(self.output_dim())).frobenius_norm();
        Ok(dev <= cfg.scale(1.0))
    }
}

/// Applies the map to a square matrix of its input dimension.
pub fn apply_map(map: &LinMap, a: &ComplexMatrix) -> Result<ComplexMatrix, MapError> {
    let n = map.input_dim();
    if a.rows() != n || a.cols() != n {
        return Err(MapError::DimensionMismatch { expected: (n, n), got: (a.rows(), a.cols()) });
    }
    match map {
        LinMap::Kraus { ops } => {
            let m = map.output_dim();
            let mut out = ComplexMatrix::zeros(m, m);
            for k in ops {
                out = out.add(&k.mul(a).mul(&k.adjoint()));
            }
            Ok(out)
        }
        LinMap::Choi { input_dim, output_dim, matrix } => {
            let (n, m) = (*input_dim, *output_dim);
            let expected = n * m;
            if matrix.rows() != expected || matrix.cols() != expected {
                return Err(MapError::BadChoiDimension { expected, got: matrix.rows() });
            }
            // Φ(A)[k,l] = Σ_ij A[i,j]·C[i·m+k, j·m+l]
            let mut out = ComplexMatrix::zeros(m, m);
            for i in 0..n {
                for j in 0..n {
                    let aij = a.get(i, j);
                    if aij.re == 0.0 && aij.im == 0.0 {
                        continue;
                    }
                    for k in 0..m {
                        for l in 0..m {
                            let v = out.get(k, l) + aij * matrix.get(i * m + k, j * m + l);
                            out.set(k, l, v);
                        }
                    }
                }
            }
            Ok(out)
        }
        LinMap::Builtin(b) => match b {
            BuiltinMap::Corner { row, col, .. } => {
                Ok(ComplexMatrix::new(1, 1, vec![a.get(*row, *col)]).expect("finite entry"))
            }
            BuiltinMap::Transpose { .. } => Ok(a.transpose()),
            BuiltinMap::Tomiyama { mu, dim } => {
                let tr = a.trace();
                let scaled = ComplexMatrix::identity(*dim).scale(tr * Complex64::new(*mu, 0.0));
                Ok(scaled.sub(a))
            }
            BuiltinMap::TraceDensity { density } => {
                let tau = density.mul(a).trace() / Complex64::new(density.rows() as f64, 0.0);
                Ok(ComplexMatrix::new(1, 1, vec![tau]).expect("finite entry"))
            }
            BuiltinMap::DiagExpectation { dim } => {
                let mut out = ComplexMatrix::zeros(*dim, *dim);
                for i in 0..*dim {
                    out.set(i, i, a.get(i, i));
                }
                Ok(out)
            }
        },
    }
}

/// Entrywise application `Φ_m([a_ij]) = [Φ(a_ij)]` assembled into one block
/// matrix of dimension `m·output_dim`.
pub fn amplified_apply(map: &LinMap, blocks: &[Vec<ComplexMatrix>]) -> Result<ComplexMatrix, MapError> {
    let m = blocks.len();
    if m == 0 || blocks.iter().any(|row| row.len() != m) {
        return Err(MapError::RaggedBlocks);
    }
    let out_dim = map.output_dim();
    let mut out = ComplexMatrix::zeros(m * out_dim, m * out_dim);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            let image = apply_map(map, block)?;
            for i in 0..out_dim {
                for j in 0..out_dim {
                    out.set(bi * out_dim + i, bj * out_dim + j, image.get(i, j));
                }
            }
        }
    }
    Ok(out)
}

/// Choi matrix of a map, `Σ_ij E_ij ⊗ Φ(E_ij)`.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub input_dim: usize,
    pub output_dim: usize,
}

pub fn choi_matrix(map: &LinMap) -> Result<ChoiMatrix, MapError> {
    let n = map.input_dim();
    let m = map.output_dim();
    let mut c = ComplexMatrix::zeros(n * m, n * m);
    let mut unit = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            unit.set(i, j, Complex64::new(1.0, 0.0));
            let image = apply_map(map, &unit)?;
            unit.set(i, j, Complex64::new(0.0, 0.0));
            for k in 0..m {
                for l in 0..m {
                    c.set(i * m + k, j * m + l, image.get(k, l));
                }
            }
        }
    }
    Ok(ChoiMatrix { matrix: c, input_dim: n, output_dim: m })
}

/// Complete-positivity verdict via the Choi spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpCheck {
    pub cp: bool,
    pub min_eig: f64,
}

pub fn is_completely_positive(map: &LinMap, cfg: &ToleranceConfig) -> Result<CpCheck, MapError> {
    let choi = choi_matrix(map)?;
    let eig = eigen_hermitian_unchecked(&choi.matrix.hermitian_part());
    let min_eig = eig.min_eigenvalue();
    let tol = cfg.scale(eig.spectral_radius());
    Ok(CpCheck { cp: min_eig >= -tol, min_eig })
}

/// A certified violation of k-positivity: a unit vector of Schmidt rank ≤ k
/// with a negative Choi quadratic form.
#[derive(Debug, Clone)]
pub struct Witness {
    /// Unit vector in `ℂ^{n·m}` as an `(n·m)×1` matrix.
    pub vector: ComplexMatrix,
    /// `⟨v, C v⟩`, strictly below −tolerance.
    pub value: f64,
    pub schmidt_rank: usize,
}

/// Factor pair spanning a Schmidt-rank-k vector `v = Σ_i a_i ⊗ b_i`
/// with `a_i ∈ ℂ^n` the columns of `a` and `b_i ∈ ℂ^m` the columns of `b`.
struct FactorPair {
    a: ComplexMatrix, // n×k
    b: ComplexMatrix, // m×k
}

impl FactorPair {
    fn assemble(&self) -> ComplexMatrix {
        let n = self.a.rows();
        let m = self.b.rows();
        let k = self.a.cols();
        let mut v = ComplexMatrix::zeros(n * m, 1);
        for p in 0..n {
            for q in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..k {
                    acc += self.a.get(p, i) * self.b.get(q, i);
                }
                v.set(p * m + q, 0, acc);
            }
        }
        v
    }
}

/// Rayleigh quotient `v*Cv / v*v` of the assembled vector; `None` if `v = 0`.
fn rayleigh(choi: &ComplexMatrix, v: &ComplexMatrix) -> Option<f64> {
    let nn = v.gram().get(0, 0).re;
    if nn <= 0.0 {
        return None;
    }
    let num = v.adjoint().mul(&choi.mul(v)).get(0, 0).re;
    Some(num / nn)
}

/// One alternating-least-squares pass: given the fixed factor (columns of
/// `fixed`, length `fixed_len`), find the free factor minimizing the
/// Rayleigh quotient. This solves a generalized Hermitian eigenproblem
/// restricted to the span where the Gram matrix of the fixed factor is
/// non-degenerate.
fn als_step(
    choi: &ComplexMatrix,
    fixed: &ComplexMatrix,
    free_len: usize,
    fixed_is_b: bool,
    m_out: usize,
) -> Option<(ComplexMatrix, f64)> {
    let k = fixed.cols();
    let dim = k * free_len;

    // Quadratic form M over the stacked free factor and the Gram form G.
    let mut mform = ComplexMatrix::zeros(dim, dim);
    for i in 0..k {
        for j in 0..k {
            for p in 0..free_len {
                for p2 in 0..free_len {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for q in 0..fixed.rows() {
                        for q2 in 0..fixed.rows() {
                            // Composite Choi index: input ⊗ output with stride m_out.
                            let (r, c) = if fixed_is_b {
                                (p * m_out + q, p2 * m_out + q2)
                            } else {
                                (q * m_out + p, q2 * m_out + p2)
                            };
                            acc += fixed.get(q, i).conj() * choi.get(r, c) * fixed.get(q2, j);
                        }
                    }
                    mform.set(i * free_len + p, j * free_len + p2, acc);
                }
            }
        }
    }
    let gram = fixed.gram(); // k×k
    let mut gform = ComplexMatrix::zeros(dim, dim);
    for i in 0..k {
        for j in 0..k {
            for p in 0..free_len {
                gform.set(i * free_len + p, j * free_len + p, gram.get(i, j));
            }
        }
    }

    // Whitening: W = G^{-1/2} on the non-degenerate span.
    let geig = eigen_hermitian_unchecked(&gform.hermitian_part());
    let gmax = geig.max_eigenvalue();
    if gmax <= 0.0 {
        return None;
    }
    let cut = gmax * 1e-12;
    let w = geig.apply_spectral(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
    let reduced = w.mul(&mform).mul(&w).hermitian_part();
    let reig = eigen_hermitian_unchecked(&reduced);
    let value = reig.min_eigenvalue();
    // Smallest eigenvector back through the whitening.
    let mut vec = ComplexMatrix::zeros(dim, 1);
    for r in 0..dim {
        vec.set(r, 0, reig.eigenvectors.get(r, 0));
    }
    let stacked = w.mul(&vec);
    let mut free = ComplexMatrix::zeros(free_len, k);
    for i in 0..k {
        for p in 0..free_len {
            free.set(p, i, stacked.get(i * free_len + p, 0));
        }
    }
    Some((free, value))
}

/// Searches for a Schmidt-rank-≤k witness of non-k-positivity: samples
/// factor pairs with Gaussian entries keyed by `(seed, trial)`, keeps the
/// most negative Choi quadratic form, then refines the best candidate by
/// alternating least squares. Returns `None` when nothing certifies below
/// −tolerance; that outcome is *not* a proof of k-positivity.
pub fn k_positivity_falsifier(
    map: &LinMap,
    k: usize,
    trials: u64,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<Option<Witness>, MapError> {
    assert!(k >= 1, "Schmidt rank bound must be at least 1");
    let n = map.input_dim();
    let m = map.output_dim();
    let k = k.min(n).min(m);
    let choi = choi_matrix(map)?.matrix.hermitian_part();
    let eig_scale = eigen_hermitian_unchecked(&choi).spectral_radius();
    let tol = cfg.scale(eig_scale);

    let mut best: Option<(FactorPair, f64)> = None;
    for trial in 0..trials {
        let mut rng = SplitMix64::new(crate::rng::derive_seed(seed, trial));
        let pair = FactorPair {
            a: ComplexMatrix::from_fn(n, k, |_, _| rng.gaussian_c64()),
            b: ComplexMatrix::from_fn(m, k, |_, _| rng.gaussian_c64()),
        };
        let v = pair.assemble();
        if let Some(val) = rayleigh(&choi, &v) {
            if best.as_ref().is_none_or(|(_, b)| val < *b) {
                best = Some((pair, val));
            }
        }
    }
    let (mut pair, mut value) = match best {
        Some(b) => b,
        None => return Ok(None),
    };

    for _ in 0..60 {
        let prev = value;
        if let Some((a_new, val)) = als_step(&choi, &pair.b, n, true, m) {
            pair.a = a_new;
            value = val;
        }
        if let Some((b_new, val)) = als_step(&choi, &pair.a, m, false, m) {
            pair.b = b_new;
            value = val;
        }
        if (prev - value).abs() <= 1e-13 * value.abs().max(1.0) {
            break;
        }
    }

    if value < -tol {
        let v = pair.assemble();
        let norm = v.gram().get(0, 0).re.sqrt();
        let unit = v.scale_re(1.0 / norm);
        let certified = rayleigh(&choi, &unit).unwrap_or(value);
        Ok(Some(Witness { vector: unit, value: certified, schmidt_rank: k }))
    } else {
        Ok(None)
    }
}
