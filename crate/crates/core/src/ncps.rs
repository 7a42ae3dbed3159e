//! The noncommutative probability space `(M_n, τ)` with the normalized
//! trace `τ(I) = 1`, its Schatten p-norms `‖A‖_p = (τ(|A|^p))^{1/p}`, the
//! trace semi-inner product, and the trace Grüss bounds.
//!
//! The normalized trace is used everywhere in this module; the unnormalized
//! trace appears only inside the `μTr(·)I − id` builtin of `posmaps`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::matcore::{
    hermitian_eigen, operator_norm, singular_values, ComplexMatrix, MatError, ToleranceConfig,
};
use crate::report::{InequalityReport, ReportValue, TierReport};

/// Descriptor of `(M_n, τ)` with `τ([a_ij]) = (Σ a_ii)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCProbSpace {
    dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceError {
    DimensionMismatch { expected: usize, got: (usize, usize) },
    BadExponent { p: f64 },
    ExponentOutOfRange { p: f64, q: f64, r: f64 },
    InvalidDensity { detail: String },
    AccretivityFailed { hypothesis: String, re_tau: f64 },
    Mat(MatError),
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::DimensionMismatch { expected, got } => {
                write!(f, "expected a {expected}x{expected} matrix, got {}x{}", got.0, got.1)
            }
            TraceError::BadExponent { p } => write!(f, "Schatten exponent {p} < 1"),
            TraceError::ExponentOutOfRange { p, q, r } => {
                write!(f, "exponents (p={p}, q={q}, r={r}) outside (p,q>=4, r>=2) or (p,q>=2, r=inf)")
            }
            TraceError::InvalidDensity { detail } => write!(f, "invalid density operator: {detail}"),
            TraceError::AccretivityFailed { hypothesis, re_tau } => {
                write!(f, "trace accretivity failed for {hypothesis} (Re τ(C) = {re_tau:.3e})")
            }
            TraceError::Mat(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TraceError {}

impl From<MatError> for TraceError {
    fn from(e: MatError) -> Self {
        TraceError::Mat(e)
    }
}

impl NCProbSpace {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "probability space needs dimension >= 1");
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, a: &ComplexMatrix) -> Result<(), TraceError> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(TraceError::DimensionMismatch {
                expected: self.dim,
                got: (a.rows(), a.cols()),
            });
        }
        Ok(())
    }

    /// Normalized trace `τ(A) = (Σ a_ii)/n`.
    pub fn tau(&self, a: &ComplexMatrix) -> Complex64 {
        a.trace() / Complex64::new(self.dim as f64, 0.0)
    }
}

/// A positive operator with `τ(T) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates positivity (within tolerance) and `τ(T) = 1` within 1e-10.
    pub fn new(space: &NCProbSpace, matrix: ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self, TraceError> {
        space.check_dim(&matrix)?;
        let eig = hermitian_eigen(&matrix, cfg)
            .map_err(|e| TraceError::InvalidDensity { detail: format!("{e}") })?;
        if eig.min_eigenvalue() < -cfg.scale(eig.spectral_radius()) {
            return Err(TraceError::InvalidDensity {
                detail: format!("min eigenvalue {:.3e}", eig.min_eigenvalue()),
            });
        }
        let tau = space.tau(&matrix).re;
        if (tau - 1.0).abs() > 1e-10 {
            return Err(TraceError::InvalidDensity { detail: format!("τ(T) = {tau} != 1") });
        }
        Ok(Self { matrix })
    }

    /// Rescales a PSD matrix to normalized trace 1 before validating.
    pub fn renormalized(space: &NCProbSpace, matrix: ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self, TraceError> {
        space.check_dim(&matrix)?;
        let tau = space.tau(&matrix).re;
        if tau <= 0.0 {
            return Err(TraceError::InvalidDensity { detail: format!("τ(T) = {tau} <= 0") });
        }
        Self::new(space, matrix.scale_re(1.0 / tau), cfg)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Schatten p-norm `‖A‖_p = (τ(|A|^p))^{1/p}` under the normalized trace;
/// `p = ∞` is the operator norm by convention. Scaling by the top singular
/// value keeps large exponents overflow-free.
pub fn schatten_p_norm(space: &NCProbSpace, a: &ComplexMatrix, p: f64) -> Result<f64, TraceError> {
    space.check_dim(a)?;
    if p.is_nan() || p < 1.0 {
        return Err(TraceError::BadExponent { p });
    }
    let sv = singular_values(a);
    let top = sv.last().copied().unwrap_or(0.0);
    if p.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    let n = space.dim as f64;
    let sum: f64 = sv.iter().map(|&s| (s / top).powf(p)).sum();
    Ok(top * (sum / n).powf(1.0 / p))
}

/// Trace semi-inner product `(A,B)_τ = τ(TA*B) − τ(TA*)τ(TB)`.
pub fn trace_semi_inner(
    space: &NCProbSpace,
    density: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<Complex64, TraceError> {
    space.check_dim(a)?;
    space.check_dim(b)?;
    let t = density.matrix();
    let a_star = a.adjoint();
    let first = space.tau(&t.mul(&a_star.mul(b)));
    let second = space.tau(&t.mul(&a_star)) * space.tau(&t.mul(b));
    Ok(first - second)
}

/// The three bounds of the trace Grüss theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVariant {
    /// `‖A−αI‖₄ ‖B−βI‖₄ ‖T‖₂`
    V1,
    /// `‖A−αI‖₂ ‖B−βI‖₂ ‖T‖`
    V2,
    /// `‖A−αI‖ ‖B−βI‖`
    V3,
}

impl TraceVariant {
    pub fn id(&self) -> &'static str {
        match self {
            TraceVariant::V1 => "trace.v1",
            TraceVariant::V2 => "trace.v2",
            TraceVariant::V3 => "trace.v3",
        }
    }
}

fn trace_cov_lhs(
    space: &NCProbSpace,
    density: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> f64 {
    let t = density.matrix();
    let joint = space.tau(&t.mul(&a.mul(b)));
    let split = space.tau(&t.mul(a)) * space.tau(&t.mul(b));
    (joint - split).norm()
}

#[allow(clippy::too_many_arguments)]
fn trace_report(
    id: &str,
    lhs: f64,
    rhs: f64,
    params: Vec<(String, Complex64)>,
    cfg: &ToleranceConfig,
) -> InequalityReport {
    let margin = rhs - lhs;
    let tol = cfg.scale(rhs.max(lhs));
    InequalityReport::from_tiers(
        String::from(id),
        ReportValue::Scalar(lhs),
        ReportValue::Scalar(rhs),
        vec![TierReport { label: String::from("lhs<=rhs"), margin, satisfied: margin >= -tol }],
        params,
        *cfg,
    )
}

/// `|τ(TAB)−τ(TA)τ(TB)|` against the chosen norm-product bound.
#[allow(clippy::too_many_arguments)]
pub fn check_trace_gruss(
    space: &NCProbSpace,
    density: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    alpha: Complex64,
    beta: Complex64,
    variant: TraceVariant,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, TraceError> {
    space.check_dim(a)?;
    space.check_dim(b)?;
    let lhs = trace_cov_lhs(space, density, a, b);
    let da = a.sub_scalar(alpha);
    let db = b.sub_scalar(beta);
    let t = density.matrix();
    let rhs = match variant {
        TraceVariant::V1 => {
            schatten_p_norm(space, &da, 4.0)?
                * schatten_p_norm(space, &db, 4.0)?
                * schatten_p_norm(space, t, 2.0)?
        }
        TraceVariant::V2 => {
            schatten_p_norm(space, &da, 2.0)? * schatten_p_norm(space, &db, 2.0)? * operator_norm(t)
        }
        TraceVariant::V3 => operator_norm(&da) * operator_norm(&db),
    };
    Ok(trace_report(
        variant.id(),
        lhs,
        rhs,
        vec![(String::from("alpha"), alpha), (String::from("beta"), beta)],
        cfg,
    ))
}

/// General-exponent corollary: `‖A−αI‖_p ‖B−βI‖_q ‖T‖_r` for
/// `(p,q ≥ 4, r ≥ 2)`, or with `‖T‖` when `r = ∞` and `p,q ≥ 2`.
#[allow(clippy::too_many_arguments)]
pub fn check_trace_gruss_pq(
    space: &NCProbSpace,
    density: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    alpha: Complex64,
    beta: Complex64,
    p: f64,
    q: f64,
    r: f64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, TraceError> {
    let first_family = p >= 4.0 && q >= 4.0 && r >= 2.0;
    let second_family = p >= 2.0 && q >= 2.0 && r.is_infinite();
    if !(first_family || second_family) {
        return Err(TraceError::ExponentOutOfRange { p, q, r });
    }
    space.check_dim(a)?;
    space.check_dim(b)?;
    let lhs = trace_cov_lhs(space, density, a, b);
    let rhs = schatten_p_norm(space, &a.sub_scalar(alpha), p)?
        * schatten_p_norm(space, &b.sub_scalar(beta), q)?
        * schatten_p_norm(space, density.matrix(), r)?;
    Ok(trace_report(
        "trace.pq",
        lhs,
        rhs,
        vec![
            (String::from("alpha"), alpha),
            (String::from("beta"), beta),
            (String::from("p"), Complex64::new(p, 0.0)),
            (String::from("q"), Complex64::new(q, 0.0)),
            (String::from("r"), Complex64::new(r, 0.0)),
        ],
        cfg,
    ))
}

/// Trace-level accretivity data for the disk `C_{α,β}(A)`.
///
/// `accretive` is the literal condition `Re τ(C_{α,β}(A)) ≥ 0`. The 1- and
/// 4-norm slacks `½|β−α| − ‖A−(α+β)/2·I‖_p` are reported but not enforced:
/// whether either is implied by trace accretivity is left to empirical
/// fuzzing (see the companion crate's accretive-trace report).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceAccretivity {
    pub re_tau: f64,
    pub accretive: bool,
    pub norm1_slack: f64,
    pub norm4_slack: f64,
}

pub fn trace_accretivity(
    space: &NCProbSpace,
    a: &ComplexMatrix,
    alpha: Complex64,
    beta: Complex64,
    cfg: &ToleranceConfig,
) -> Result<TraceAccretivity, TraceError> {
    space.check_dim(a)?;
    let c_op = crate::gruss_core::disk_operator(a, alpha, beta);
    let re_tau = space.tau(&c_op).re;
    let mid = (alpha + beta) * Complex64::new(0.5, 0.0);
    let dev = a.sub_scalar(mid);
    let half = 0.5 * (beta - alpha).norm();
    let norm1_slack = half - schatten_p_norm(space, &dev, 1.0)?;
    let norm4_slack = half - schatten_p_norm(space, &dev, 4.0)?;
    let tol = cfg.scale(a.frobenius_norm().max((beta - alpha).norm()));
    Ok(TraceAccretivity { re_tau, accretive: re_tau >= -tol, norm1_slack, norm4_slack })
}

/// Trace Grüss bound under trace accretivity of both disks:
/// `|τ(TAB)−τ(TA)τ(TB)| ≤ ¼|β−α||ξ−ζ|·‖T‖₂`.
#[allow(clippy::too_many_arguments)]
pub fn check_trace_accretive_gruss(
    space: &NCProbSpace,
    density: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    alpha: Complex64,
    beta: Complex64,
    zeta: Complex64,
    xi: Complex64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, TraceError> {
    let acc_a = trace_accretivity(space, a, alpha, beta, cfg)?;
    if !acc_a.accretive {
        return Err(TraceError::AccretivityFailed {
            hypothesis: String::from("tau(C_{alpha,beta}(A))"),
            re_tau: acc_a.re_tau,
        });
    }
    let acc_b = trace_accretivity(space, b, zeta, xi, cfg)?;
    if !acc_b.accretive {
        return Err(TraceError::AccretivityFailed {
            hypothesis: String::from("tau(C_{zeta,xi}(B))"),
            re_tau: acc_b.re_tau,
        });
    }
    let lhs = trace_cov_lhs(space, density, a, b);
    let rhs = 0.25
        * (beta - alpha).norm()
        * (xi - zeta).norm()
        * schatten_p_norm(space, density.matrix(), 2.0)?;
    let mut report = trace_report(
        "trace.accretive",
        lhs,
        rhs,
        vec![
            (String::from("alpha"), alpha),
            (String::from("beta"), beta),
            (String::from("zeta"), zeta),
            (String::from("xi"), xi),
        ],
        cfg,
    );
    // Carry both accretivity certificates with the verdict.
    report.params.push((String::from("re_tau_A"), Complex64::new(acc_a.re_tau, 0.0)));
    report.params.push((String::from("re_tau_B"), Complex64::new(acc_b.re_tau, 0.0)));
    report.params.push((String::from("norm1_slack_A"), Complex64::new(acc_a.norm1_slack, 0.0)));
    report.params.push((String::from("norm4_slack_A"), Complex64::new(acc_a.norm4_slack, 0.0)));
    report.params.push((String::from("norm1_slack_B"), Complex64::new(acc_b.norm1_slack, 0.0)));
    report.params.push((String::from("norm4_slack_B"), Complex64::new(acc_b.norm4_slack, 0.0)));
    Ok(report)
}
