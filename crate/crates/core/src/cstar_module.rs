//! A concrete Hilbert C*-module: `X = M_{m×k}(ℂ)` over `A = M_k(ℂ)` with
//! `⟨x, y⟩ = x*y`. Adjointable operators on `X` act by left multiplication
//! with `m×m` matrices, which makes `L(X) = M_m`. Every finitely generated
//! Hilbert module over `M_k` embeds this way, so the checks below exercise
//! the module inequalities with everything matrix-concrete.
//!
//! A module element `h` is a lifted projection when `h|h| = h` and `h ≠ 0`,
//! i.e. exactly when `h` is a partial isometry; `h⊗h` is then a projection.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::matcore::{
    eigen_hermitian_unchecked, matrix_abs, operator_norm, psd_sqrt, ComplexMatrix, MatError,
    ToleranceConfig,
};
use crate::report::{InequalityReport, ReportValue, TierReport};

/// Module element: an `m×k` matrix.
pub type ModuleVector = ComplexMatrix;
/// Adjointable operator on the module: an `m×m` matrix acting from the left.
pub type ModuleOperator = ComplexMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleError {
    AmbientMismatch { expected: (usize, usize), got: (usize, usize) },
    NotProjection { residual: f64 },
    RangeMembershipFailed { which: String, deviation: f64 },
    NotLiftedProjection,
    NotUnitVector { norm: f64 },
    NotSelfAdjoint { residual: f64 },
    AccretivityFailed { hypothesis: String, margin: f64 },
    Mat(MatError),
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::AmbientMismatch { expected, got } => {
                write!(f, "ambient mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            ModuleError::NotProjection { residual } => {
                write!(f, "operator is not a projection (residual {residual:.3e})")
            }
            ModuleError::RangeMembershipFailed { which, deviation } => {
                write!(f, "{which} is not in ran(K) (deviation {deviation:.3e})")
            }
            ModuleError::NotLiftedProjection => write!(f, "h is not a lifted projection"),
            ModuleError::NotUnitVector { norm } => write!(f, "e is not a unit vector (norm {norm})"),
            ModuleError::NotSelfAdjoint { residual } => {
                write!(f, "operator is not self-adjoint (residual {residual:.3e})")
            }
            ModuleError::AccretivityFailed { hypothesis, margin } => {
                write!(f, "accretivity hypothesis failed for {hypothesis} (margin {margin:.3e})")
            }
            ModuleError::Mat(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ModuleError {}

impl From<MatError> for ModuleError {
    fn from(e: MatError) -> Self {
        ModuleError::Mat(e)
    }
}

fn require_same_ambient(x: &ModuleVector, y: &ModuleVector) -> Result<(), ModuleError> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(ModuleError::AmbientMismatch {
            expected: (x.rows(), x.cols()),
            got: (y.rows(), y.cols()),
        });
    }
    Ok(())
}

/// `⟨x, y⟩ = x*y ∈ M_k`; conjugate-symmetric and A-linear in the second slot.
pub fn inner(x: &ModuleVector, y: &ModuleVector) -> Result<ComplexMatrix, ModuleError> {
    require_same_ambient(x, y)?;
    Ok(x.adjoint().mul(y))
}

/// `|x|² = ⟨x, x⟩ ∈ M_k`.
pub fn abs_squared(x: &ModuleVector) -> ComplexMatrix {
    x.gram()
}

/// `|x| = ⟨x, x⟩^{1/2} ∈ M_k`.
pub fn vector_abs(x: &ModuleVector) -> ComplexMatrix {
    eigen_hermitian_unchecked(&x.gram().hermitian_part()).apply_spectral(|l| l.max(0.0).sqrt())
}

/// Module norm `‖x‖ = ‖⟨x,x⟩‖^{1/2}`, the largest singular value of `x`.
pub fn module_norm(x: &ModuleVector) -> f64 {
    operator_norm(x)
}

/// Rank-one operator `x⊗y : z ↦ x⟨y, z⟩`, realized as the matrix `x·y*`.
pub fn rank_one(x: &ModuleVector, y: &ModuleVector) -> Result<ModuleOperator, ModuleError> {
    require_same_ambient(x, y)?;
    Ok(x.mul(&y.adjoint()))
}

/// `h` is a lifted projection iff `h ≠ 0` and `h·|h| = h`.
pub fn is_lifted_projection(h: &ModuleVector, cfg: &ToleranceConfig) -> bool {
    let scale = h.frobenius_norm();
    if scale <= cfg.scale(0.0) {
        return false;
    }
    let habs = h.mul(&vector_abs(h));
    habs.sub(h).frobenius_norm() <= cfg.scale(scale)
}

fn require_projection(k: &ModuleOperator, cfg: &ToleranceConfig) -> Result<(), ModuleError> {
    let scale = k.frobenius_norm();
    let herm = k.hermitian_residual();
    let idem = k.mul(k).sub(k).frobenius_norm();
    let residual = herm.max(idem);
    if residual > cfg.scale(scale.max(1.0)) {
        return Err(ModuleError::NotProjection { residual });
    }
    Ok(())
}

fn require_in_range(
    k: &ModuleOperator,
    w: &ModuleVector,
    which: &str,
    cfg: &ToleranceConfig,
) -> Result<(), ModuleError> {
    let deviation = k.mul(w).sub(w).frobenius_norm();
    if deviation > cfg.scale(w.frobenius_norm().max(1.0)) {
        return Err(ModuleError::RangeMembershipFailed { which: String::from(which), deviation });
    }
    Ok(())
}

/// Min eigenvalue of the Hermitian part of `⟨u, v⟩`-style forms.
fn min_eig(m: &ComplexMatrix) -> f64 {
    eigen_hermitian_unchecked(&m.hermitian_part()).min_eigenvalue()
}

fn loewner_margin(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> f64 {
    min_eig(&rhs.sub(lhs))
}

fn tier(label: &str, margin: f64, tol: f64) -> TierReport {
    TierReport { label: String::from(label), margin, satisfied: margin >= -tol }
}

/// Variance-type module lemma: for a projection `K` with `u+v ∈ ran(K)`,
/// `|x|² − ⟨Kx,x⟩ ≤ ¼|v−u|² − Re⟨x−u, v−x⟩`; when `Re⟨x−u,v−x⟩ ≥ 0` the
/// second tier `|x|² − ⟨Kx,x⟩ ≤ ¼|v−u|²` applies as well.
pub fn check_module_variance(
    k: &ModuleOperator,
    x: &ModuleVector,
    u: &ModuleVector,
    v: &ModuleVector,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, ModuleError> {
    require_projection(k, cfg)?;
    require_same_ambient(x, u)?;
    require_same_ambient(x, v)?;
    require_in_range(k, &u.add(v), "u+v", cfg)?;

    let kx = k.mul(x);
    let lhs = abs_squared(x).sub(&inner(&kx, x)?).hermitian_part();
    let d = v.sub(u);
    let quarter = abs_squared(&d).scale_re(0.25);
    let re_term = inner(&x.sub(u), &v.sub(x))?.hermitian_part();
    let rhs = quarter.sub(&re_term);

    let scale = lhs.frobenius_norm().max(rhs.frobenius_norm());
    let tol = cfg.scale(scale);
    let mut tiers = vec![tier("lhs<=quarter-Re", loewner_margin(&lhs, &rhs), tol)];
    let re_min = min_eig(&re_term);
    if re_min >= -tol {
        tiers.push(tier("lhs<=quarter", loewner_margin(&lhs, &quarter), tol));
    }

    Ok(InequalityReport::from_tiers(
        "module.variance",
        ReportValue::Matrix(lhs),
        ReportValue::Matrix(rhs),
        tiers,
        Vec::new(),
        *cfg,
    ))
}

/// Module Grüss bound: under both range memberships and both accretivity
/// hypotheses,
/// `|⟨x,y⟩−⟨Kx,y⟩| ≤ ‖¼|v−u|²−Re⟨x−u,v−x⟩‖^{1/2}·(¼|v′−u′|²−Re⟨y−u′,v′−y⟩)^{1/2}
///  ≤ ¼‖v−u‖·|v′−u′|`.
#[allow(clippy::too_many_arguments)]
pub fn check_module_gruss(
    k: &ModuleOperator,
    x: &ModuleVector,
    y: &ModuleVector,
    u: &ModuleVector,
    v: &ModuleVector,
    u_prime: &ModuleVector,
    v_prime: &ModuleVector,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, ModuleError> {
    require_projection(k, cfg)?;
    require_same_ambient(x, y)?;
    require_in_range(k, &u.add(v), "u+v", cfg)?;
    require_in_range(k, &u_prime.add(v_prime), "u'+v'", cfg)?;

    let scale_tol = cfg.scale(1.0);
    let re_x = inner(&x.sub(u), &v.sub(x))?.hermitian_part();
    if min_eig(&re_x) < -cfg.scale(re_x.frobenius_norm().max(1.0)) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<x-u,v-x>"),
            margin: min_eig(&re_x),
        });
    }
    let re_y = inner(&y.sub(u_prime), &v_prime.sub(y))?.hermitian_part();
    if min_eig(&re_y) < -cfg.scale(re_y.frobenius_norm().max(1.0)) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<y-u',v'-y>"),
            margin: min_eig(&re_y),
        });
    }
    let _ = scale_tol;

    let kx = k.mul(x);
    let lhs = matrix_abs(&inner(x, y)?.sub(&inner(&kx, y)?))?;

    let x1 = abs_squared(&v.sub(u)).scale_re(0.25).sub(&re_x).hermitian_part();
    let x2 = abs_squared(&v_prime.sub(u_prime)).scale_re(0.25).sub(&re_y).hermitian_part();
    let middle = psd_sqrt(&x2, cfg)?.scale_re(operator_norm(&x1).max(0.0).sqrt());
    let cap = vector_abs(&v_prime.sub(u_prime)).scale_re(0.25 * module_norm(&v.sub(u)));

    let scale = lhs.frobenius_norm().max(cap.frobenius_norm());
    let tol = cfg.scale(scale);
    Ok(InequalityReport::from_tiers(
        "module.gruss",
        ReportValue::Matrix(lhs.clone()),
        ReportValue::Matrix(cap.clone()),
        vec![
            tier("|<x,y>-<Kx,y>|<=root_product", loewner_margin(&lhs, &middle), tol),
            tier("root_product<=quarter_cap", loewner_margin(&middle, &cap), tol),
        ],
        Vec::new(),
        *cfg,
    ))
}

/// Lifted-projection Grüss bound with algebra-valued endpoints
/// `a, A, b, B ∈ M_k`:
/// `|⟨x,y⟩−⟨x,h⟩⟨h,y⟩| ≤ ‖¼|A−a|²−Re⟨x−ha,hA−x⟩‖^{1/2}·(¼|B−b|²−Re⟨y−hb,hB−y⟩)^{1/2}
///  ≤ ¼‖A−a‖·|B−b|`.
#[allow(clippy::too_many_arguments)]
pub fn check_lifted_gruss(
    h: &ModuleVector,
    x: &ModuleVector,
    y: &ModuleVector,
    a_low: &ComplexMatrix,
    a_high: &ComplexMatrix,
    b_low: &ComplexMatrix,
    b_high: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, ModuleError> {
    if !is_lifted_projection(h, cfg) {
        return Err(ModuleError::NotLiftedProjection);
    }
    require_same_ambient(h, x)?;
    require_same_ambient(h, y)?;

    let ha = h.mul(a_low);
    let h_cap_a = h.mul(a_high);
    let hb = h.mul(b_low);
    let h_cap_b = h.mul(b_high);

    let re_x = inner(&x.sub(&ha), &h_cap_a.sub(x))?.hermitian_part();
    if min_eig(&re_x) < -cfg.scale(re_x.frobenius_norm().max(1.0)) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<x-ha,hA-x>"),
            margin: min_eig(&re_x),
        });
    }
    let re_y = inner(&y.sub(&hb), &h_cap_b.sub(y))?.hermitian_part();
    if min_eig(&re_y) < -cfg.scale(re_y.frobenius_norm().max(1.0)) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<y-hb,hB-y>"),
            margin: min_eig(&re_y),
        });
    }

    let lhs = matrix_abs(&inner(x, y)?.sub(&inner(x, h)?.mul(&inner(h, y)?)))?;

    let da = a_high.sub(a_low);
    let db = b_high.sub(b_low);
    let x1 = da.gram().scale_re(0.25).sub(&re_x).hermitian_part();
    let x2 = db.gram().scale_re(0.25).sub(&re_y).hermitian_part();
    let middle = psd_sqrt(&x2, cfg)?.scale_re(operator_norm(&x1).max(0.0).sqrt());
    let cap = matrix_abs(&db)?.scale_re(0.25 * operator_norm(&da));

    let tol = cfg.scale(lhs.frobenius_norm().max(cap.frobenius_norm()));
    Ok(InequalityReport::from_tiers(
        "module.lifted",
        ReportValue::Matrix(lhs.clone()),
        ReportValue::Matrix(cap.clone()),
        vec![
            tier("|<x,y>-<x,h><h,y>|<=root_product", loewner_margin(&lhs, &middle), tol),
            tier("root_product<=quarter_cap", loewner_margin(&middle, &cap), tol),
        ],
        Vec::new(),
        *cfg,
    ))
}

/// Hilbert-space Grüss bound (the `k = 1` case): for a unit vector `e` and
/// scalars with `Re⟨βe−x, x−αe⟩ ≥ 0`, `Re⟨Γe−y, y−γe⟩ ≥ 0`,
/// `|⟨x,y⟩−⟨x,e⟩⟨e,y⟩| ≤ ¼|β−α||Γ−γ| − (Re⟨βe−x,x−αe⟩)^{1/2}(Re⟨Γe−y,y−γe⟩)^{1/2}`.
#[allow(clippy::too_many_arguments)]
pub fn check_hilbert_gruss(
    e: &ModuleVector,
    x: &ModuleVector,
    y: &ModuleVector,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    gamma_cap: Complex64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, ModuleError> {
    if e.cols() != 1 {
        return Err(ModuleError::AmbientMismatch { expected: (e.rows(), 1), got: (e.rows(), e.cols()) });
    }
    require_same_ambient(e, x)?;
    require_same_ambient(e, y)?;
    let norm = module_norm(e);
    if (norm - 1.0).abs() > cfg.scale(1.0) {
        return Err(ModuleError::NotUnitVector { norm });
    }

    let scaled = |c: Complex64| e.scale(c);
    let r1 = inner(&scaled(beta).sub(x), &x.sub(&scaled(alpha)))?.get(0, 0).re;
    if r1 < -cfg.scale(1.0 + x.frobenius_norm()) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<be-x,x-ae>"),
            margin: r1,
        });
    }
    let r2 = inner(&scaled(gamma_cap).sub(y), &y.sub(&scaled(gamma)))?.get(0, 0).re;
    if r2 < -cfg.scale(1.0 + y.frobenius_norm()) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("Re<Ge-y,y-ge>"),
            margin: r2,
        });
    }

    let lhs = (inner(x, y)?.get(0, 0) - inner(x, e)?.get(0, 0) * inner(e, y)?.get(0, 0)).norm();
    let rhs = 0.25 * (beta - alpha).norm() * (gamma_cap - gamma).norm()
        - r1.max(0.0).sqrt() * r2.max(0.0).sqrt();
    let margin = rhs - lhs;
    let tol = cfg.scale(rhs.abs().max(lhs));

    Ok(InequalityReport::from_tiers(
        "hilbert.gruss",
        ReportValue::Scalar(lhs),
        ReportValue::Scalar(rhs),
        vec![tier("|<x,y>-<x,e><e,y>|<=dragomir", margin, tol)],
        vec![
            (String::from("alpha"), alpha),
            (String::from("beta"), beta),
            (String::from("gamma"), gamma),
            (String::from("Gamma"), gamma_cap),
        ],
        *cfg,
    ))
}

/// Accretive-operator proposition on the module: for self-adjoint `T`,
/// scalar center elements `a, b` and a lifted projection `h` with
/// `C_{a,b}(T) = (T−aI)*(bI−T)` accretive,
/// `⟨T²h,h⟩ − ⟨Th,h⟩² ≤ ¼|b−a|²·I − ⟨(Re C)h, h⟩ ≤ ¼|b−a|²·I` in `M_k`
/// (the square of `⟨Th,h⟩` is the k×k matrix square).
pub fn check_module_accretive(
    t: &ModuleOperator,
    a: Complex64,
    b: Complex64,
    h: &ModuleVector,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport, ModuleError> {
    let residual = t.hermitian_residual();
    if residual > cfg.scale(t.frobenius_norm()) {
        return Err(ModuleError::NotSelfAdjoint { residual });
    }
    if !is_lifted_projection(h, cfg) {
        return Err(ModuleError::NotLiftedProjection);
    }
    if t.rows() != h.rows() {
        return Err(ModuleError::AmbientMismatch { expected: (t.rows(), t.rows()), got: (h.rows(), h.cols()) });
    }

    let c_op = crate::gruss_core::disk_operator(t, a, b);
    let re_c = c_op.hermitian_part();
    let re_min = min_eig(&re_c);
    if re_min < -cfg.scale(re_c.frobenius_norm().max(1.0)) {
        return Err(ModuleError::AccretivityFailed {
            hypothesis: String::from("C_{a,b}(T)"),
            margin: re_min,
        });
    }

    let th = t.mul(h);
    let t2h = t.mul(&th);
    let second_moment = inner(&t2h, h)?.hermitian_part();
    let first_moment = inner(&th, h)?.hermitian_part();
    let lhs = second_moment.sub(&first_moment.mul(&first_moment)).hermitian_part();

    let k = h.cols();
    let quarter = (b - a).norm_sqr() / 4.0;
    let cap = ComplexMatrix::identity(k).scale_re(quarter);
    let compressed = inner(&re_c.mul(h), h)?.hermitian_part();
    let middle = cap.sub(&compressed);

    let tol = cfg.scale(lhs.frobenius_norm().max(cap.frobenius_norm()));
    Ok(InequalityReport::from_tiers(
        "module.accretive",
        ReportValue::Matrix(lhs.clone()),
        ReportValue::Matrix(cap.clone()),
        vec![
            tier("<T^2h,h>-<Th,h>^2<=quarter-<ReC h,h>", loewner_margin(&lhs, &middle), tol),
            tier("quarter-<ReC h,h><=quarter", loewner_margin(&middle, &cap), tol),
        ],
        vec![(String::from("a"), a), (String::from("b"), b)],
        *cfg,
    ))
}
