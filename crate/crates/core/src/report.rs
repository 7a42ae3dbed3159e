//! Inequality verdicts shared by the map, trace and module checks.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matcore::{ComplexMatrix, ToleranceConfig};

/// Either side of an inequality: a scalar bound or an operator in Loewner order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum ReportValue {
    Scalar(f64),
    Matrix(ComplexMatrix),
}

impl ReportValue {
    /// Magnitude used for tightness ratios: value for scalars, operator norm
    /// for matrices.
    pub fn magnitude(&self) -> f64 {
        match self {
            ReportValue::Scalar(s) => s.abs(),
            ReportValue::Matrix(m) => crate::matcore::operator_norm(m),
        }
    }
}

/// One link of a chained inequality.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TierReport {
    /// Stable label, e.g. `"gap<=phi_abs2"`.
    pub label: String,
    /// Min eigenvalue of rhs−lhs (or rhs−lhs for scalars).
    pub margin: f64,
    pub satisfied: bool,
}

/// Full verdict for one inequality check: outermost lhs/rhs, the margin of
/// the binding comparison, per-tier margins for chained bounds, and the
/// scalar parameters the check ran with.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InequalityReport {
    pub inequality_id: String,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    /// Minimum margin over all tiers.
    pub margin: f64,
    pub satisfied: bool,
    pub tiers: Vec<TierReport>,
    /// Named complex parameters (alpha, beta, gamma, Gamma, zeta, xi, ...).
    pub params: Vec<(String, Complex64)>,
    pub tolerance: ToleranceConfig,
}

impl InequalityReport {
    /// Assembles a report from tiers; `satisfied` requires every tier to hold.
    pub fn from_tiers(
        inequality_id: impl Into<String>,
        lhs: ReportValue,
        rhs: ReportValue,
        tiers: Vec<TierReport>,
        params: Vec<(String, Complex64)>,
        tolerance: ToleranceConfig,
    ) -> Self {
        debug_assert!(!tiers.is_empty());
        let margin = tiers.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
        let satisfied = tiers.iter().all(|t| t.satisfied);
        Self { inequality_id: inequality_id.into(), lhs, rhs, margin, satisfied, tiers, params, tolerance }
    }

    /// lhs/rhs magnitude ratio; `None` when the rhs vanishes.
    pub fn tightness(&self) -> Option<f64> {
        let denom = self.rhs.magnitude();
        if denom > 0.0 {
            Some(self.lhs.magnitude() / denom)
        } else {
            None
        }
    }
}
