//! Scenario dispatch: route an inequality id to the corresponding check.
//!
//! Missing α/β/γ/Γ/ζ/ξ parameters default to scalar-center data: the
//! minimizer γ for the plain bounds, and the disk `γ ∓ r·1` (with
//! `r = ‖A−γI‖`) for the accretive hypotheses.

use std::path::Path;

use grusslab_core::cstar_module::{
    check_hilbert_gruss, check_lifted_gruss, check_module_accretive, check_module_gruss,
    check_module_variance,
};
use grusslab_core::gruss_core::{
    check_accretive_covariance, check_accretive_variance, check_covariance_bound,
    check_nonunital_covariance, check_nonunital_variance, check_refined_norm_bound,
    check_variance_bound, covariance_block_check, covariance_bound_raw, PositivityEvidence,
};
use grusslab_core::ncps::{
    check_trace_accretive_gruss, check_trace_gruss, check_trace_gruss_pq, DensityOperator,
    NCProbSpace, TraceVariant,
};
use grusslab_core::scalar_center::distance_to_scalars;
use grusslab_core::{Complex64, ComplexMatrix, InequalityReport, ToleranceConfig};

use crate::formats::Scenario;
use crate::HarnessError;

/// All stable inequality ids the dispatcher accepts.
pub const INEQUALITY_IDS: &[&str] = &[
    "variance",
    "variance.chain",
    "covariance.block",
    "covariance",
    "covariance.raw",
    "covariance.norm",
    "variance.accretive",
    "covariance.accretive",
    "variance.nonunital",
    "covariance.nonunital",
    "trace.v1",
    "trace.v2",
    "trace.v3",
    "trace.pq",
    "trace.accretive",
    "module.variance",
    "module.gruss",
    "module.lifted",
    "hilbert.gruss",
    "module.accretive",
];

fn need<'a, T>(field: Option<&'a T>, name: &str, id: &str) -> Result<&'a T, HarnessError> {
    field.ok_or_else(|| HarnessError::Schema(format!("inequality {id:?} needs field {name:?}")))
}

fn check_failure(e: impl core::fmt::Display) -> HarnessError {
    HarnessError::Check(e.to_string())
}

/// γ of `A` (used when a scenario omits a center parameter).
fn default_gamma(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Complex64, HarnessError> {
    Ok(distance_to_scalars(a, cfg).map_err(check_failure)?.gamma)
}

/// Disk `(γ − r, γ + r)` around the scalar center, slightly inflated so the
/// accretivity hypothesis survives round-off.
fn default_disk(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<(Complex64, Complex64), HarnessError> {
    let g = distance_to_scalars(a, cfg).map_err(check_failure)?;
    let r = g.radius * (1.0 + 1e-7) + g.certified_gap + cfg.scale(0.0);
    let shift = Complex64::new(r, 0.0);
    Ok((g.gamma - shift, g.gamma + shift))
}

fn evidence(scenario: &Scenario) -> PositivityEvidence {
    match scenario.assume_positive {
        Some(k) => PositivityEvidence::Assume(k),
        None => PositivityEvidence::CertifyViaChoi,
    }
}

/// Runs the check a scenario describes. Pure in the scenario contents:
/// identical scenario bytes yield the identical report.
pub fn run_check(scenario: &Scenario, base_dir: Option<&Path>) -> Result<InequalityReport, HarnessError> {
    let cfg = scenario.tolerance();
    let id = scenario.inequality.as_str();
    match id {
        "variance" | "variance.chain" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let alpha = match scenario.alpha {
                Some(p) => p.into(),
                None => default_gamma(a, &cfg)?,
            };
            let report = check_variance_bound(&map, a, alpha, &cfg).map_err(check_failure)?;
            if id == "variance" {
                // The Lemma alone: first link of the chain.
                let tier = report.tiers[0].clone();
                Ok(InequalityReport::from_tiers(
                    "variance",
                    report.lhs.clone(),
                    report.rhs.clone(),
                    vec![tier],
                    report.params.clone(),
                    cfg,
                ))
            } else {
                Ok(report)
            }
        }
        "covariance.block" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            covariance_block_check(&map, a, b, evidence(scenario), &cfg).map_err(check_failure)
        }
        "covariance" | "covariance.raw" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            let alpha = match scenario.alpha {
                Some(p) => p.into(),
                None => default_gamma(a, &cfg)?,
            };
            let beta = match scenario.beta {
                Some(p) => p.into(),
                None => default_gamma(b, &cfg)?,
            };
            if id == "covariance.raw" {
                covariance_bound_raw(&map, a, b, alpha, beta, &cfg).map_err(check_failure)
            } else {
                check_covariance_bound(&map, a, b, alpha, beta, evidence(scenario), &cfg)
                    .map_err(check_failure)
            }
        }
        "covariance.norm" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            check_refined_norm_bound(&map, a, b, evidence(scenario), &cfg).map_err(check_failure)
        }
        "variance.accretive" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let (alpha, beta) = match (scenario.alpha, scenario.beta) {
                (Some(al), Some(be)) => (al.into(), be.into()),
                _ => default_disk(a, &cfg)?,
            };
            check_accretive_variance(&map, a, alpha, beta, &cfg).map_err(check_failure)
        }
        "covariance.accretive" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            let (alpha, beta) = match (scenario.alpha, scenario.beta) {
                (Some(al), Some(be)) => (al.into(), be.into()),
                _ => default_disk(&a.adjoint(), &cfg)?,
            };
            let (gamma, gamma_cap) = match (scenario.gamma, scenario.gamma_cap) {
                (Some(g), Some(gc)) => (g.into(), gc.into()),
                _ => default_disk(b, &cfg)?,
            };
            check_accretive_covariance(
                &map,
                a,
                b,
                alpha,
                beta,
                gamma,
                gamma_cap,
                evidence(scenario),
                &cfg,
            )
            .map_err(check_failure)
        }
        "variance.nonunital" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let alpha = match scenario.alpha {
                Some(p) => p.into(),
                None => default_gamma(a, &cfg)?,
            };
            check_nonunital_variance(&map, a, alpha, &cfg).map_err(check_failure)
        }
        "covariance.nonunital" => {
            let map = need(scenario.map.as_ref(), "map", id)?.resolve(base_dir)?;
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            let alpha = match scenario.alpha {
                Some(p) => p.into(),
                None => default_gamma(a, &cfg)?,
            };
            let beta = match scenario.beta {
                Some(p) => p.into(),
                None => default_gamma(b, &cfg)?,
            };
            check_nonunital_covariance(&map, a, b, alpha, beta, evidence(scenario), &cfg)
                .map_err(check_failure)
        }
        "trace.v1" | "trace.v2" | "trace.v3" | "trace.pq" | "trace.accretive" => {
            let a = need(scenario.a.as_ref(), "A", id)?;
            let b = need(scenario.b.as_ref(), "B", id)?;
            let t_raw = need(scenario.t.as_ref(), "T", id)?;
            let space = NCProbSpace::new(a.rows());
            let density = if scenario.renormalize.unwrap_or(false) {
                DensityOperator::renormalized(&space, t_raw.clone(), &cfg)
            } else {
                DensityOperator::new(&space, t_raw.clone(), &cfg)
            }
            .map_err(check_failure)?;
            let alpha: Complex64 = match scenario.alpha {
                Some(p) => p.into(),
                None => default_gamma(a, &cfg)?,
            };
            let beta: Complex64 = match scenario.beta {
                Some(p) => p.into(),
                None => default_gamma(b, &cfg)?,
            };
            match id {
                "trace.pq" => {
                    let p = need(scenario.p.as_ref(), "p", id)?.0;
                    let q = need(scenario.q.as_ref(), "q", id)?.0;
                    let r = need(scenario.r.as_ref(), "r", id)?.0;
                    check_trace_gruss_pq(&space, &density, a, b, alpha, beta, p, q, r, &cfg)
                        .map_err(check_failure)
                }
                "trace.accretive" => {
                    let (alpha, beta) = match (scenario.alpha, scenario.beta) {
                        (Some(al), Some(be)) => (al.into(), be.into()),
                        _ => default_disk(a, &cfg)?,
                    };
                    let (zeta, xi) = match (scenario.zeta, scenario.xi) {
                        (Some(z), Some(x)) => (z.into(), x.into()),
                        _ => default_disk(b, &cfg)?,
                    };
                    check_trace_accretive_gruss(&space, &density, a, b, alpha, beta, zeta, xi, &cfg)
                        .map_err(check_failure)
                }
                _ => {
                    let variant = match id {
                        "trace.v1" => TraceVariant::V1,
                        "trace.v2" => TraceVariant::V2,
                        _ => TraceVariant::V3,
                    };
                    check_trace_gruss(&space, &density, a, b, alpha, beta, variant, &cfg)
                        .map_err(check_failure)
                }
            }
        }
        "module.variance" => {
            let k = need(scenario.k_proj.as_ref(), "K", id)?.to_matrix()?;
            let x = need(scenario.x.as_ref(), "x", id)?;
            let u = need(scenario.u.as_ref(), "u", id)?;
            let v = need(scenario.v.as_ref(), "v", id)?;
            check_module_variance(&k, x, u, v, &cfg).map_err(check_failure)
        }
        "module.gruss" => {
            let k = need(scenario.k_proj.as_ref(), "K", id)?.to_matrix()?;
            let x = need(scenario.x.as_ref(), "x", id)?;
            let y = need(scenario.y.as_ref(), "y", id)?;
            let u = need(scenario.u.as_ref(), "u", id)?;
            let v = need(scenario.v.as_ref(), "v", id)?;
            let up = need(scenario.u_prime.as_ref(), "uP", id)?;
            let vp = need(scenario.v_prime.as_ref(), "vP", id)?;
            check_module_gruss(&k, x, y, u, v, up, vp, &cfg).map_err(check_failure)
        }
        "module.lifted" => {
            let h = need(scenario.h.as_ref(), "h", id)?;
            let x = need(scenario.x.as_ref(), "x", id)?;
            let y = need(scenario.y.as_ref(), "y", id)?;
            let a_low = need(scenario.a_low.as_ref(), "a", id)?;
            let a_high = need(scenario.a_high.as_ref(), "aHigh", id)?;
            let b_low = need(scenario.b_low.as_ref(), "b", id)?;
            let b_high = need(scenario.b_high.as_ref(), "bHigh", id)?;
            check_lifted_gruss(h, x, y, a_low, a_high, b_low, b_high, &cfg).map_err(check_failure)
        }
        "hilbert.gruss" => {
            let e = need(scenario.e.as_ref(), "e", id)?;
            let x = need(scenario.x.as_ref(), "x", id)?;
            let y = need(scenario.y.as_ref(), "y", id)?;
            let alpha = need(scenario.alpha.as_ref(), "alpha", id)?;
            let beta = need(scenario.beta.as_ref(), "beta", id)?;
            let gamma = need(scenario.gamma.as_ref(), "gamma", id)?;
            let gamma_cap = need(scenario.gamma_cap.as_ref(), "Gamma", id)?;
            check_hilbert_gruss(
                e,
                x,
                y,
                (*alpha).into(),
                (*beta).into(),
                (*gamma).into(),
                (*gamma_cap).into(),
                &cfg,
            )
            .map_err(check_failure)
        }
        "module.accretive" => {
            let t = need(scenario.t.as_ref(), "T", id)?;
            let h = need(scenario.h.as_ref(), "h", id)?;
            let alpha = need(scenario.alpha.as_ref(), "alpha", id)?;
            let beta = need(scenario.beta.as_ref(), "beta", id)?;
            check_module_accretive(t, (*alpha).into(), (*beta).into(), h, &cfg)
                .map_err(check_failure)
        }
        other => Err(HarnessError::Schema(format!("unknown inequality id {other:?}"))),
    }
}
