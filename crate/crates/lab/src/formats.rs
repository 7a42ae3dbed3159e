//! On-disk formats: matrix files, map files, scenario bundles and report
//! projections.
//!
//! Matrices use the repo-wide JSON shape
//! `{"rows": n, "cols": m, "entries": [[re, im], ...]}` (row-major, exact
//! IEEE doubles); that codec lives on `ComplexMatrix` itself. Complex scalar
//! parameters are `[re, im]` pairs. Scenario files carry an `inequality` id
//! plus the fields that id needs; unknown ids and missing fields are schema
//! errors.

use std::fs;
use std::path::Path;

use grusslab_core::posmaps::{BuiltinMap, LinMap};
use grusslab_core::{Complex64, ComplexMatrix, ToleranceConfig};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Complex scalar as a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CPair(pub f64, pub f64);

impl From<CPair> for Complex64 {
    fn from(p: CPair) -> Self {
        Complex64::new(p.0, p.1)
    }
}

impl From<Complex64> for CPair {
    fn from(z: Complex64) -> Self {
        CPair(z.re, z.im)
    }
}

/// Schatten exponent that accepts a JSON number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Exponent(v)),
            Raw::Text(t) => {
                let lower = t.to_ascii_lowercase();
                if lower == "inf" || lower == "infinity" {
                    Ok(Exponent(f64::INFINITY))
                } else {
                    lower
                        .parse::<f64>()
                        .map(Exponent)
                        .map_err(|_| serde::de::Error::custom(format!("bad exponent {t:?}")))
                }
            }
        }
    }
}

/// Map file: `{"kind":"kraus","ops":[...]}`, `{"kind":"choi","in":n,"out":m,
/// "matrix":...}` or `{"kind":"builtin","name":...,"params":{...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapFile {
    Kraus {
        ops: Vec<ComplexMatrix>,
    },
    Choi {
        #[serde(rename = "in")]
        input: usize,
        #[serde(rename = "out")]
        output: usize,
        matrix: ComplexMatrix,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: serde_json::Value,
    },
}

fn param_usize(params: &serde_json::Value, key: &str) -> Result<usize, HarnessError> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| HarnessError::Schema(format!("builtin params missing integer {key:?}")))
}

impl MapFile {
    pub fn to_map(&self) -> Result<LinMap, HarnessError> {
        match self {
            MapFile::Kraus { ops } => {
                LinMap::kraus(ops.clone()).map_err(|e| HarnessError::Schema(e.to_string()))
            }
            MapFile::Choi { input, output, matrix } => Ok(LinMap::Choi {
                input_dim: *input,
                output_dim: *output,
                matrix: matrix.clone(),
            }),
            MapFile::Builtin { name, params } => match name.as_str() {
                "corner" => {
                    let row = param_usize(params, "row")?;
                    let col = param_usize(params, "col")?;
                    let dim = param_usize(params, "dim")?;
                    LinMap::corner(row, col, dim).map_err(|e| HarnessError::Schema(e.to_string()))
                }
                "transpose" => Ok(LinMap::transpose(param_usize(params, "dim")?)),
                "tomiyama" => {
                    let mu = params
                        .get("mu")
                        .and_then(|v| v.as_f64())
                        .ok_or_else(|| HarnessError::Schema("tomiyama needs \"mu\"".into()))?;
                    Ok(LinMap::tomiyama(mu, param_usize(params, "n").or_else(|_| param_usize(params, "dim"))?))
                }
                "trace_density" => {
                    let density = params
                        .get("density")
                        .cloned()
                        .ok_or_else(|| HarnessError::Schema("trace_density needs \"density\"".into()))?;
                    let density: ComplexMatrix = serde_json::from_value(density)?;
                    LinMap::trace_density(density).map_err(|e| HarnessError::Schema(e.to_string()))
                }
                "diag_expectation" => Ok(LinMap::diag_expectation(param_usize(params, "dim")?)),
                other => Err(HarnessError::Schema(format!("unknown builtin map {other:?}"))),
            },
        }
    }

    pub fn from_map(map: &LinMap) -> Self {
        match map {
            LinMap::Kraus { ops } => MapFile::Kraus { ops: ops.clone() },
            LinMap::Choi { input_dim, output_dim, matrix } => MapFile::Choi {
                input: *input_dim,
                output: *output_dim,
                matrix: matrix.clone(),
            },
            LinMap::Builtin(b) => {
                let (name, params) = match b {
                    BuiltinMap::Corner { row, col, dim } => {
                        ("corner", serde_json::json!({"row": row, "col": col, "dim": dim}))
                    }
                    BuiltinMap::Transpose { dim } => ("transpose", serde_json::json!({"dim": dim})),
                    BuiltinMap::Tomiyama { mu, dim } => {
                        ("tomiyama", serde_json::json!({"mu": mu, "n": dim}))
                    }
                    BuiltinMap::TraceDensity { density } => (
                        "trace_density",
                        serde_json::json!({"density": serde_json::to_value(density).expect("matrix json")}),
                    ),
                    BuiltinMap::DiagExpectation { dim } => {
                        ("diag_expectation", serde_json::json!({"dim": dim}))
                    }
                };
                MapFile::Builtin { name: name.to_string(), params }
            }
        }
    }
}

/// Map reference in a scenario: a path to a map file or an inline map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapRef {
    Inline(MapFile),
    Path(String),
}

impl MapRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<LinMap, HarnessError> {
        match self {
            MapRef::Inline(file) => file.to_map(),
            MapRef::Path(p) => {
                let path = match base {
                    Some(dir) if !Path::new(p).is_absolute() => dir.join(p),
                    _ => Path::new(p).to_path_buf(),
                };
                let text = fs::read_to_string(&path)?;
                let file: MapFile = serde_json::from_str(&text)?;
                file.to_map()
            }
        }
    }
}

/// Module projection `K`: a plain matrix or `{"rank_one_of": h}` for `h⊗h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProjectionSpec {
    RankOne { rank_one_of: ComplexMatrix },
    Matrix(ComplexMatrix),
}

impl ProjectionSpec {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, HarnessError> {
        match self {
            ProjectionSpec::Matrix(m) => Ok(m.clone()),
            ProjectionSpec::RankOne { rank_one_of } => {
                grusslab_core::cstar_module::rank_one(rank_one_of, rank_one_of)
                    .map_err(|e| HarnessError::Schema(e.to_string()))
            }
        }
    }
}

/// One serialized check: inequality id plus the inputs that id needs.
/// Replaying the same scenario bytes yields the identical report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub inequality: String,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapRef>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<ComplexMatrix>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<CPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<CPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<CPair>,
    #[serde(rename = "Gamma", skip_serializing_if = "Option::is_none")]
    pub gamma_cap: Option<CPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<CPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<CPair>,
    /// Assert k-positivity instead of certifying CP through the Choi matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assume_positive: Option<u32>,

    // Trace checks.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Exponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Exponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renormalize: Option<bool>,

    // Module checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<ComplexMatrix>,
    #[serde(rename = "uP", skip_serializing_if = "Option::is_none")]
    pub u_prime: Option<ComplexMatrix>,
    #[serde(rename = "vP", skip_serializing_if = "Option::is_none")]
    pub v_prime: Option<ComplexMatrix>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k_proj: Option<ProjectionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<ComplexMatrix>,
    /// Algebra-valued endpoints of the lifted-projection check.
    #[serde(rename = "a", skip_serializing_if = "Option::is_none")]
    pub a_low: Option<ComplexMatrix>,
    #[serde(rename = "aHigh", skip_serializing_if = "Option::is_none")]
    pub a_high: Option<ComplexMatrix>,
    #[serde(rename = "b", skip_serializing_if = "Option::is_none")]
    pub b_low: Option<ComplexMatrix>,
    #[serde(rename = "bHigh", skip_serializing_if = "Option::is_none")]
    pub b_high: Option<ComplexMatrix>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<ToleranceConfig>,
}

impl Scenario {
    pub fn new(inequality: impl Into<String>) -> Self {
        Scenario { inequality: inequality.into(), ..Scenario::default() }
    }

    pub fn tolerance(&self) -> ToleranceConfig {
        self.tol.unwrap_or_default()
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path)?;
        let scenario: Scenario = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Schema(format!("{}: {e}", path.display())))?;
        Ok(scenario)
    }
}

/// CSV projection of a report; JSON is the source of truth.
/// Columns: inequality_id, dim, margin, satisfied, tightness.
pub fn report_csv_row(report: &grusslab_core::InequalityReport, dim: usize) -> String {
    let tightness = report.tightness().map(|t| format!("{t}")).unwrap_or_default();
    format!(
        "{},{},{},{},{}",
        report.inequality_id, dim, report.margin, report.satisfied, tightness
    )
}

pub const REPORT_CSV_HEADER: &str = "inequality_id,dim,margin,satisfied,tightness";
