//! Deterministic instance generators for the fuzz engine and the CLI.
//!
//! Everything is a pure function of a `SplitMix64` stream, so a scenario is
//! reproducible from `(master_seed, trial_index)` alone. Grüss instances are
//! constructed *admissible*: normal inputs carry their spectrum by
//! construction, which gives exact scalar-center parameters (the minimum
//! enclosing disk of the eigenvalues) without running the optimizer, and
//! accretive disks are inflated enough to survive round-off.

use std::fmt;
use std::str::FromStr;

use grusslab_core::ncps::{schatten_p_norm, NCProbSpace};
use grusslab_core::posmaps::LinMap;
use grusslab_core::rng::SplitMix64;
use grusslab_core::scalar_center::enclosing_disk_oracle;
use grusslab_core::{Complex64, ComplexMatrix, ToleranceConfig};
use serde::{Deserialize, Serialize};

use crate::formats::{CPair, Exponent, MapFile, MapRef, ProjectionSpec, Scenario};
use crate::HarnessError;

pub fn gen_general(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| rng.gaussian_c64())
}

/// Exactly Hermitian by construction.
pub fn gen_hermitian(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    gen_general(rng, n).hermitian_part()
}

pub fn gen_psd(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    gen_general(rng, n).gram()
}

/// PSD with normalized trace exactly 1 (up to one division).
pub fn gen_density(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    let p = gen_psd(rng, n);
    let tau = p.trace().re / n as f64;
    p.scale_re(1.0 / tau)
}

/// Unitary via two passes of modified Gram-Schmidt on a Gaussian matrix.
pub fn gen_unitary(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    let g = gen_general(rng, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
    for _pass in 0..2 {
        for j in 0..n {
            for i in 0..j {
                let proj: Complex64 =
                    (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                let prior = cols[i].clone();
                for (cj, ci) in cols[j].iter_mut().zip(&prior) {
                    *cj -= proj * ci;
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for cj in cols[j].iter_mut() {
                *cj /= norm;
            }
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Partial isometry (`h h* h = h`) from the polar factor of a Gaussian
/// rectangle.
pub fn gen_partial_isometry(rng: &mut SplitMix64, m: usize, k: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(m, k, |_, _| rng.gaussian_c64());
    let eig = grusslab_core::matcore::hermitian_eigen(&g.gram(), &ToleranceConfig::default())
        .expect("gram matrix is Hermitian");
    let inv_sqrt = eig.apply_spectral(|l| if l > 1e-12 { 1.0 / l.sqrt() } else { 0.0 });
    g.mul(&inv_sqrt)
}

/// Normal matrix with known spectrum: a unitary conjugation of a diagonal.
/// Returns the matrix together with its eigenvalues.
pub fn gen_normal(rng: &mut SplitMix64, n: usize, real_spectrum: bool) -> (ComplexMatrix, Vec<Complex64>) {
    let eigs: Vec<Complex64> = (0..n)
        .map(|_| {
            if real_spectrum {
                Complex64::new(rng.gaussian() * 1.5, 0.0)
            } else {
                rng.gaussian_c64()
            }
        })
        .collect();
    let u = gen_unitary(rng, n);
    let mut d = ComplexMatrix::zeros(n, n);
    for (i, &z) in eigs.iter().enumerate() {
        d.set(i, i, z);
    }
    let a = u.mul(&d).mul(&u.adjoint());
    (a, eigs)
}

/// Unital completely positive map as a normalized Kraus family.
pub fn gen_unital_cp(rng: &mut SplitMix64, n: usize, ops: usize) -> LinMap {
    let ks: Vec<ComplexMatrix> = (0..ops).map(|_| gen_general(rng, n)).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for k in &ks {
        s = s.add(&k.mul(&k.adjoint()));
    }
    let eig = grusslab_core::matcore::hermitian_eigen(&s, &ToleranceConfig::default())
        .expect("Kraus sum is Hermitian");
    let si = eig.apply_spectral(|l| 1.0 / l.sqrt());
    LinMap::kraus(ks.into_iter().map(|k| si.mul(&k)).collect()).expect("non-empty family")
}

/// `c · (unital CP)` for a positive scale `c`: completely positive with
/// `Φ(I) = c·I` invertible but not the identity.
pub fn gen_scaled_cp(rng: &mut SplitMix64, n: usize, ops: usize) -> LinMap {
    let base = gen_unital_cp(rng, n, ops);
    let c = rng.uniform(0.3, 3.0);
    match base {
        LinMap::Kraus { ops } => {
            LinMap::kraus(ops.into_iter().map(|k| k.scale_re(c.sqrt())).collect()).expect("non-empty")
        }
        _ => unreachable!(),
    }
}

/// Families of maps the fuzz engine can draw from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapFamily {
    CpKraus,
    ScaledCp,
    Builtin(String),
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFamily::CpKraus => write!(f, "cp_kraus"),
            MapFamily::ScaledCp => write!(f, "scaled_cp"),
            MapFamily::Builtin(name) => write!(f, "builtin:{name}"),
        }
    }
}

impl FromStr for MapFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cp_kraus" => Ok(MapFamily::CpKraus),
            "scaled_cp" => Ok(MapFamily::ScaledCp),
            other => match other.strip_prefix("builtin:") {
                Some(name) if !name.is_empty() => Ok(MapFamily::Builtin(name.to_string())),
                _ => Err(format!("unknown map family {s:?} (cp_kraus | scaled_cp | builtin:<name>)")),
            },
        }
    }
}

fn gen_map(rng: &mut SplitMix64, family: &MapFamily, dim: usize) -> Result<LinMap, HarnessError> {
    let ops = 1 + rng.next_usize(4);
    match family {
        MapFamily::CpKraus => Ok(gen_unital_cp(rng, dim, ops)),
        MapFamily::ScaledCp => Ok(gen_scaled_cp(rng, dim, ops)),
        MapFamily::Builtin(name) => match name.as_str() {
            "transpose" => Ok(LinMap::transpose(dim)),
            "corner" => LinMap::corner(0, 0, dim).map_err(|e| HarnessError::Schema(e.to_string())),
            "tomiyama" => Ok(LinMap::tomiyama(2.0, dim)),
            "diag_expectation" => Ok(LinMap::diag_expectation(dim)),
            "trace_density" => LinMap::trace_density(gen_density(rng, dim))
                .map_err(|e| HarnessError::Schema(e.to_string())),
            other => Err(HarnessError::Schema(format!("unknown builtin map {other:?}"))),
        },
    }
}

/// Builtin maps are studied as counterexample families (transpose, tomiyama
/// are not CP), so their scenarios carry an explicit positivity assumption.
fn family_assumption(family: &MapFamily) -> Option<u32> {
    match family {
        MapFamily::Builtin(_) => Some(1),
        _ => None,
    }
}

/// Normal input with its exact scalar-center disk.
fn normal_with_disk(rng: &mut SplitMix64, n: usize) -> (ComplexMatrix, Complex64, f64) {
    let real_spectrum = rng.next_f64() < 0.5;
    let (a, eigs) = gen_normal(rng, n, real_spectrum);
    let disk = enclosing_disk_oracle(&eigs).expect("non-empty spectrum");
    (a, disk.center, disk.radius)
}

/// Accretive disk endpoints `mid ∓ s·e^{iθ}` with `s` inflated past the
/// radius so `C_{α,β}(A)` stays accretive under round-off.
fn accretive_endpoints(rng: &mut SplitMix64, center: Complex64, radius: f64) -> (Complex64, Complex64) {
    let theta = rng.uniform(0.0, std::f64::consts::TAU);
    let s = radius * (1.0 + 1e-7) + 1e-9;
    let dir = Complex64::from_polar(s, theta);
    (center - dir, center + dir)
}

/// Output of the unified generator entry point.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Matrix(ComplexMatrix),
    Map(MapFile),
    Scenario(Box<Scenario>),
}

/// One deterministic instance of the named kind: `hermitian`, `psd`,
/// `density`, `unitary`, `partial_isometry`, `general`, `cp_map`,
/// `module_instance` or `gruss_instance`. Unknown kinds are schema errors.
pub fn generate(kind: &str, seed: u64, dims: &[usize]) -> Result<Generated, HarnessError> {
    let mut rng = SplitMix64::new(seed);
    if dims.is_empty() {
        return Err(HarnessError::Schema("dims must be non-empty".into()));
    }
    let n = dims[0].max(1);
    match kind {
        "hermitian" => Ok(Generated::Matrix(gen_hermitian(&mut rng, n))),
        "psd" => Ok(Generated::Matrix(gen_psd(&mut rng, n))),
        "density" => Ok(Generated::Matrix(gen_density(&mut rng, n))),
        "unitary" => Ok(Generated::Matrix(gen_unitary(&mut rng, n))),
        "partial_isometry" => {
            let k = dims.get(1).copied().unwrap_or(1).clamp(1, n);
            Ok(Generated::Matrix(gen_partial_isometry(&mut rng, n, k)))
        }
        "general" => Ok(Generated::Matrix(gen_general(&mut rng, n))),
        "cp_map" => {
            let ops = 1 + rng.next_usize(4);
            Ok(Generated::Map(MapFile::from_map(&gen_unital_cp(&mut rng, n, ops))))
        }
        "module_instance" => {
            let s = scenario_for("module.gruss", &MapFamily::CpKraus, dims, &mut rng, ToleranceConfig::default())?;
            Ok(Generated::Scenario(Box::new(s)))
        }
        "gruss_instance" => {
            let s = scenario_for("covariance", &MapFamily::CpKraus, dims, &mut rng, ToleranceConfig::default())?;
            Ok(Generated::Scenario(Box::new(s)))
        }
        other => Err(HarnessError::Schema(format!("unknown generator kind {other:?}"))),
    }
}

/// Builds one admissible scenario for the given inequality id.
///
/// The trial's dimension is drawn from `dims`; map-based ids draw a map from
/// `family`. Deterministic in the `rng` stream.
pub fn scenario_for(
    id: &str,
    family: &MapFamily,
    dims: &[usize],
    rng: &mut SplitMix64,
    tol: ToleranceConfig,
) -> Result<Scenario, HarnessError> {
    if dims.is_empty() {
        return Err(HarnessError::Schema("dims must be non-empty".into()));
    }
    let dim = dims[rng.next_usize(dims.len())].max(1);
    let mut scenario = Scenario::new(id);
    scenario.tol = Some(tol);

    match id {
        "variance" | "variance.chain" | "variance.nonunital" => {
            let map = gen_map(rng, family, dim)?;
            let (a, center, _) = normal_with_disk(rng, dim);
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(a);
            scenario.alpha = Some(center.into());
            scenario.assume_positive = family_assumption(family);
        }
        "covariance.block" => {
            let map = gen_map(rng, family, dim)?;
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(gen_general(rng, dim));
            scenario.b = Some(gen_general(rng, dim));
            scenario.assume_positive = family_assumption(family);
        }
        "covariance" | "covariance.raw" | "covariance.nonunital" => {
            let map = gen_map(rng, family, dim)?;
            let (a, ca, _) = normal_with_disk(rng, dim);
            let (b, cb, _) = normal_with_disk(rng, dim);
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(a);
            scenario.b = Some(b);
            scenario.alpha = Some(ca.into());
            scenario.beta = Some(cb.into());
            scenario.assume_positive = family_assumption(family);
        }
        "covariance.norm" => {
            let map = gen_map(rng, family, dim)?;
            let (a, _, _) = normal_with_disk(rng, dim);
            let (b, _, _) = normal_with_disk(rng, dim);
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(a);
            scenario.b = Some(b);
            scenario.assume_positive = family_assumption(family);
        }
        "variance.accretive" => {
            let map = gen_map(rng, family, dim)?;
            let (a, center, radius) = normal_with_disk(rng, dim);
            let (alpha, beta) = accretive_endpoints(rng, center, radius);
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(a);
            scenario.alpha = Some(alpha.into());
            scenario.beta = Some(beta.into());
            scenario.assume_positive = family_assumption(family);
        }
        "covariance.accretive" => {
            let map = gen_map(rng, family, dim)?;
            let (a, ca, ra) = normal_with_disk(rng, dim);
            let (b, cb, rb) = normal_with_disk(rng, dim);
            // First hypothesis lives on A*: conjugate disk.
            let (alpha, beta) = accretive_endpoints(rng, ca.conj(), ra);
            let (gamma, gamma_cap) = accretive_endpoints(rng, cb, rb);
            scenario.map = Some(MapRef::Inline(MapFile::from_map(&map)));
            scenario.a = Some(a);
            scenario.b = Some(b);
            scenario.alpha = Some(alpha.into());
            scenario.beta = Some(beta.into());
            scenario.gamma = Some(gamma.into());
            scenario.gamma_cap = Some(gamma_cap.into());
            scenario.assume_positive = family_assumption(family);
        }
        "trace.v1" | "trace.v2" | "trace.v3" | "trace.pq" => {
            let (a, ca, _) = normal_with_disk(rng, dim);
            let (b, cb, _) = normal_with_disk(rng, dim);
            scenario.t = Some(gen_density(rng, dim));
            scenario.a = Some(a);
            scenario.b = Some(b);
            scenario.alpha = Some(ca.into());
            scenario.beta = Some(cb.into());
            if id == "trace.pq" {
                let pq_grid = [4.0, 6.0, f64::INFINITY];
                let r_grid = [2.0, 4.0, f64::INFINITY];
                scenario.p = Some(Exponent(pq_grid[rng.next_usize(3)]));
                scenario.q = Some(Exponent(pq_grid[rng.next_usize(3)]));
                scenario.r = Some(Exponent(r_grid[rng.next_usize(3)]));
            }
        }
        "trace.accretive" => {
            // Disks witnessing only the literal hypothesis Re τ(C) ≥ 0: the
            // half-width starts at the 2-norm deviation (the exact accretivity
            // threshold), not the operator-norm radius, so the reported
            // margins probe the corollary rather than the coarser v3 bound.
            let space = NCProbSpace::new(dim);
            let (a, ca, ra) = normal_with_disk(rng, dim);
            let (b, cb, rb) = normal_with_disk(rng, dim);
            let disk = |m: &ComplexMatrix, center: Complex64, radius: f64, rng: &mut SplitMix64| {
                let drift = Complex64::new(rng.gaussian(), rng.gaussian()) * 0.2 * radius;
                let mid = center + drift;
                let two_norm = schatten_p_norm(&space, &m.sub_scalar(mid), 2.0)
                    .expect("2-norm of a square matrix");
                let s = two_norm * (1.0 + rng.uniform(1e-9, 0.3)) + 1e-12;
                let theta = rng.uniform(0.0, std::f64::consts::TAU);
                let dir = Complex64::from_polar(s, theta);
                (mid - dir, mid + dir)
            };
            let (alpha, beta) = disk(&a, ca, ra, rng);
            let (zeta, xi) = disk(&b, cb, rb, rng);
            scenario.t = Some(gen_density(rng, dim));
            scenario.a = Some(a);
            scenario.b = Some(b);
            scenario.alpha = Some(alpha.into());
            scenario.beta = Some(beta.into());
            scenario.zeta = Some(zeta.into());
            scenario.xi = Some(xi.into());
        }
        "module.variance" | "module.gruss" => {
            let m = dim.max(2);
            let rank = 1 + rng.next_usize(m - 1);
            let h0 = gen_partial_isometry(rng, m, rank);
            let k_proj = h0.mul(&h0.adjoint());
            let kk = 1 + rng.next_usize(3.min(m));
            let admissible = |rng: &mut SplitMix64| {
                let w = k_proj.mul(&ComplexMatrix::from_fn(m, kk, |_, _| rng.gaussian_c64()));
                let d = ComplexMatrix::from_fn(m, kk, |_, _| rng.gaussian_c64());
                let s = Complex64::from_polar(
                    rng.uniform(0.0, 0.9),
                    rng.uniform(0.0, std::f64::consts::TAU),
                );
                (w.add(&d.scale(s)), w.sub(&d), w.add(&d))
            };
            let (x, u, v) = admissible(rng);
            // Exercise both projection encodings.
            scenario.k_proj = Some(if rng.next_f64() < 0.5 {
                ProjectionSpec::RankOne { rank_one_of: h0 }
            } else {
                ProjectionSpec::Matrix(k_proj.clone())
            });
            scenario.x = Some(x);
            scenario.u = Some(u);
            scenario.v = Some(v);
            if id == "module.gruss" {
                let (y, up, vp) = admissible(rng);
                scenario.y = Some(y);
                scenario.u_prime = Some(up);
                scenario.v_prime = Some(vp);
            }
        }
        "module.lifted" => {
            let m = dim.max(2);
            let kk = 1 + rng.next_usize(3.min(m));
            let h = gen_partial_isometry(rng, m, kk);
            let a_low = ComplexMatrix::from_fn(kk, kk, |_, _| rng.gaussian_c64());
            let spread_a = ComplexMatrix::from_fn(kk, kk, |_, _| rng.gaussian_c64());
            let b_low = ComplexMatrix::from_fn(kk, kk, |_, _| rng.gaussian_c64());
            let spread_b = ComplexMatrix::from_fn(kk, kk, |_, _| rng.gaussian_c64());
            let t_a = Complex64::new(rng.uniform(0.05, 0.95), 0.0);
            let t_b = Complex64::new(rng.uniform(0.05, 0.95), 0.0);
            scenario.x = Some(h.mul(&a_low.add(&spread_a.scale(t_a))));
            scenario.y = Some(h.mul(&b_low.add(&spread_b.scale(t_b))));
            scenario.h = Some(h);
            scenario.a_low = Some(a_low.clone());
            scenario.a_high = Some(a_low.add(&spread_a));
            scenario.b_low = Some(b_low.clone());
            scenario.b_high = Some(b_low.add(&spread_b));
        }
        "hilbert.gruss" => {
            let m = dim.max(2);
            let e_raw = ComplexMatrix::from_fn(m, 1, |_, _| rng.gaussian_c64());
            let e = e_raw.scale_re(1.0 / grusslab_core::matcore::operator_norm(&e_raw));
            let alpha = rng.gaussian_c64();
            let beta = rng.gaussian_c64();
            let gamma = rng.gaussian_c64();
            let gamma_cap = rng.gaussian_c64();
            let place = |lo: Complex64, hi: Complex64, rng: &mut SplitMix64| {
                let mid = (lo + hi) * Complex64::new(0.5, 0.0);
                let w_raw = ComplexMatrix::from_fn(m, 1, |_, _| rng.gaussian_c64());
                let w = w_raw.scale_re(1.0 / grusslab_core::matcore::operator_norm(&w_raw));
                let rho = 0.45 * (hi - lo).norm() * rng.uniform(0.0, 0.95);
                e.scale(mid).add(&w.scale_re(rho))
            };
            scenario.x = Some(place(alpha, beta, rng));
            scenario.y = Some(place(gamma, gamma_cap, rng));
            scenario.e = Some(e);
            scenario.alpha = Some(alpha.into());
            scenario.beta = Some(beta.into());
            scenario.gamma = Some(gamma.into());
            scenario.gamma_cap = Some(gamma_cap.into());
        }
        "module.accretive" => {
            let m = dim.max(2);
            let kk = 1 + rng.next_usize(3.min(m));
            let t = gen_hermitian(rng, m);
            let eig = grusslab_core::matcore::hermitian_eigen(&t, &ToleranceConfig::default())
                .expect("Hermitian by construction");
            let pad = 1e-9 + rng.uniform(0.0, 0.5);
            scenario.t = Some(t);
            scenario.h = Some(gen_partial_isometry(rng, m, kk));
            scenario.alpha = Some(CPair(eig.min_eigenvalue() - pad, 0.0));
            scenario.beta = Some(CPair(eig.max_eigenvalue() + pad, 0.0));
        }
        other => {
            return Err(HarnessError::Schema(format!("no generator for inequality id {other:?}")));
        }
    }
    Ok(scenario)
}
