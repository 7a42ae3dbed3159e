//! Distance from an operator to the scalar multiples of the identity.
//!
//! `d(A) = inf_α ‖A − αI‖` is attained at some γ in the closed disk
//! `|α| ≤ 3‖A‖`; the map `α ↦ ‖A − αI‖` is convex and 1-Lipschitz. The
//! minimizer is located by a nested golden-section search over the real and
//! imaginary parts. Two independent routes cross-check it: the half-spread
//! formula for self-adjoint inputs and the minimum enclosing disk of the
//! spectrum for normal inputs.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::matcore::{hermitian_eigen, operator_norm, ComplexMatrix, MatError, ToleranceConfig};

/// A minimizer γ of `‖A − αI‖` together with the attained radius.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaResult {
    pub gamma: Complex64,
    /// `‖A − γI‖`, the distance to the scalars within `certified_gap`.
    pub radius: f64,
    /// Number of operator-norm evaluations spent.
    pub evaluations: u64,
    /// Bound on `radius − inf_α ‖A−αI‖` (0 when an exact oracle applies).
    pub certified_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CenterError {
    /// The search box failed to shrink below tolerance within the budget.
    NoConvergence { evaluations: u64 },
    EmptyInput,
    Mat(MatError),
}

impl fmt::Display for CenterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterError::NoConvergence { evaluations } => {
                write!(f, "scalar-center search did not converge after {evaluations} evaluations")
            }
            CenterError::EmptyInput => write!(f, "empty point list"),
            CenterError::Mat(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CenterError {}

impl From<MatError> for CenterError {
    fn from(e: MatError) -> Self {
        CenterError::Mat(e)
    }
}

const DEFAULT_EVAL_BUDGET: u64 = 500_000;
const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

struct BudgetedObjective<'a> {
    a: &'a ComplexMatrix,
    evaluations: u64,
    budget: u64,
    best_alpha: Complex64,
    best_value: f64,
}

impl<'a> BudgetedObjective<'a> {
    fn eval(&mut self, alpha: Complex64) -> Result<f64, CenterError> {
        if self.evaluations >= self.budget {
            return Err(CenterError::NoConvergence { evaluations: self.evaluations });
        }
        self.evaluations += 1;
        let v = operator_norm(&self.a.sub_scalar(alpha));
        if v < self.best_value {
            self.best_value = v;
            self.best_alpha = alpha;
        }
        Ok(v)
    }
}

/// Golden-section minimization of a unimodal slice; returns the midpoint of
/// the final bracket and its value.
fn golden_section(
    obj: &mut BudgetedObjective<'_>,
    mut eval_at: impl FnMut(&mut BudgetedObjective<'_>, f64) -> Result<f64, CenterError>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64), CenterError> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval_at(obj, x1)?;
    let mut f2 = eval_at(obj, x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval_at(obj, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval_at(obj, x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = eval_at(obj, mid)?;
    Ok((mid, fm))
}

/// `inf_α ‖A − αI‖` with the default evaluation budget.
pub fn distance_to_scalars(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<GammaResult, CenterError> {
    distance_to_scalars_with_budget(a, cfg, DEFAULT_EVAL_BUDGET)
}

/// `inf_α ‖A − αI‖` via nested golden-section over Re(α) and Im(α) inside
/// the disk `|α| ≤ 3‖A‖`. Terminates when both bracket widths drop below
/// `cfg.rel·max(1, ‖A‖)`; the radius is then within `certified_gap` of the
/// infimum because the objective is 1-Lipschitz.
pub fn distance_to_scalars_with_budget(
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
    budget: u64,
) -> Result<GammaResult, CenterError> {
    let n = a.require_square()?;
    if n == 1 {
        return Ok(GammaResult { gamma: a.get(0, 0), radius: 0.0, evaluations: 0, certified_gap: 0.0 });
    }
    let norm = operator_norm(a);
    if norm == 0.0 {
        return Ok(GammaResult {
            gamma: Complex64::new(0.0, 0.0),
            radius: 0.0,
            evaluations: 1,
            certified_gap: 0.0,
        });
    }
    let reach = 3.0 * norm;
    let tol = cfg.rel * norm.max(1.0);

    let mut obj = BudgetedObjective {
        a,
        evaluations: 1, // the norm evaluation above
        budget,
        best_alpha: Complex64::new(0.0, 0.0),
        best_value: norm, // f(0) = ‖A‖
    };

    // Inner slice: minimize over Im(α) at fixed Re(α).
    let inner = |obj: &mut BudgetedObjective<'_>, x: f64| -> Result<f64, CenterError> {
        let (_, fy) = golden_section(
            obj,
            |o: &mut BudgetedObjective<'_>, y: f64| o.eval(Complex64::new(x, y)),
            -reach,
            reach,
            tol,
        )?;
        Ok(fy)
    };
    golden_section(&mut obj, inner, -reach, reach, tol)?;

    Ok(GammaResult {
        gamma: obj.best_alpha,
        radius: obj.best_value,
        evaluations: obj.evaluations,
        certified_gap: 4.0 * tol,
    })
}

/// Exact center for self-adjoint inputs: γ is the spectral midpoint and the
/// radius is the half-spread.
pub fn selfadjoint_center(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<GammaResult, CenterError> {
    let eig = hermitian_eigen(a, cfg)?;
    let lo = eig.min_eigenvalue();
    let hi = eig.max_eigenvalue();
    Ok(GammaResult {
        gamma: Complex64::new(0.5 * (lo + hi), 0.0),
        radius: 0.5 * (hi - lo),
        evaluations: 1,
        certified_gap: 0.0,
    })
}

/// Closed disk in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    fn invalid() -> Self {
        Disk { center: Complex64::new(0.0, 0.0), radius: -1.0 }
    }

    pub fn contains(&self, p: Complex64) -> bool {
        if self.radius < 0.0 {
            return false;
        }
        let slack = 1e-12 * self.radius.max(1.0);
        (p - self.center).norm() <= self.radius + slack
    }
}

fn disk_from_diameter(a: Complex64, b: Complex64) -> Disk {
    let center = (a + b) * Complex64::new(0.5, 0.0);
    let radius = (a - center).norm().max((b - center).norm());
    Disk { center, radius }
}

fn circumdisk(a: Complex64, b: Complex64, c: Complex64) -> Disk {
    // Relocate near the origin for conditioning.
    let ox = (a.re.min(b.re).min(c.re) + a.re.max(b.re).max(c.re)) / 2.0;
    let oy = (a.im.min(b.im).min(c.im) + a.im.max(b.im).max(c.im)) / 2.0;
    let (ax, ay) = (a.re - ox, a.im - oy);
    let (bx, by) = (b.re - ox, b.im - oy);
    let (cx, cy) = (c.re - ox, c.im - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        return Disk::invalid();
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Complex64::new(ox + x, oy + y);
    let radius = (a - center).norm().max((b - center).norm()).max((c - center).norm());
    Disk { center, radius }
}

fn disk_two_boundary(points: &[Complex64], p: Complex64, q: Complex64) -> Disk {
    let base = disk_from_diameter(p, q);
    let mut left = Disk::invalid();
    let mut right = Disk::invalid();
    let pq = q - p;
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    for &r in points {
        if base.contains(r) {
            continue;
        }
        let side = cross(pq, r - p);
        let disk = circumdisk(p, q, r);
        if disk.radius < 0.0 {
            continue;
        }
        let c = cross(pq, disk.center - p);
        if side > 0.0 && (left.radius < 0.0 || c > cross(pq, left.center - p)) {
            left = disk;
        } else if side < 0.0 && (right.radius < 0.0 || c < cross(pq, right.center - p)) {
            right = disk;
        }
    }
    match (left.radius >= 0.0, right.radius >= 0.0) {
        (false, false) => base,
        (true, false) => left,
        (false, true) => right,
        (true, true) => {
            if left.radius <= right.radius {
                left
            } else {
                right
            }
        }
    }
}

fn disk_one_boundary(points: &[Complex64], p: Complex64) -> Disk {
    let mut disk = Disk { center: p, radius: 0.0 };
    for (i, &q) in points.iter().enumerate() {
        if !disk.contains(q) {
            disk = if disk.radius == 0.0 {
                disk_from_diameter(p, q)
            } else {
                disk_two_boundary(&points[..=i], p, q)
            };
        }
    }
    disk
}

/// Minimum enclosing disk of a finite point set (Welzl's move-to-front
/// scheme, deterministic: no shuffle). For a normal matrix, the distance to
/// the scalars equals the radius of the minimum enclosing disk of the
/// spectrum, which makes this an independent oracle for
/// [`distance_to_scalars`].
pub fn enclosing_disk_oracle(points: &[Complex64]) -> Result<Disk, CenterError> {
    if points.is_empty() {
        return Err(CenterError::EmptyInput);
    }
    let mut disk = Disk { center: points[0], radius: 0.0 };
    for (i, &p) in points.iter().enumerate().skip(1) {
        if !disk.contains(p) {
            disk = disk_one_boundary(&points[..=i], p);
        }
    }
    Ok(disk)
}

/// Brute-force minimum enclosing disk over point pairs and triples. Test
/// oracle for [`enclosing_disk_oracle`]; exponential-ish and only meant for
/// small inputs.
pub fn enclosing_disk_bruteforce(points: &[Complex64]) -> Result<Disk, CenterError> {
    if points.is_empty() {
        return Err(CenterError::EmptyInput);
    }
    let covers = |d: &Disk| points.iter().all(|&p| d.contains(p));
    let mut best: Option<Disk> = None;
    let mut consider = |d: Disk| {
        if d.radius >= 0.0 && covers(&d) && best.is_none_or(|b| d.radius < b.radius) {
            best = Some(d);
        }
    };
    if points.len() == 1 {
        return Ok(Disk { center: points[0], radius: 0.0 });
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            consider(disk_from_diameter(points[i], points[j]));
            for k in j + 1..points.len() {
                consider(circumdisk(points[i], points[j], points[k]));
            }
        }
    }
    best.ok_or(CenterError::EmptyInput)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ComplexMatrix;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn paper_example_matrices() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let r = distance_to_scalars(&a, &cfg()).unwrap();
        assert!((r.gamma - c(2.5, 0.0)).norm() < 1e-6, "gamma {}", r.gamma);
        assert!((r.radius - 2.5).abs() < 1e-8, "radius {}", r.radius);
        assert!((r.radius * r.radius - 6.25).abs() < 1e-7);

        let b = ComplexMatrix::diag(&[1.0, 4.0]);
        let rb = distance_to_scalars(&b, &cfg()).unwrap();
        assert!((rb.gamma - c(2.5, 0.0)).norm() < 1e-6);
        assert!((rb.radius - 1.5).abs() < 1e-8);
    }

    #[test]
    fn scalar_matrix_has_zero_radius() {
        let m = ComplexMatrix::identity(3).scale_re(5.0);
        let r = distance_to_scalars(&m, &cfg()).unwrap();
        assert!((r.gamma - c(5.0, 0.0)).norm() < 1e-7);
        assert!(r.radius < 1e-8);

        let one = ComplexMatrix::new(1, 1, alloc::vec![c(2.0, -3.0)]).unwrap();
        let r1 = distance_to_scalars(&one, &cfg()).unwrap();
        assert_eq!(r1.gamma, c(2.0, -3.0));
        assert_eq!(r1.radius, 0.0);
    }

    #[test]
    fn nilpotent_matches_grid_search() {
        let m = ComplexMatrix::from_real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let r = distance_to_scalars(&m, &cfg()).unwrap();
        // Two-level grid refinement oracle on f(α) = σ_max(A − αI).
        let norm = operator_norm(&m);
        let f = |alpha: Complex64| operator_norm(&m.sub_scalar(alpha));
        let mut best = (c(0.0, 0.0), f(c(0.0, 0.0)));
        let mut lo = (-3.0 * norm, -3.0 * norm);
        let mut span = 6.0 * norm;
        for _level in 0..2 {
            let steps = 60;
            for i in 0..=steps {
                for j in 0..=steps {
                    let alpha = c(
                        lo.0 + span * i as f64 / steps as f64,
                        lo.1 + span * j as f64 / steps as f64,
                    );
                    let v = f(alpha);
                    if v < best.1 {
                        best = (alpha, v);
                    }
                }
            }
            span = 4.0 * span / 60.0;
            lo = (best.0.re - span / 2.0, best.0.im - span / 2.0);
        }
        assert!((r.radius - best.1).abs() < 1e-6, "opt {} grid {}", r.radius, best.1);
    }

    #[test]
    fn selfadjoint_center_examples() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let r = selfadjoint_center(&a, &cfg()).unwrap();
        assert!((r.gamma - c(2.5, 0.0)).norm() < 1e-12);
        assert!((r.radius - 2.5).abs() < 1e-12);
        assert_eq!(r.certified_gap, 0.0);

        let i = ComplexMatrix::identity(4);
        let ri = selfadjoint_center(&i, &cfg()).unwrap();
        assert!((ri.gamma - c(1.0, 0.0)).norm() < 1e-14);
        assert!(ri.radius.abs() < 1e-14);

        let m = ComplexMatrix::from_real(&[&[3.0, 0.5], &[0.5, 2.0]]);
        let rm = selfadjoint_center(&m, &cfg()).unwrap();
        assert!((rm.radius - 2.0f64.sqrt() / 2.0).abs() < 1e-12);

        let skew = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(matches!(selfadjoint_center(&skew, &cfg()), Err(CenterError::Mat(MatError::NotHermitian { .. }))));
    }

    #[test]
    fn disk_oracle_examples() {
        let d = enclosing_disk_oracle(&[c(0.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((d.center - c(2.5, 0.0)).norm() < 1e-12);
        assert!((d.radius - 2.5).abs() < 1e-12);

        let d4 = enclosing_disk_oracle(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(d4.center.norm() < 1e-12);
        assert!((d4.radius - 1.0).abs() < 1e-12);

        assert!(matches!(enclosing_disk_oracle(&[]), Err(CenterError::EmptyInput)));
    }

    #[test]
    fn disk_oracle_matches_bruteforce_on_random_clouds() {
        let mut rng = SplitMix64::new(31337);
        for trial in 0..20 {
            let n = 3 + (trial % 12);
            let pts: Vec<Complex64> =
                (0..n).map(|_| c(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))).collect();
            let fast = enclosing_disk_oracle(&pts).unwrap();
            let brute = enclosing_disk_bruteforce(&pts).unwrap();
            assert!((fast.radius - brute.radius).abs() < 1e-9, "trial {trial}");
            assert!(pts.iter().all(|&p| fast.contains(p)));
        }
    }

    #[test]
    fn fifty_point_cloud() {
        let mut rng = SplitMix64::new(99);
        let pts: Vec<Complex64> =
            (0..50).map(|_| c(rng.gaussian(), rng.gaussian())).collect();
        let fast = enclosing_disk_oracle(&pts).unwrap();
        let brute = enclosing_disk_bruteforce(&pts).unwrap();
        assert!((fast.radius - brute.radius).abs() < 1e-9);
    }

    fn random_matrix(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| rng.gaussian_c64())
    }

    fn random_hermitian(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitian_part()
    }

    #[test]
    fn gamma_membership_certificate() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 3);
            let r = distance_to_scalars(&a, &cfg()).unwrap();
            let attained = operator_norm(&a.sub_scalar(r.gamma));
            assert!((attained - r.radius).abs() <= 1e-9 * r.radius.max(1.0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn convexity_probe(seed in 0u64..1000) {
            let mut rng = SplitMix64::new(seed);
            let a = random_matrix(&mut rng, 3);
            let f = |alpha: Complex64| operator_norm(&a.sub_scalar(alpha));
            let a1 = rng.gaussian_c64();
            let a2 = rng.gaussian_c64();
            let mid = (a1 + a2) * c(0.5, 0.0);
            prop_assert!(f(mid) <= (f(a1) + f(a2)) / 2.0 + 1e-12);
        }

        #[test]
        fn translation_equivariance(seed in 0u64..300) {
            let mut rng = SplitMix64::new(seed.wrapping_add(77));
            let a = random_matrix(&mut rng, 3);
            let shift = rng.gaussian_c64();
            let base = distance_to_scalars(&a, &cfg()).unwrap();
            let mut shifted_m = a.clone();
            for i in 0..3 {
                shifted_m.set(i, i, shifted_m.get(i, i) + shift);
            }
            let shifted = distance_to_scalars(&shifted_m, &cfg()).unwrap();
            prop_assert!((shifted.radius - base.radius).abs() < 1e-8 * base.radius.max(1.0));
            prop_assert!((shifted.gamma - (base.gamma + shift)).norm() < 1e-4 * base.radius.max(1.0));
        }

        #[test]
        fn selfadjoint_agreement(seed in 0u64..200) {
            let mut rng = SplitMix64::new(seed.wrapping_mul(13).wrapping_add(1));
            let a = random_hermitian(&mut rng, 4);
            let opt = distance_to_scalars(&a, &cfg()).unwrap();
            let exact = selfadjoint_center(&a, &cfg()).unwrap();
            prop_assert!((opt.radius - exact.radius).abs() < 1e-7 * exact.radius.max(1.0));
        }

        #[test]
        fn normal_matrix_agreement(seed in 0u64..200) {
            let mut rng = SplitMix64::new(seed.wrapping_mul(31).wrapping_add(2));
            // Unitary conjugation of a complex diagonal: eigenvalues known.
            let n = 3;
            let diag: Vec<Complex64> = (0..n).map(|_| rng.gaussian_c64()).collect();
            let h = random_hermitian(&mut rng, n);
            let u = crate::matcore::hermitian_eigen(&h, &cfg()).unwrap().eigenvectors;
            let mut d = ComplexMatrix::zeros(n, n);
            for (i, &z) in diag.iter().enumerate() {
                d.set(i, i, z);
            }
            let a = u.mul(&d).mul(&u.adjoint());
            let opt = distance_to_scalars(&a, &cfg()).unwrap();
            let disk = enclosing_disk_oracle(&diag).unwrap();
            prop_assert!((opt.radius - disk.radius).abs() < 1e-6 * disk.radius.max(1.0),
                "optimizer {} vs disk {}", opt.radius, disk.radius);
        }
    }
}
