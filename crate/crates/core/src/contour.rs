//! Numerical check of the closed contour made of the imaginary axis (with a
//! small detour around the pole at `-i w`) and a large half circle in the
//! right half-plane.
//!
//! The integrand is `H(s, w) = F(s) / (s + i w)` with `F` a Laplace transform
//! analytic on the closed right half-plane. Segments, in path order:
//!
//! 1. lower line `s = i y`, `y` from `-R` to `-w - eps`;
//! 2. small arc `s = -i w + eps e^{i phi}`, `phi` from `-pi/2` to `pi/2`
//!    (counterclockwise, bulging into the right half-plane);
//! 3. upper line `y` from `-w + eps` to `R`;
//! 4. large arc `s = R e^{i theta}`, `theta` from `pi/2` down to `-pi/2`.
//!
//! No pole lies inside the path, so the four pieces sum to zero.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    graded_toward_end, graded_toward_start, integrate_piecewise, uniform_points, Estimate,
    QuadratureConfig,
};

/// Ratio between consecutive graded breakpoints next to the excised pole and
/// next to the ends of the large arc.
const GRADING: f64 = 2.0;
/// Smallest angular piece at `theta = +-pi/2`.
const ARC_END_WIDTH: f64 = 1e-6;

/// Geometry of the closed contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub omega: f64,
    pub radius_r: f64,
    pub epsilon: f64,
}

impl ContourSpec {
    /// Checks `R > eps > 0` and that the detour around the pole, including a
    /// clearance of one more `eps`, stays inside the large arc.
    pub fn new(omega: f64, radius_r: f64, epsilon: f64) -> Result<Self> {
        let spec = Self {
            omega,
            radius_r,
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            omega,
            radius_r,
            epsilon,
        } = *self;
        if !(omega.is_finite() && radius_r.is_finite() && epsilon.is_finite()) {
            return Err(Error::NonFinite(format!("contour ({omega}, {radius_r}, {epsilon})")));
        }
        if !(radius_r > epsilon && epsilon > 0.0) {
            return Err(Error::Geometry(format!(
                "need R > eps > 0, got R = {radius_r}, eps = {epsilon}"
            )));
        }
        if omega.abs() + 2.0 * epsilon >= radius_r {
            return Err(Error::Geometry(format!(
                "pole detour |w| + 2 eps = {} is not clear of R = {radius_r}",
                omega.abs() + 2.0 * epsilon
            )));
        }
        Ok(())
    }
}

/// The four segment integrals and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourBreakdown {
    pub segment_lower: Complex64,
    pub segment_upper: Complex64,
    pub small_arc: Complex64,
    pub large_arc: Complex64,
    pub total: Complex64,
    /// Summed quadrature error estimates plus a rounding allowance for the
    /// cancellation between segments.
    pub error_budget: f64,
}

impl ContourBreakdown {
    /// Whether `|total|` is within ten times the error budget.
    pub fn closes(&self) -> bool {
        self.total.norm() <= 10.0 * self.error_budget
    }
}

/// `F(s) / (s + i w)`.
pub fn integrand_h<F>(laplace: F, s: Complex64, omega: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let denom = s + Complex64::new(0.0, omega);
    if denom == Complex64::default() {
        return Err(Error::AtPole(omega));
    }
    Ok(laplace(s) / denom)
}

fn merge(mut a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    a.extend(b);
    a.sort_by(f64::total_cmp);
    a.dedup();
    a
}

fn split(cfg: &QuadratureConfig, pieces: usize) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol / pieces.max(1) as f64,
        ..*cfg
    }
}

fn lower_line<F>(laplace: &F, spec: &ContourSpec, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let end = -spec.omega - spec.epsilon;
    let pts = merge(
        graded_toward_end(-spec.radius_r, end, GRADING, spec.epsilon),
        uniform_points(-spec.radius_r, end, PI),
    );
    // H ds = F(i y) / (i y + i w) * i dy = F(i y) / (y + w) dy
    let f = |y: f64| laplace(Complex64::new(0.0, y)) / (y + spec.omega);
    integrate_piecewise(f, &pts, &split(cfg, pts.len()))
}

fn upper_line<F>(laplace: &F, spec: &ContourSpec, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let start = -spec.omega + spec.epsilon;
    let pts = merge(
        graded_toward_start(start, spec.radius_r, GRADING, spec.epsilon),
        uniform_points(start, spec.radius_r, PI),
    );
    let f = |y: f64| laplace(Complex64::new(0.0, y)) / (y + spec.omega);
    integrate_piecewise(f, &pts, &split(cfg, pts.len()))
}

fn small_arc<F>(laplace: &F, omega: f64, epsilon: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let center = Complex64::new(0.0, -omega);
    // H ds = F(s) / (eps e^{i phi}) * i eps e^{i phi} dphi = i F(s) dphi
    let f = |phi: f64| Complex64::i() * laplace(center + Complex64::from_polar(epsilon, phi));
    let pts = uniform_points(-FRAC_PI_2, FRAC_PI_2, PI / 8.0);
    integrate_piecewise(f, &pts, &split(cfg, pts.len()))
}

fn large_arc<F>(laplace: &F, omega: f64, radius: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let iw = Complex64::new(0.0, omega);
    let f = |theta: f64| {
        let s = Complex64::from_polar(radius, theta);
        -(laplace(s) / (s + iw) * Complex64::i() * s)
    };
    // Integrated from -pi/2 up to pi/2, hence the sign flip above.
    let phase_step = (2.0 / radius).min(PI / 8.0);
    let mut pts = uniform_points(-FRAC_PI_2, FRAC_PI_2, phase_step);
    let first = pts[1];
    let last = pts[pts.len() - 2];
    pts = merge(pts, graded_toward_start(-FRAC_PI_2, first, GRADING, ARC_END_WIDTH));
    pts = merge(pts, graded_toward_end(last, FRAC_PI_2, GRADING, ARC_END_WIDTH));
    integrate_piecewise(f, &pts, &split(cfg, pts.len()))
}

/// Integrates `H` over the four segments of the contour.
///
/// The segments are evaluated concurrently; each one sums its pieces in a
/// fixed order, so the result does not depend on scheduling.
pub fn integrate_contour<F>(
    laplace: F,
    spec: &ContourSpec,
    cfg: &QuadratureConfig,
) -> Result<ContourBreakdown>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    spec.validate()?;
    cfg.validate()?;
    let seg_cfg = split(cfg, 4);
    let ((lower, upper), (small, large)) = rayon::join(
        || {
            rayon::join(
                || lower_line(&laplace, spec, &seg_cfg),
                || upper_line(&laplace, spec, &seg_cfg),
            )
        },
        || {
            rayon::join(
                || small_arc(&laplace, spec.omega, spec.epsilon, &seg_cfg),
                || large_arc(&laplace, spec.omega, spec.radius_r, &seg_cfg),
            )
        },
    );
    let (lower, upper, small, large) = (lower?, upper?, small?, large?);
    let total = lower.value + upper.value + small.value + large.value;
    let magnitude = lower.value.norm() + small.value.norm() + upper.value.norm() + large.value.norm();
    Ok(ContourBreakdown {
        segment_lower: lower.value,
        segment_upper: upper.value,
        small_arc: small.value,
        large_arc: large.value,
        total,
        error_budget: lower.error
            + upper.error
            + small.error
            + large.error
            + 64.0 * f64::EPSILON * magnitude,
    })
}

/// `int_{gamma(eps)} H ds - i pi F(-i w)` for each `eps` in a decreasing
/// sequence.
pub fn small_arc_limit<F>(
    laplace: F,
    omega: f64,
    epsilon_sequence: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    cfg.validate()?;
    if !omega.is_finite() {
        return Err(Error::NonFinite(format!("omega = {omega}")));
    }
    if epsilon_sequence.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Geometry("epsilon values must be positive".into()));
    }
    if epsilon_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Geometry("epsilon sequence must be decreasing".into()));
    }
    let limit = Complex64::new(0.0, PI) * laplace(Complex64::new(0.0, -omega));
    epsilon_sequence
        .par_iter()
        .map(|&eps| Ok(small_arc(&laplace, omega, eps, cfg)?.value - limit))
        .collect()
}

/// `|int_{Gamma(R)} H ds|` for each `R` in an increasing sequence, every
/// radius exceeding `2 |w|`.
pub fn large_arc_decay<F>(
    laplace: F,
    omega: f64,
    radius_sequence: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    cfg.validate()?;
    if !omega.is_finite() {
        return Err(Error::NonFinite(format!("omega = {omega}")));
    }
    if radius_sequence.iter().any(|r| !(r.is_finite() && *r > 2.0 * omega.abs() && *r > 0.0)) {
        return Err(Error::Geometry(format!("every radius must exceed 2|w| = {}", 2.0 * omega.abs())));
    }
    if radius_sequence.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Geometry("radius sequence must be increasing".into()));
    }
    radius_sequence
        .par_iter()
        .map(|&r| Ok(large_arc(&laplace, omega, r, cfg)?.value.norm()))
        .collect()
}

/// Radius beyond which `|s / (s + i w)| <= ell` on the whole right half of
/// the circle `|s| = R`.
pub fn kernel_bound_threshold(omega: f64, ell: f64) -> f64 {
    ell * omega.abs() / (ell - 1.0)
}

/// Largest `|s / (s + i w)|` over `s = R e^{i theta}` at the given angles.
pub fn max_kernel_ratio(omega: f64, radius: f64, theta_samples: &[f64]) -> f64 {
    let iw = Complex64::new(0.0, omega);
    theta_samples
        .iter()
        .map(|&theta| {
            let s = Complex64::from_polar(radius, theta);
            s.norm() / (s + iw).norm()
        })
        .fold(0.0, f64::max)
}

/// True iff `|s / (s + i w)| <= ell` at every sampled `s = R e^{i theta}`.
/// Inputs outside `ell > 1`, `theta in (-pi/2, pi/2)` give `false`.
pub fn kernel_bound_check(omega: f64, ell: f64, radius: f64, theta_samples: &[f64]) -> bool {
    if !(ell > 1.0 && radius > 0.0 && omega.is_finite() && ell.is_finite()) {
        return false;
    }
    if theta_samples.iter().any(|t| !(t.abs() < FRAC_PI_2)) {
        return false;
    }
    // Relative slack absorbs rounding on the threshold itself.
    max_kernel_ratio(omega, radius, theta_samples) <= ell * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_default;

    fn exp_decay(s: Complex64) -> Complex64 {
        1.0 / (s + 1.0)
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn dense_theta(n: usize) -> Vec<f64> {
        (1..n).map(|k| -FRAC_PI_2 + PI * k as f64 / n as f64).collect()
    }

    #[test]
    fn integrand_values() {
        let v = integrand_h(exp_decay, Complex64::new(1.0, 0.0), 0.0).unwrap();
        assert!((v - 0.5).norm() < 1e-15);
        let v = integrand_h(exp_decay, Complex64::i(), 1.0).unwrap();
        let oracle = 1.0 / (Complex64::new(1.0, 1.0) * Complex64::new(0.0, 2.0));
        assert!((v - oracle).norm() < 1e-15);
        assert!((v.norm() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(matches!(
            integrand_h(exp_decay, Complex64::new(0.0, -2.5), 2.5),
            Err(Error::AtPole(_))
        ));
    }

    #[test]
    fn geometry_is_validated() {
        assert!(ContourSpec::new(2.0, 100.0, 1e-3).is_ok());
        assert!(ContourSpec::new(2.0, 100.0, 50.0).is_err());
        assert!(ContourSpec::new(0.0, 1.0, 0.0).is_err());
        assert!(ContourSpec::new(0.0, 1.0, 2.0).is_err());
        assert!(ContourSpec::new(f64::NAN, 1.0, 0.1).is_err());
    }

    #[test]
    fn exp_decay_contour_closes() {
        let spec = ContourSpec::new(2.0, 100.0, 1e-3).unwrap();
        let b = integrate_contour(exp_decay, &spec, &cfg()).unwrap();
        assert!(b.total.norm() < 1e-6, "{b:?}");
        assert!(b.closes(), "{b:?}");
        let sum = b.segment_lower + b.segment_upper + b.small_arc + b.large_arc;
        assert_eq!(sum, b.total);
    }

    #[test]
    fn damped_oscillator_contour_closes() {
        let osc = catalog_default("damped-oscillator").unwrap();
        let f = |s: Complex64| osc.closed_form_laplace(s).unwrap();
        let spec = ContourSpec::new(0.0, 200.0, 1e-3).unwrap();
        let b = integrate_contour(f, &spec, &cfg()).unwrap();
        assert!(b.total.norm() < 1e-6, "{b:?}");
    }

    #[test]
    fn every_l1_catalog_transform_closes() {
        for id in crate::catalog::CATALOG_IDS {
            let signal = catalog_default(id).unwrap();
            if signal.l1_membership() != crate::catalog::Membership::Yes {
                continue;
            }
            let f = |s: Complex64| signal.closed_form_laplace(s).unwrap();
            for omega in [0.0, 1.0, -1.0, 5.0, -5.0] {
                let spec = ContourSpec::new(omega, 100.0, 1e-3).unwrap();
                let b = integrate_contour(f, &spec, &cfg()).unwrap();
                assert!(b.closes(), "{id} w = {omega}: {b:?}");
            }
        }
    }

    #[test]
    fn orientation_matches_residue_golden_value() {
        // Small arc is counterclockwise: +i pi F(-i w) in the limit.
        let b = integrate_contour(exp_decay, &ContourSpec::new(0.0, 100.0, 1e-6).unwrap(), &cfg())
            .unwrap();
        assert!((b.small_arc - Complex64::new(0.0, PI)).norm() < 1e-5);
        // i F(s) ~ i / s on the large arc, integrated from pi/2 down to -pi/2: -2i / R.
        assert!((b.large_arc * 100.0 - Complex64::new(0.0, -2.0)).norm() < 0.05);
    }

    #[test]
    fn small_arc_deviation_shrinks_linearly() {
        let eps = [1e-1, 1e-2, 1e-3];
        for omega in [0.0, 3.0] {
            let dev = small_arc_limit(exp_decay, omega, &eps, &cfg()).unwrap();
            // Leading term is 2 i eps F'(-i w).
            let slope = -1.0 / (Complex64::new(1.0, -omega)).powi(2);
            for (d, e) in dev.iter().zip(eps) {
                let leading = Complex64::new(0.0, 2.0 * e) * slope;
                assert!((d - leading).norm() < 2.0 * e * e, "w = {omega}, eps = {e}: {d}");
            }
        }
    }

    #[test]
    fn zero_transform_has_no_deviation() {
        let dev = small_arc_limit(|_| Complex64::default(), 1.5, &[0.1, 0.01], &cfg()).unwrap();
        assert!(dev.iter().all(|d| d.norm() == 0.0));
    }

    #[test]
    fn small_arc_rejects_bad_sequences() {
        assert!(small_arc_limit(exp_decay, 0.0, &[0.01, 0.1], &cfg()).is_err());
        assert!(small_arc_limit(exp_decay, 0.0, &[0.1, -0.1], &cfg()).is_err());
    }

    #[test]
    fn large_arc_decays_for_rect_pulse() {
        let rect = catalog_default("rect-pulse").unwrap();
        let f = |s: Complex64| rect.closed_form_laplace(s).unwrap();
        let mags = large_arc_decay(f, 0.0, &[1e2, 1e3], &cfg()).unwrap();
        assert!(mags[1] < mags[0], "{mags:?}");
    }

    #[test]
    fn large_arc_halves_per_doubling_for_exp_decay() {
        let mags = large_arc_decay(exp_decay, 1.0, &[50.0, 100.0, 200.0, 400.0], &cfg()).unwrap();
        for w in mags.windows(2) {
            assert!(w[0] / w[1] > 1.5, "{mags:?}");
        }
    }

    #[test]
    fn constant_transform_arc_does_not_vanish() {
        let mags = large_arc_decay(|_| Complex64::new(1.0, 0.0), 1.0, &[10.0, 100.0], &cfg()).unwrap();
        assert!(mags.iter().all(|m| *m > 3.0), "{mags:?}");
        assert!(large_arc_decay(exp_decay, 10.0, &[15.0], &cfg()).is_err());
    }

    #[test]
    fn kernel_bound_examples() {
        let theta = dense_theta(4000);
        assert!(kernel_bound_check(1.0, 2.0, 2.0, &theta));
        assert!(kernel_bound_check(0.0, 1.01, 0.3, &theta));
        assert!(!kernel_bound_check(1.0, 2.0, 1.5, &theta));
        assert!(!kernel_bound_check(1.0, 1.0, 10.0, &theta));
        assert!(!kernel_bound_check(1.0, 2.0, 10.0, &[FRAC_PI_2]));
    }

    #[test]
    fn kernel_maximum_sits_on_the_pole_side() {
        let theta = dense_theta(100_000);
        let r = kernel_bound_threshold(1.0, 2.0);
        let brute = max_kernel_ratio(1.0, r, &theta);
        assert!(brute > 0.99 * 2.0 && brute <= 2.0);
        let brute = max_kernel_ratio(1.0, r, &theta[theta.len() / 2..]);
        assert!(brute < 1.5);
    }
}
