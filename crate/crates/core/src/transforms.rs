//! One-sided Laplace and Fourier transforms of catalog signals, abscissa
//! estimation, decay probes, truncated transforms and Bromwich inversion.
//!
//! Sign convention: the Fourier kernel is `e^{+i w t}`, so the Fourier
//! transform of a causal L1 signal is its Laplace transform at `s = -i w`.
//! (Engineering texts write `e^{-j w t}`; substitute `i -> -j`.)

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{CausalSignal, Membership};
use crate::error::{Error, Result};
use crate::integrability::{assess_growth, mesh_for, partial_integrals, Growth, DEFAULT_SCHEDULE, DEFAULT_TOL};
use crate::quadrature::{
    integrate_piecewise, oscillatory_tail, uniform_points, Estimate, QuadratureConfig,
};

/// Largest horizon searched for a tail bound before switching to the
/// accelerated oscillatory tail.
const MAX_TRUNCATION: f64 = 1e8;
/// Cap on oscillation periods resolved piece by piece on `[0, T*]`.
const MAX_PERIODS: f64 = 2e5;

/// A point `s = s' + i s''` of the complex frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub s_prime: f64,
    pub s_double_prime: f64,
}

impl ComplexPoint {
    pub fn new(s_prime: f64, s_double_prime: f64) -> Result<Self> {
        if !(s_prime.is_finite() && s_double_prime.is_finite()) {
            return Err(Error::NonFinite(format!("s = {s_prime} + {s_double_prime}i")));
        }
        Ok(Self {
            s_prime,
            s_double_prime,
        })
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.s_prime, self.s_double_prime)
    }
}

/// Breakpoints on `[start, end]`: the signal's mesh refined so that no piece
/// spans more than one period of `e^{i w t}`.
fn time_mesh(signal: &CausalSignal, end: f64, angular_frequency: f64) -> Vec<f64> {
    let mut pts = mesh_for(signal, end, &[]);
    if pts[0] != 0.0 {
        pts.insert(0, 0.0);
    }
    if angular_frequency != 0.0 {
        let period = 2.0 * PI / angular_frequency.abs();
        pts.extend(uniform_points(0.0, end, period));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
    }
    pts
}

fn split_tolerance(cfg: &QuadratureConfig, pieces: usize) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol / pieces.max(1) as f64,
        ..*cfg
    }
}

fn check_abscissa(signal: &CausalSignal, s_prime: f64) -> Result<()> {
    if let Some(lambda0) = signal.lambda0() {
        if s_prime <= lambda0 {
            return Err(Error::LeftOfAbscissa { s_prime, lambda0 });
        }
    }
    Ok(())
}

/// `int_0^inf e^{-s t} f(t) dt` by adaptive quadrature.
///
/// Compactly supported signals are integrated over their support. Otherwise
/// the horizon `T*` is doubled until the signal's tail bound drops below
/// `abs_tol / 2`; when no usable horizon exists and the phasor oscillates,
/// the tail is summed between phasor zeros and accelerated.
pub fn laplace_transform(
    signal: &CausalSignal,
    s: ComplexPoint,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !signal.is_causal() {
        return Err(Error::NotCausal(signal.id().to_string()));
    }
    check_abscissa(signal, s.s_prime)?;
    let integrand = |t: f64| {
        Complex64::from_polar(1.0, -s.s_double_prime * t) * signal.damped_amplitude(t, s.s_prime)
    };
    let omega = s.s_double_prime;

    if let Some(end) = signal.support_end() {
        let mesh = time_mesh(signal, end, omega);
        return integrate_piecewise(integrand, &mesh, &split_tolerance(cfg, mesh.len()));
    }

    let horizon = match cfg.truncation_time {
        Some(t) => Some((t, signal.laplace_tail_bound(t, s.s_prime).unwrap_or(f64::NAN))),
        None => {
            let mut t = signal.breakpoints().last().copied().unwrap_or(1.0).max(1.0);
            loop {
                match signal.laplace_tail_bound(t, s.s_prime) {
                    Some(b) if b <= 0.5 * cfg.abs_tol => break Some((t, b)),
                    Some(_) if t < MAX_TRUNCATION => t *= 2.0,
                    _ => break None,
                }
            }
        }
    };

    match horizon {
        Some((end, tail)) if end * omega.abs() / (2.0 * PI) <= MAX_PERIODS => {
            let mesh = time_mesh(signal, end, omega);
            let mut est = integrate_piecewise(integrand, &mesh, &split_tolerance(cfg, mesh.len()))?;
            if tail.is_finite() {
                est.error += tail;
            }
            Ok(est)
        }
        _ if omega != 0.0 => {
            let half_period = PI / omega.abs();
            let start = signal.breakpoints().last().copied().unwrap_or(0.0).max(10.0);
            let mesh = time_mesh(signal, start, omega);
            let head = integrate_piecewise(integrand, &mesh, &split_tolerance(cfg, mesh.len()))?;
            let tail = oscillatory_tail(integrand, start, half_period, cfg)?;
            Ok(head + tail)
        }
        _ => Err(Error::NonConvergence {
            a: 0.0,
            b: f64::INFINITY,
            error: f64::INFINITY,
            subdivisions: 0,
        }),
    }
}

/// Result of the abscissa search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEstimate {
    pub value: f64,
    /// Width of the final bisection bracket.
    pub uncertainty: f64,
    /// The integral already converges at the low end of the bracket, which
    /// is what compactly supported (entire-transform) signals report.
    pub entire: bool,
}

/// Bisection for the smallest `s'` at which `int_0^inf e^{-s' t} |f(t)| dt`
/// converges numerically, judged with the integrability growth model.
pub fn estimate_lambda0(
    signal: &CausalSignal,
    bracket: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<AbscissaEstimate> {
    const WIDTH: f64 = 1e-3;
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("invalid bracket ({lo}, {hi})")));
    }
    if !signal.is_causal() {
        return Err(Error::NotCausal(signal.id().to_string()));
    }
    let probe_cfg = QuadratureConfig {
        abs_tol: 1e-3 * DEFAULT_TOL,
        rel_tol: 1e-10,
        max_subdivisions: cfg.max_subdivisions.max(400),
        truncation_time: None,
    };
    let converges = |s_prime: f64| -> Result<bool> {
        let weighted = |t: f64| signal.damped_amplitude(t, s_prime).abs();
        match partial_integrals(weighted, signal, &DEFAULT_SCHEDULE, &probe_cfg) {
            Ok(values) => Ok(assess_growth(&DEFAULT_SCHEDULE, &values, DEFAULT_TOL) == Growth::Converges),
            Err(Error::NonFiniteIntegrand(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };

    if !converges(hi)? {
        return Err(Error::DivergentBracket(hi));
    }
    if converges(lo)? {
        return Ok(AbscissaEstimate {
            value: lo,
            uncertainty: 0.0,
            entire: true,
        });
    }
    while hi - lo > WIDTH {
        let mid = 0.5 * (lo + hi);
        if converges(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(AbscissaEstimate {
        value: 0.5 * (lo + hi),
        uncertainty: hi - lo,
        entire: false,
    })
}

/// `|F_L(s' + i s'')|` along an increasing sequence of `s'`.
pub fn riemann_lebesgue_probe(
    signal: &CausalSignal,
    s_double_prime: f64,
    s_prime_sequence: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    if s_prime_sequence.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("s' sequence must be strictly increasing".into()));
    }
    s_prime_sequence
        .iter()
        .map(|&sp| {
            let s = ComplexPoint::new(sp, s_double_prime)?;
            Ok(laplace_transform(signal, s, cfg)?.value.norm())
        })
        .collect()
}

/// `int e^{i w t} f(t) dt`, evaluated as the Laplace transform at `s = -i w`.
/// Only defined here for L1 signals.
pub fn fourier_transform(signal: &CausalSignal, omega: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if signal.l1_membership() != Membership::Yes {
        return Err(Error::NotL1(signal.id().to_string()));
    }
    laplace_transform(signal, ComplexPoint::new(0.0, -omega)?, cfg)
}

/// Fourier transforms of the truncations `f_n = f [theta(t+n) - theta(t-n)]`
/// for each `n`, i.e. `int_{-n}^{n} e^{i w t} f(t) dt`.
pub fn truncated_fourier_sequence(
    signal: &CausalSignal,
    n_values: &[u64],
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if !omega.is_finite() {
        return Err(Error::NonFinite(format!("omega = {omega}")));
    }
    if n_values.is_empty() || n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "n values must be positive and strictly increasing".into(),
        ));
    }
    let kernel = |t: f64| Complex64::new(0.0, omega * t).exp();
    let causal = signal.is_causal();
    let integrand = |t: f64| {
        let mut v = kernel(t) * signal.amplitude(t);
        if !causal {
            v += kernel(-t) * signal.amplitude(-t);
        }
        v
    };

    let n_max = *n_values.last().unwrap() as f64;
    let mesh = time_mesh(signal, n_max, omega);
    let piece_cfg = split_tolerance(cfg, mesh.len());
    let mut out = Vec::with_capacity(n_values.len());
    let mut running = Complex64::default();
    let mut lo = 0.0;
    for &n in n_values {
        let n = n as f64;
        let pts: Vec<f64> = std::iter::once(lo)
            .chain(mesh.iter().copied().filter(|&p| p > lo && p < n))
            .chain(std::iter::once(n))
            .collect();
        running += integrate_piecewise(integrand, &pts, &piece_cfg)?.value;
        out.push(running);
        lo = n;
    }
    Ok(out)
}

/// Bromwich inversion with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BromwichEstimate {
    pub value: f64,
    pub quadrature_error: f64,
    /// Estimated effect of cutting the vertical line at `|s''| = cutoff`,
    /// from the `1/|s|` decay of the transform at the cut.
    pub truncation_error: f64,
}

/// `(1/2pi) Re int_{-cutoff}^{cutoff} F(a + i y) e^{(a + i y) t} dy`.
pub fn bromwich_inverse<F>(
    transform: F,
    lambda0: f64,
    t: f64,
    a: f64,
    cutoff: f64,
    cfg: &QuadratureConfig,
) -> Result<BromwichEstimate>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.validate()?;
    if !(t.is_finite() && a.is_finite()) {
        return Err(Error::NonFinite(format!("t = {t}, a = {a}")));
    }
    if a <= lambda0 {
        return Err(Error::LeftOfAbscissa {
            s_prime: a,
            lambda0,
        });
    }
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidInput("cutoff must be finite and positive".into()));
    }
    let integrand = |y: f64| {
        let s = Complex64::new(a, y);
        transform(s) * (s * t).exp()
    };
    let piece = if t != 0.0 { (2.0 * PI / t.abs()).min(2.0 * PI) } else { 2.0 * PI };
    let mesh = uniform_points(-cutoff, cutoff, piece);
    let est = integrate_piecewise(integrand, &mesh, &split_tolerance(cfg, mesh.len()))?;

    let edge = transform(Complex64::new(a, cutoff))
        .norm()
        .max(transform(Complex64::new(a, -cutoff)).norm());
    let growth = (a * t).exp();
    let truncation_error = if t != 0.0 {
        growth * edge * (2.0 / (PI * t.abs())).min(cutoff / PI)
    } else {
        growth * edge * cutoff / PI
    };
    Ok(BromwichEstimate {
        value: est.value.re / (2.0 * PI),
        quadrature_error: est.error / (2.0 * PI),
        truncation_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_default, catalog_get};
    use std::collections::BTreeMap;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn at(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn laplace_examples() {
        let exp = catalog_default("exp-decay").unwrap();
        let rect = catalog_default("rect-pulse").unwrap();
        let v = laplace_transform(&exp, at(1.0, 0.0), &cfg()).unwrap().value;
        assert!((v - 0.5).norm() < 1e-9);
        let v = laplace_transform(&exp, at(0.0, 0.0), &cfg()).unwrap().value;
        assert!((v - 1.0).norm() < 1e-9);
        let v = laplace_transform(&rect, at(0.0, 0.0), &cfg()).unwrap().value;
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn laplace_refuses_points_left_of_abscissa() {
        let exp = catalog_default("exp-decay").unwrap();
        let err = laplace_transform(&exp, at(-1.0, 3.0), &cfg()).unwrap_err();
        assert!(matches!(err, Error::LeftOfAbscissa { .. }));
        let step = catalog_default("heaviside").unwrap();
        assert!(laplace_transform(&step, at(0.0, 1.0), &cfg()).is_err());
        let sign = catalog_default("sign").unwrap();
        assert!(matches!(
            laplace_transform(&sign, at(1.0, 0.0), &cfg()).unwrap_err(),
            Error::NotCausal(_)
        ));
    }

    #[test]
    fn graded_mesh_handles_inverse_sqrt_pulse() {
        let pulse = catalog_default("inv-sqrt-pulse").unwrap();
        for &(re, im) in &[(0.0, 0.0), (2.0, -3.0), (0.0, 25.0)] {
            let s = at(re, im);
            let num = laplace_transform(&pulse, s, &cfg()).unwrap().value;
            let closed = pulse.closed_form_laplace(s.to_complex()).unwrap();
            assert!((num - closed).norm() < 1e-9, "s = {s:?}: {num} vs {closed}");
        }
    }

    #[test]
    fn heaviside_transform_is_one_over_s() {
        let step = catalog_default("heaviside").unwrap();
        let v = laplace_transform(&step, at(0.5, 2.0), &cfg()).unwrap().value;
        let expected = Complex64::new(1.0, 0.0) / Complex64::new(0.5, 2.0);
        assert!((v - expected).norm() < 1e-9);
    }

    #[test]
    fn slowly_decaying_oscillatory_tail_is_accelerated() {
        // int_1^inf e^{i t} / t dt = -Ci(1) + i (pi/2 - Si(1))
        let ci1 = 0.337_403_922_900_968_1;
        let si1 = 0.946_083_070_367_183_0;
        let tail = catalog_default("inv-t-tail").unwrap();
        let v = laplace_transform(&tail, at(1e-12, -1.0), &cfg()).unwrap().value;
        let expected = Complex64::new(-ci1, std::f64::consts::FRAC_PI_2 - si1);
        assert!((v - expected).norm() < 1e-7, "{v} vs {expected}");
    }

    #[test]
    fn fourier_examples() {
        let exp = catalog_default("exp-decay").unwrap();
        let v = fourier_transform(&exp, 0.0, &cfg()).unwrap().value;
        assert!((v - 1.0).norm() < 1e-9);
        let v = fourier_transform(&exp, 1.0, &cfg()).unwrap().value;
        assert!((v - Complex64::new(0.5, 0.5)).norm() < 1e-9);
        let params: BTreeMap<String, f64> =
            [("alpha".to_string(), 1.0), ("omega0".to_string(), 2.0)].into();
        let osc = catalog_get("damped-oscillator", &params).unwrap();
        let v = fourier_transform(&osc, 0.0, &cfg()).unwrap().value;
        assert!((v - 0.4).norm() < 1e-9);
    }

    #[test]
    fn fourier_rejects_non_l1() {
        let tail = catalog_default("inv-t-tail").unwrap();
        assert!(matches!(
            fourier_transform(&tail, 1.0, &cfg()).unwrap_err(),
            Error::NotL1(_)
        ));
    }

    #[test]
    fn abscissa_examples() {
        let exp = catalog_default("exp-decay").unwrap();
        let est = estimate_lambda0(&exp, (-2.0, 0.0), &cfg()).unwrap();
        assert!((est.value + 1.0).abs() < 1e-3, "{est:?}");
        assert!(!est.entire);
        let step = catalog_default("heaviside").unwrap();
        let est = estimate_lambda0(&step, (-1.0, 1.0), &cfg()).unwrap();
        assert!(est.value.abs() < 1e-3, "{est:?}");
        let rect = catalog_default("rect-pulse").unwrap();
        let est = estimate_lambda0(&rect, (-5.0, 0.0), &cfg()).unwrap();
        assert_eq!(est.value, -5.0);
        assert!(est.entire);
    }

    #[test]
    fn abscissa_bracket_must_converge_at_top() {
        let exp = catalog_default("exp-decay").unwrap();
        assert!(matches!(
            estimate_lambda0(&exp, (-3.0, -2.0), &cfg()).unwrap_err(),
            Error::DivergentBracket(_)
        ));
        assert!(estimate_lambda0(&exp, (0.0, -1.0), &cfg()).is_err());
    }

    #[test]
    fn riemann_lebesgue_examples() {
        let exp = catalog_default("exp-decay").unwrap();
        let m = riemann_lebesgue_probe(&exp, 0.0, &[1.0, 10.0, 100.0], &cfg()).unwrap();
        for (got, want) in m.iter().zip([0.5, 1.0 / 11.0, 1.0 / 101.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        let rect = catalog_default("rect-pulse").unwrap();
        let m = riemann_lebesgue_probe(&rect, 0.0, &[1.0, 10.0, 100.0], &cfg()).unwrap();
        for (got, sp) in m.iter().zip([1.0_f64, 10.0, 100.0]) {
            assert!((got - (1.0 - (-sp).exp()) / sp).abs() < 1e-9);
        }
        let m = riemann_lebesgue_probe(&exp, 5.0, &[1.0, 10.0, 100.0, 1000.0], &cfg()).unwrap();
        assert!(m.windows(2).all(|w| w[1] < w[0]));
        assert!(m[3] < 1e-2 * m[0]);
        assert!(riemann_lebesgue_probe(&exp, 0.0, &[2.0, 1.0], &cfg()).is_err());
    }

    #[test]
    fn truncated_sequence_examples() {
        let tail = catalog_default("inv-t-tail").unwrap();
        let seq = truncated_fourier_sequence(&tail, &[10, 100, 1000], 1.0, &cfg()).unwrap();
        let d1 = (seq[1] - seq[0]).norm();
        let d2 = (seq[2] - seq[1]).norm();
        assert!(d2 < d1);
        let exp = catalog_default("exp-decay").unwrap();
        let seq = truncated_fourier_sequence(&exp, &[10, 20], 0.0, &cfg()).unwrap();
        assert!(seq.iter().all(|v| (v - 1.0).norm() < 1e-4));
        let step = catalog_default("heaviside").unwrap();
        let seq = truncated_fourier_sequence(&step, &[10, 100], 0.0, &cfg()).unwrap();
        assert!((seq[0] - 10.0).norm() < 1e-9 && (seq[1] - 100.0).norm() < 1e-9);
        assert!(truncated_fourier_sequence(&step, &[0, 10], 0.0, &cfg()).is_err());
        assert!(truncated_fourier_sequence(&step, &[10, 10], 0.0, &cfg()).is_err());
    }

    #[test]
    fn truncated_sequence_of_sign_function_is_symmetric_window() {
        // int_{-n}^{n} sgn(t) e^{i w t} dt = 2i (1 - cos(w n)) / w
        let sign = catalog_default("sign").unwrap();
        let w = 0.7;
        let seq = truncated_fourier_sequence(&sign, &[3, 8], w, &cfg()).unwrap();
        for (v, n) in seq.iter().zip([3.0, 8.0]) {
            let expected = Complex64::new(0.0, 2.0 * (1.0 - (w * n).cos()) / w);
            assert!((v - expected).norm() < 1e-9);
        }
    }

    #[test]
    fn bromwich_examples() {
        let exp = catalog_default("exp-decay").unwrap();
        let f = |s: Complex64| exp.closed_form_laplace(s).unwrap();
        for t in [1.0, 2.0] {
            let est = bromwich_inverse(f, -1.0, t, 0.0, 1e4, &cfg()).unwrap();
            assert!((est.value - (-t).exp()).abs() < 1e-3);
            assert!(est.truncation_error < 1e-3);
        }
        let est = bromwich_inverse(f, -1.0, -1.0, 0.0, 1e4, &cfg()).unwrap();
        assert!(est.value.abs() < 1e-3);
        assert!(bromwich_inverse(f, -1.0, 1.0, -1.0, 1e4, &cfg()).is_err());
        assert!(bromwich_inverse(f, -1.0, 1.0, 0.0, -1.0, &cfg()).is_err());
    }
}
