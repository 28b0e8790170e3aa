//! Numerical L1 / L2 membership tests.
//!
//! Partial integrals `int_0^T |f|^p` are tabulated over a schedule of
//! horizons and their growth is fitted against two models: a logarithmic
//! law `a + b log T` and a power law `a + b T^c` (through the slope of the
//! increments on log-log axes). A decaying power law means convergence; flat
//! or growing increments with a growth coefficient above `10 * tol` mean
//! divergence. Signals that are singular at the origin get a second probe on
//! `int_delta^1 |f|^p` as `delta -> 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{CausalSignal, Membership};
use crate::error::{Error, Result};
use crate::quadrature::{
    geometric_points, graded_toward_start, integrate, QuadratureConfig,
};

pub const DEFAULT_SCHEDULE: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];
pub const DEFAULT_TOL: f64 = 1e-6;

/// Lower cut-offs for the probe at a singular origin.
const ORIGIN_SCHEDULE: [f64; 6] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn agrees_with(self, truth: Membership) -> bool {
        matches!(
            (self, truth),
            (Verdict::Yes, Membership::Yes) | (Verdict::No, Membership::No)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityVerdict {
    pub l1: Verdict,
    pub l2: Verdict,
    /// `int |f|` up to the largest horizon probed.
    pub l1_partial_integral: f64,
    pub l2_partial_integral: f64,
    pub t_max_probed: f64,
    pub schedule: Vec<f64>,
    pub l1_partials: Vec<f64>,
    pub l2_partials: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Growth {
    Converges,
    Diverges,
    Unclear,
}

impl From<Growth> for Verdict {
    fn from(g: Growth) -> Verdict {
        match g {
            Growth::Converges => Verdict::Yes,
            Growth::Diverges => Verdict::No,
            Growth::Unclear => Verdict::Inconclusive,
        }
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Classifies the growth of partial integrals `values` tabulated at the
/// increasing horizons `horizons` (only the last five points are used).
pub(crate) fn assess_growth(horizons: &[f64], values: &[f64], tol: f64) -> Growth {
    if values.iter().any(|v| !v.is_finite()) {
        return Growth::Diverges;
    }
    let start = values.len().saturating_sub(5);
    let xs = &horizons[start..];
    let vs = &values[start..];
    if vs.len() < 3 {
        return Growth::Unclear;
    }
    let increments: Vec<f64> = vs.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let scale = vs.last().unwrap().abs().max(1.0);
    let settled = increments
        .iter()
        .rev()
        .take(2)
        .all(|d| *d <= tol * scale);
    if settled {
        return Growth::Converges;
    }

    // Power law a + b T^c: increments scale like T^c on a geometric schedule.
    let (log_x, log_d): (Vec<f64>, Vec<f64>) = xs[1..]
        .iter()
        .zip(&increments)
        .filter(|(_, d)| **d > 0.0)
        .map(|(x, d)| (x.ln(), d.ln()))
        .unzip();
    let exponent = if log_x.len() >= 2 {
        least_squares_slope(&log_x, &log_d)
    } else {
        0.0
    };
    if exponent < -0.1 {
        return Growth::Converges;
    }

    // Logarithmic law a + b log T.
    let ln_x: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let log_coefficient = least_squares_slope(&ln_x, vs);
    if exponent > -0.05 && log_coefficient > 10.0 * tol {
        Growth::Diverges
    } else {
        Growth::Unclear
    }
}

/// Sorted breakpoints for integrating a catalog signal over `[0, t_max]`:
/// a graded mesh at a singular origin, unit steps to 10, then 16 geometric
/// pieces per decade, plus the signal's own discontinuities.
pub(crate) fn mesh_for(signal: &CausalSignal, t_max: f64, extra: &[f64]) -> Vec<f64> {
    // At a singular origin the mesh starts at the finest graded point; what
    // lies below it is the business of the origin probe.
    let mut pts = if signal.singular_at_origin() {
        graded_toward_start(0.0, 1.0, 4.0, 4f64.powi(-40))[1..].to_vec()
    } else {
        vec![0.0]
    };
    pts.extend((1..=10).map(|k| k as f64).filter(|&k| k < t_max));
    if t_max > 10.0 {
        let decades = (t_max / 10.0).log10().ceil().max(1.0) as usize;
        pts.extend(geometric_points(10.0, t_max, 16 * decades));
    }
    pts.extend(signal.breakpoints().into_iter().filter(|&b| b < t_max));
    pts.extend(extra.iter().copied().filter(|&b| b <= t_max));
    pts.push(t_max);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Cumulative integrals of `integrand` over `[0, T]` for each `T` in the
/// schedule. A non-finite running total stops the sweep and fills the rest
/// with `+inf`.
pub(crate) fn partial_integrals<F>(
    integrand: F,
    signal: &CausalSignal,
    schedule: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let t_max = *schedule.last().expect("non-empty schedule");
    let mesh = mesh_for(signal, t_max, schedule);
    let f = |t: f64| Complex64::new(integrand(t), 0.0);
    let mut out = Vec::with_capacity(schedule.len());
    let mut next = 0;
    let mut running = 0.0;
    for w in mesh.windows(2) {
        running += integrate(f, w[0], w[1], cfg)?.value.re;
        if !running.is_finite() {
            out.resize(schedule.len(), f64::INFINITY);
            return Ok(out);
        }
        while next < schedule.len() && w[1] >= schedule[next] {
            out.push(running);
            next += 1;
        }
    }
    Ok(out)
}

fn validate_schedule(schedule: &[f64], tol: f64) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidInput("schedule must be non-empty".into()));
    }
    if schedule.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidInput("schedule entries must be finite and positive".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("schedule must be strictly increasing".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    Ok(())
}

/// `|f(t)|^p`, folded onto t >= 0 for non-causal signals so that the
/// partial integral covers `[-T, T]`.
fn folded_power(signal: &CausalSignal, p: i32) -> impl Fn(f64) -> f64 + '_ {
    move |t: f64| {
        let fwd = signal.amplitude(t).abs().powi(p);
        if signal.is_causal() {
            fwd
        } else {
            fwd + signal.amplitude(-t).abs().powi(p)
        }
    }
}

fn origin_probe(signal: &CausalSignal, p: i32, tol: f64, cfg: &QuadratureConfig) -> Result<Growth> {
    let f = folded_power(signal, p);
    let mut values = Vec::with_capacity(ORIGIN_SCHEDULE.len());
    let mut running = 0.0;
    let mut upper = 1.0;
    for &delta in ORIGIN_SCHEDULE.iter() {
        let pts = geometric_points(delta, upper, 8);
        for w in pts.windows(2) {
            running += integrate(|t| Complex64::new(f(t), 0.0), w[0], w[1], cfg)?.value.re;
        }
        values.push(running);
        upper = delta;
    }
    let inverse: Vec<f64> = ORIGIN_SCHEDULE.iter().map(|d| 1.0 / d).collect();
    Ok(assess_growth(&inverse, &values, tol))
}

fn combine(origin: Option<Growth>, tail: Growth) -> Growth {
    match (origin, tail) {
        (Some(Growth::Diverges), _) | (_, Growth::Diverges) => Growth::Diverges,
        (Some(Growth::Unclear), _) | (_, Growth::Unclear) => Growth::Unclear,
        _ => Growth::Converges,
    }
}

/// Decides L1 and L2 membership of `signal` from partial integrals over the
/// schedule of horizons.
pub fn classify_integrability(
    signal: &CausalSignal,
    schedule: &[f64],
    tol: f64,
) -> Result<IntegrabilityVerdict> {
    validate_schedule(schedule, tol)?;
    let cfg = QuadratureConfig {
        abs_tol: 1e-3 * tol,
        rel_tol: 1e-10,
        max_subdivisions: 400,
        truncation_time: None,
    };

    let mut verdicts = [Verdict::Inconclusive; 2];
    let mut partials: [Vec<f64>; 2] = [vec![], vec![]];
    for (slot, p) in [1, 2].into_iter().enumerate() {
        let values = partial_integrals(folded_power(signal, p), signal, schedule, &cfg)?;
        let tail = assess_growth(schedule, &values, tol);
        let origin = if signal.singular_at_origin() {
            Some(origin_probe(signal, p, tol, &cfg)?)
        } else {
            None
        };
        verdicts[slot] = combine(origin, tail).into();
        partials[slot] = values;
    }
    let [l1_partials, l2_partials] = partials;
    Ok(IntegrabilityVerdict {
        l1: verdicts[0],
        l2: verdicts[1],
        l1_partial_integral: *l1_partials.last().unwrap(),
        l2_partial_integral: *l2_partials.last().unwrap(),
        t_max_probed: *schedule.last().unwrap(),
        schedule: schedule.to_vec(),
        l1_partials,
        l2_partials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_default, CATALOG_IDS};

    #[test]
    fn growth_model_on_synthetic_laws() {
        let xs = DEFAULT_SCHEDULE;
        let log: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let linear: Vec<f64> = xs.to_vec();
        let inverse: Vec<f64> = xs.iter().map(|x| 1.0 - 1.0 / x).collect();
        let flat = vec![1.0; 6];
        assert_eq!(assess_growth(&xs, &log, DEFAULT_TOL), Growth::Diverges);
        assert_eq!(assess_growth(&xs, &linear, DEFAULT_TOL), Growth::Diverges);
        assert_eq!(assess_growth(&xs, &inverse, DEFAULT_TOL), Growth::Converges);
        assert_eq!(assess_growth(&xs, &flat, DEFAULT_TOL), Growth::Converges);
        assert_eq!(assess_growth(&xs[..2], &flat[..2], DEFAULT_TOL), Growth::Unclear);
    }

    #[test]
    fn borderline_power_law_is_inconclusive() {
        // int_1^T t^{-1.07} dt, increments shrink too slowly to call either way
        let xs = DEFAULT_SCHEDULE;
        let v: Vec<f64> = xs.iter().map(|x| (1.0 - x.powf(-0.07)) / 0.07).collect();
        assert_eq!(assess_growth(&xs, &v, DEFAULT_TOL), Growth::Unclear);
    }

    #[test]
    fn exp_decay_is_l1_and_l2() {
        let s = catalog_default("exp-decay").unwrap();
        let v = classify_integrability(&s, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
        assert_eq!((v.l1, v.l2), (Verdict::Yes, Verdict::Yes));
        assert!((v.l1_partial_integral - 1.0).abs() < 1e-8);
        assert!((v.l2_partial_integral - 0.5).abs() < 1e-8);
    }

    #[test]
    fn heaviside_is_neither() {
        let s = catalog_default("heaviside").unwrap();
        let v = classify_integrability(&s, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
        assert_eq!((v.l1, v.l2), (Verdict::No, Verdict::No));
        assert!((v.l1_partial_integral - 1e6).abs() < 1e-3);
    }

    #[test]
    fn every_catalog_entry_matches_ground_truth() {
        for id in CATALOG_IDS {
            let s = catalog_default(id).unwrap();
            let v = classify_integrability(&s, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
            assert!(v.l1.agrees_with(s.l1_membership()), "{id}: L1 {:?}", v.l1);
            assert!(v.l2.agrees_with(s.l2_membership()), "{id}: L2 {:?}", v.l2);
        }
    }

    #[test]
    fn partials_are_non_negative_and_non_decreasing() {
        for id in ["damped-oscillator", "inv-t-tail", "sign"] {
            let s = catalog_default(id).unwrap();
            let v = classify_integrability(&s, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
            for p in [&v.l1_partials, &v.l2_partials] {
                assert!(p[0] >= 0.0);
                assert!(p.windows(2).all(|w| w[1] >= w[0]), "{id}: {p:?}");
            }
        }
    }

    #[test]
    fn schedule_validation() {
        let s = catalog_default("exp-decay").unwrap();
        assert!(classify_integrability(&s, &[], 1e-6).is_err());
        assert!(classify_integrability(&s, &[10.0, 10.0], 1e-6).is_err());
        assert!(classify_integrability(&s, &[10.0, 100.0], 0.0).is_err());
    }
}
