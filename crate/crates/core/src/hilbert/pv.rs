//! Principal-value engine: `(1/pi) P int g(nu) / (nu - omega) dnu` by
//! singularity subtraction. The regular part `(g(nu) - g(omega)) / (nu - omega)`
//! is integrated as an ordinary integral over the grid span, the subtracted
//! pole contributes `g(omega) ln((b - omega) / (omega - a))`, and the tail
//! model supplies what lies beyond the grid.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::grid::{FrequencyGrid, TailModel};
use super::tail::{rational_tail_integral, TailFit};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_real, QuadratureConfig};

/// Neglected tail allowed without a tail model, relative to the component's
/// largest magnitude.
const TAIL_TOLERANCE: f64 = 1e-3;
/// Offsets from a node below this fraction of the spacing snap to the node.
const SNAP: f64 = 1e-6;

/// Rough size of the tail an untreated grid cuts off, using `c = g(edge) * edge`.
fn neglected_tail(g_left: f64, g_right: f64, a: f64, b: f64, omega: f64) -> f64 {
    if a < 0.0 && b > 0.0 {
        ((g_right * b).abs() * rational_tail_integral(1, b, omega)
            + (g_left * a).abs() * rational_tail_integral(1, -a, -omega))
            / PI
    } else {
        (g_left.abs() + g_right.abs()) / PI
    }
}

fn check_samples(samples: &[f64], grid: &FrequencyGrid) -> Result<()> {
    if samples.len() != grid.n_points {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} points",
            samples.len(),
            grid.n_points
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("component samples".into()));
    }
    Ok(())
}

/// Cubic Lagrange value and derivative at `omega` from the four nodes around it.
fn local_cubic(samples: &[f64], grid: &FrequencyGrid, omega: f64) -> (f64, f64) {
    let h = grid.spacing();
    let x = (omega - grid.omega_min) / h;
    let first = (x.floor() as isize - 1).clamp(0, grid.n_points as isize - 4) as usize;
    let nodes: [f64; 4] = std::array::from_fn(|i| (first + i) as f64);
    let (mut value, mut slope) = (0.0, 0.0);
    for i in 0..4 {
        let mut basis = 1.0;
        let mut deriv = 0.0;
        for j in (0..4).filter(|&j| j != i) {
            let factor = (x - nodes[j]) / (nodes[i] - nodes[j]);
            // product rule, accumulated on the fly
            deriv = deriv * factor + basis / (nodes[i] - nodes[j]);
            basis *= factor;
        }
        value += samples[first + i] * basis;
        slope += samples[first + i] * deriv;
    }
    (value, slope / h)
}

/// Grid part of the transform (without tail and without the `1/pi`).
fn regularised_sum(samples: &[f64], grid: &FrequencyGrid, omega: f64) -> f64 {
    let n = grid.n_points;
    let h = grid.spacing();
    let x = (omega - grid.omega_min) / h;
    let nearest = x.round();
    let node = (x - nearest).abs() < SNAP && nearest >= 1.0 && nearest <= (n - 2) as f64;
    let (center, g_center, slope) = if node {
        let k = nearest as usize;
        (k, samples[k], (samples[k + 1] - samples[k - 1]) / (2.0 * h))
    } else {
        let (v, d) = local_cubic(samples, grid, omega);
        (usize::MAX, v, d)
    };
    let omega = if node { grid.omega(center) } else { omega };
    let regular = |k: usize| -> f64 {
        if k == center {
            slope
        } else {
            (samples[k] - g_center) / (grid.omega(k) - omega)
        }
    };
    let interior: f64 = (1..n - 1).map(regular).sum();
    let trapezoid = h * (interior + 0.5 * (regular(0) + regular(n - 1)));
    trapezoid + g_center * ((grid.omega_max - omega) / (omega - grid.omega_min)).ln()
}

/// `(1/pi) P int g(nu) / (nu - omega) dnu` for a component sampled on `grid`.
///
/// Without a tail model the neglected tail is estimated from the edge
/// samples and must stay below `1e-3` of the component's largest magnitude.
pub fn pv_hilbert(samples: &[f64], grid: &FrequencyGrid, omega: f64, tail: TailModel) -> Result<f64> {
    check_samples(samples, grid)?;
    grid.check_inside(omega)?;
    tail.validate(grid)?;
    let completion = match tail {
        TailModel::Rational(k) => {
            TailFit::from_samples(samples, grid, k).contribution(grid.omega_min, grid.omega_max, omega)
        }
        TailModel::None => {
            let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let missing = neglected_tail(
                samples[0],
                samples[grid.n_points - 1],
                grid.omega_min,
                grid.omega_max,
                omega,
            );
            if missing > TAIL_TOLERANCE * scale {
                return Err(Error::TailRequired(missing));
            }
            0.0
        }
    };
    Ok(regularised_sum(samples, grid, omega) / PI + completion)
}

/// Same transform for a component given as a function on `[a, b]`; the
/// regular part is integrated adaptively on each side of `omega`.
pub fn pv_hilbert_fn<F>(
    g: F,
    range: (f64, f64),
    omega: f64,
    tail: TailModel,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite() && omega.is_finite()) {
        return Err(Error::NonFinite(format!("range [{a}, {b}], omega = {omega}")));
    }
    if !(omega > a && omega < b) {
        return Err(Error::OutsideGrid {
            omega,
            min: a,
            max: b,
        });
    }
    cfg.validate()?;
    let g_center = g(omega);
    let regular = |nu: f64| (g(nu) - g_center) / (nu - omega);
    let (left, _) = integrate_real(regular, a, omega, cfg)?;
    let (right, _) = integrate_real(regular, omega, b, cfg)?;
    let completion = match tail {
        TailModel::Rational(0) => {
            return Err(Error::InvalidInput("rational tail order must be >= 1".into()))
        }
        TailModel::Rational(_) if !(a < 0.0 && b > 0.0) => {
            return Err(Error::InvalidInput(
                "a rational tail needs a range with a < 0 < b".into(),
            ))
        }
        TailModel::Rational(k) => TailFit::from_fn(&g, a, b, k).contribution(a, b, omega),
        TailModel::None => {
            let (ga, gb) = (g(a), g(b));
            let scale = ga.abs().max(gb.abs()).max(g_center.abs());
            let missing = neglected_tail(ga, gb, a, b, omega);
            if missing > TAIL_TOLERANCE * scale {
                return Err(Error::TailRequired(missing));
            }
            0.0
        }
    };
    Ok((left + right + g_center * ((b - omega) / (omega - a)).ln()) / PI + completion)
}

/// Transform at every interior node `1 ..= n - 2`, completed with `fit`.
pub(crate) fn pv_interior(samples: &[f64], grid: &FrequencyGrid, fit: Option<&TailFit>) -> Vec<f64> {
    (1..grid.n_points - 1)
        .into_par_iter()
        .map(|k| {
            let omega = grid.omega(k);
            let tail = fit.map_or(0.0, |f| f.contribution(grid.omega_min, grid.omega_max, omega));
            regularised_sum(samples, grid, omega) / PI + tail
        })
        .collect()
}
