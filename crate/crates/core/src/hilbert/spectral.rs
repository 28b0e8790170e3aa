//! FFT engine. The discrete transform keeps only odd offsets,
//! `y[n] = (2/pi) sum_{m odd} g[n + m] / m`, whose multiplier in the
//! conjugate domain is exactly `i sgn`; it is applied as a zero-padded
//! linear convolution, so the result equals the direct sum over the grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::grid::{FrequencyGrid, TailModel};
use super::tail::TailFit;
use crate::error::{Error, Result};

/// Which component is reconstructed from which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `re = H[im]`
    RealFromImag,
    /// `im = -H[re]`
    ImagFromReal,
}

impl Direction {
    pub(crate) fn sign(self) -> f64 {
        match self {
            Direction::RealFromImag => 1.0,
            Direction::ImagFromReal => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// Tukey taper fraction, used only when no tail model is given.
    pub taper: f64,
    /// Transform length as a multiple of the grid size (at least 2).
    pub padding: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            taper: 0.1,
            padding: 4,
        }
    }
}

/// Tukey (tapered cosine) window of length `n`; `taper` is the fraction of
/// the length covered by the two cosine flanks together.
pub fn tukey_window(n: usize, taper: f64) -> Vec<f64> {
    if n < 2 || taper <= 0.0 {
        return vec![1.0; n];
    }
    let taper = taper.min(1.0);
    (0..n)
        .map(|k| {
            let x = k as f64 / (n - 1) as f64;
            let edge = x.min(1.0 - x);
            if edge < taper / 2.0 {
                0.5 * (1.0 - (2.0 * PI * edge / taper).cos())
            } else {
                1.0
            }
        })
        .collect()
}

/// Odd-offset sum `(2/pi) sum_{m odd} g[n + m] / m` over the grid, via FFT.
pub(crate) fn odd_tap_sum(samples: &[f64], padding: usize) -> Vec<f64> {
    let n = samples.len();
    let m = padding.max(2) * n;
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);

    // Kernel k[j] = (2/pi)/j for odd j, laid out circularly; (g * k)[n] = -y[n].
    let mut kernel = vec![Complex64::default(); m];
    for j in (1..n).step_by(2) {
        let v = 2.0 / (PI * j as f64);
        kernel[j].re = v;
        kernel[m - j].re = -v;
    }
    let mut signal: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    signal.resize(m, Complex64::default());
    forward.process(&mut kernel);
    forward.process(&mut signal);
    for (s, k) in signal.iter_mut().zip(&kernel) {
        *s *= k;
    }
    inverse.process(&mut signal);
    let scale = 1.0 / m as f64;
    signal[..n].iter().map(|v| -v.re * scale).collect()
}

/// Tail completion for the odd-offset rule at node `k`: each tap stands for
/// a cell of two steps, so the analytic tail starts one step beyond the grid
/// when the edge sample is a tap. At the two end nodes the tail would start
/// at the node itself and diverge; those entries get the shifted start and
/// carry no meaning.
fn odd_tap_tail(fit: &TailFit, grid: &FrequencyGrid, k: usize) -> f64 {
    let h = grid.spacing();
    let n = grid.n_points;
    let right = if (n - 1 - k) % 2 == 1 || k == n - 1 {
        grid.omega_max + h
    } else {
        grid.omega_max
    };
    let left = if k % 2 == 1 || k == 0 {
        grid.omega_min - h
    } else {
        grid.omega_min
    };
    fit.contribution(left, right, grid.omega(k))
}

/// Discrete Hilbert transform of one component on a uniform grid.
///
/// With a rational tail model the grid sum is completed analytically; with
/// none, the samples are tapered by a Tukey window first.
pub fn spectral_hilbert(
    component: &[f64],
    grid: &FrequencyGrid,
    direction: Direction,
    tail: TailModel,
    options: &SpectralOptions,
) -> Result<Vec<f64>> {
    if component.len() != grid.n_points {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} points",
            component.len(),
            grid.n_points
        )));
    }
    if component.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("component samples".into()));
    }
    if options.padding < 2 {
        return Err(Error::InvalidInput("padding must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&options.taper) {
        return Err(Error::InvalidInput("taper must lie in [0, 1]".into()));
    }
    tail.validate(grid)?;
    let sign = direction.sign();
    match tail {
        TailModel::None => {
            let window = tukey_window(grid.n_points, options.taper);
            let tapered: Vec<f64> = component.iter().zip(&window).map(|(g, w)| g * w).collect();
            Ok(odd_tap_sum(&tapered, options.padding)
                .into_iter()
                .map(|v| sign * v)
                .collect())
        }
        TailModel::Rational(order) => {
            let fit = TailFit::from_samples(component, grid, order);
            Ok(odd_tap_sum(component, options.padding)
                .into_iter()
                .enumerate()
                .map(|(k, v)| sign * (v + odd_tap_tail(&fit, grid, k)))
                .collect())
        }
    }
}

/// Spectral transform from abscissae that are supposed to be uniform.
pub fn spectral_hilbert_at(
    omega: &[f64],
    component: &[f64],
    direction: Direction,
    tail: TailModel,
    options: &SpectralOptions,
) -> Result<Vec<f64>> {
    let grid = FrequencyGrid::from_abscissae(omega)?;
    spectral_hilbert(component, &grid, direction, tail, options)
}
