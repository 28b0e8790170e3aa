//! Consistency reports: reconstruct each component from the other and compare.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{FrequencyGrid, Spectrum, TailModel};
use super::pv::pv_interior;
use super::spectral::{spectral_hilbert, Direction, SpectralOptions};
use super::tail::TailFit;
use crate::catalog::{CausalSignal, Membership};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::transforms::fourier_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Pv,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KkVerdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub consistent_below: f64,
    pub inconsistent_above: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            consistent_below: 0.05,
            inconsistent_above: 0.25,
        }
    }
}

impl Thresholds {
    pub fn verdict(&self, residual: f64) -> KkVerdict {
        if residual < self.consistent_below {
            KkVerdict::Consistent
        } else if residual > self.inconsistent_above {
            KkVerdict::Inconsistent
        } else {
            KkVerdict::Inconclusive
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.consistent_below.is_finite()
            && self.inconsistent_above.is_finite()
            && 0.0 < self.consistent_below
            && self.consistent_below <= self.inconsistent_above;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "thresholds need 0 < consistent_below <= inconsistent_above, got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KkReport {
    pub engine: Engine,
    pub residual_rel_l2_real: f64,
    pub residual_rel_l2_imag: f64,
    pub max_abs_real: f64,
    pub max_abs_imag: f64,
    pub verdict: KkVerdict,
    pub thresholds: Thresholds,
    /// Relative misfit of the tail model on the outer samples, per component.
    pub tail_misfit_real: Option<f64>,
    pub tail_misfit_imag: Option<f64>,
    /// Set when the spectrum has zero norm and nothing could be compared.
    pub degenerate: bool,
}

/// Reconstructed components at the interior nodes `1 ..= n - 2`; the grid
/// end points are excluded because the principal value is undefined there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub omega: Vec<f64>,
    pub real_given: Vec<f64>,
    pub imag_given: Vec<f64>,
    pub real: Vec<f64>,
    pub imag: Vec<f64>,
}

fn fit_for(tail: TailModel, samples: &[f64], grid: &FrequencyGrid) -> Option<TailFit> {
    match tail {
        TailModel::Rational(k) => Some(TailFit::from_samples(samples, grid, k)),
        TailModel::None => None,
    }
}

/// `H[g]` at the interior nodes with the selected engine.
fn transform_interior(
    samples: &[f64],
    spectrum: &Spectrum,
    engine: Engine,
    options: &SpectralOptions,
) -> Result<Vec<f64>> {
    let grid = &spectrum.grid;
    match engine {
        Engine::Pv => Ok(pv_interior(
            samples,
            grid,
            fit_for(spectrum.tail_model, samples, grid).as_ref(),
        )),
        Engine::Spectral => {
            let full = spectral_hilbert(
                samples,
                grid,
                Direction::RealFromImag,
                spectrum.tail_model,
                options,
            )?;
            Ok(full[1..grid.n_points - 1].to_vec())
        }
    }
}

/// Rebuilds `re = H[im]` and `im = -H[re]` with the selected engine.
pub fn reconstruct(spectrum: &Spectrum, engine: Engine, options: &SpectralOptions) -> Result<Reconstruction> {
    let n = spectrum.grid.n_points;
    let re = spectrum.real();
    let im = spectrum.imag();
    let real = transform_interior(&im, spectrum, engine, options)?;
    let imag: Vec<f64> = transform_interior(&re, spectrum, engine, options)?
        .into_iter()
        .map(|v| -v)
        .collect();
    Ok(Reconstruction {
        omega: spectrum.grid.points()[1..n - 1].to_vec(),
        real_given: re[1..n - 1].to_vec(),
        imag_given: im[1..n - 1].to_vec(),
        real,
        imag,
    })
}

fn l2(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

/// Reconstructs both components and grades the relative L2 residuals
/// (interior nodes). A component that vanishes identically is measured
/// against the norm of the whole spectrum instead.
pub fn kk_check_with(
    spectrum: &Spectrum,
    engine: Engine,
    thresholds: &Thresholds,
    options: &SpectralOptions,
) -> Result<(KkReport, Reconstruction)> {
    thresholds.validate()?;
    let rec = reconstruct(spectrum, engine, options)?;
    let norm_re = l2(rec.real_given.iter().copied());
    let norm_im = l2(rec.imag_given.iter().copied());
    let norm_all = norm_re.hypot(norm_im);
    let re = spectrum.real();
    let im = spectrum.imag();
    let grid = &spectrum.grid;
    let misfit = |s: &[f64]| fit_for(spectrum.tail_model, s, grid).map(|f| f.misfit);

    let mut report = KkReport {
        engine,
        residual_rel_l2_real: 0.0,
        residual_rel_l2_imag: 0.0,
        max_abs_real: 0.0,
        max_abs_imag: 0.0,
        verdict: KkVerdict::Inconclusive,
        thresholds: *thresholds,
        tail_misfit_real: misfit(&re),
        tail_misfit_imag: misfit(&im),
        degenerate: norm_all == 0.0,
    };
    if report.degenerate {
        return Ok((report, rec));
    }

    let diff = |a: &[f64], b: &[f64]| -> (f64, f64) {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        (l2(d.iter().copied()), d.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    };
    let (err_re, max_re) = diff(&rec.real, &rec.real_given);
    let (err_im, max_im) = diff(&rec.imag, &rec.imag_given);
    let denom = |n: f64| if n > 0.0 { n } else { norm_all };
    report.residual_rel_l2_real = err_re / denom(norm_re);
    report.residual_rel_l2_imag = err_im / denom(norm_im);
    report.max_abs_real = max_re;
    report.max_abs_imag = max_im;
    report.verdict = thresholds.verdict(report.residual_rel_l2_real.max(report.residual_rel_l2_imag));
    Ok((report, rec))
}

/// [`kk_check_with`] with default spectral options, report only.
pub fn kk_check(spectrum: &Spectrum, engine: Engine, thresholds: &Thresholds) -> Result<KkReport> {
    Ok(kk_check_with(spectrum, engine, thresholds, &SpectralOptions::default())?.0)
}

/// `||chi * P(1/w) + i pi chi|| / (pi ||chi||)` over the interior nodes, with
/// the discrete kernel `1/(k dw)` (zero at `k = 0`) times `dw`. The tail
/// model, if any, completes the convolution beyond the grid.
pub fn convolution_form_residual(spectrum: &Spectrum) -> Result<f64> {
    let grid = &spectrum.grid;
    let n = grid.n_points;
    let chi = &spectrum.values;
    let norm = l2(chi[1..n - 1].iter().map(|v| v.norm()));
    if norm == 0.0 {
        return Err(Error::Degenerate);
    }
    let h = grid.spacing();
    let fits = match spectrum.tail_model {
        TailModel::Rational(k) => Some((
            TailFit::from_samples(&spectrum.real(), grid, k),
            TailFit::from_samples(&spectrum.imag(), grid, k),
        )),
        TailModel::None => None,
    };
    let residuals: Vec<f64> = (1..n - 1)
        .into_par_iter()
        .map(|k| {
            let mut conv = Complex64::default();
            for (j, v) in chi.iter().enumerate() {
                if j != k {
                    conv += v / (k as f64 - j as f64);
                }
            }
            if let Some((fit_re, fit_im)) = &fits {
                // Each tap stands for a cell of width dw, so the grid ends half
                // a step beyond the outer samples. int chi/(w - nu) = -pi H[chi].
                let (a, b, w) = (grid.omega_min - 0.5 * h, grid.omega_max + 0.5 * h, grid.omega(k));
                conv -= PI * Complex64::new(fit_re.contribution(a, b, w), fit_im.contribution(a, b, w));
            }
            (conv + Complex64::new(0.0, PI) * chi[k]).norm_sqr()
        })
        .collect();
    Ok(residuals.iter().sum::<f64>().sqrt() / (PI * norm))
}

/// Samples the Fourier transform of an L1 catalog signal on `grid`. A
/// rational tail of the signal's spectral decay order is attached when the
/// grid straddles zero.
pub fn spectrum_from_signal(
    signal: &CausalSignal,
    grid: &FrequencyGrid,
    cfg: &QuadratureConfig,
) -> Result<Spectrum> {
    if signal.l1_membership() != Membership::Yes {
        return Err(Error::NotL1(signal.id().to_string()));
    }
    let values = grid
        .points()
        .par_iter()
        .map(|&w| fourier_transform(signal, w, cfg).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    let tail = match signal.spectral_decay_order() {
        Some(k) if grid.straddles_zero() => TailModel::Rational(k),
        _ => TailModel::None,
    };
    Spectrum::new(*grid, values, tail)
}

/// Formal spectrum of a negative control (`heaviside`, `constant`, `sign`)
/// sampled on `grid`, which must avoid `omega = 0`.
pub fn negative_control_spectrum(signal: &CausalSignal, grid: &FrequencyGrid) -> Result<Spectrum> {
    if !signal.is_negative_control() {
        return Err(Error::InvalidInput(format!(
            "`{}` is not a negative control",
            signal.id()
        )));
    }
    let values = grid
        .points()
        .iter()
        .map(|&w| {
            signal
                .formal_spectrum(w)
                .filter(|v| v.re.is_finite() && v.im.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("formal spectrum undefined at omega = {w}")))
        })
        .collect::<Result<Vec<_>>>()?;
    // The 1/w controls decay; the constant does not.
    let tail = if signal.formal_spectrum(1.0).is_some_and(|v| v.re != 0.0) || !grid.straddles_zero() {
        TailModel::None
    } else {
        TailModel::Rational(1)
    };
    Spectrum::new(*grid, values, tail)
}
