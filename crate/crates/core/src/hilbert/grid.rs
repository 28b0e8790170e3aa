//! Uniform frequency grids and sampled spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `omega_min + k * spacing`, `k = 0 .. n_points - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize) -> Result<Self> {
        if !(omega_min.is_finite() && omega_max.is_finite()) {
            return Err(Error::NonFinite(format!("grid [{omega_min}, {omega_max}]")));
        }
        if omega_min >= omega_max {
            return Err(Error::InvalidInput(format!(
                "grid needs omega_min < omega_max, got [{omega_min}, {omega_max}]"
            )));
        }
        if n_points < 16 || n_points % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "grid needs an even number of points >= 16, got {n_points}"
            )));
        }
        Ok(Self {
            omega_min,
            omega_max,
            n_points,
        })
    }

    /// Recovers the grid from explicit abscissae, which must be uniformly
    /// spaced to within `1e-9` of the spacing.
    pub fn from_abscissae(omega: &[f64]) -> Result<Self> {
        let n = omega.len();
        if n < 2 {
            return Err(Error::InvalidInput("need at least two abscissae".into()));
        }
        let grid = Self::new(omega[0], omega[n - 1], n)?;
        let h = grid.spacing();
        for (k, w) in omega.iter().enumerate() {
            if (w - grid.omega(k)).abs() > 1e-9 * h {
                return Err(Error::InvalidInput(format!(
                    "abscissae are not uniformly spaced (row {k}: {w})"
                )));
            }
        }
        Ok(grid)
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    pub fn omega(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.omega_max
        } else {
            self.omega_min + self.spacing() * k as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.omega(k)).collect()
    }

    pub fn straddles_zero(&self) -> bool {
        self.omega_min < 0.0 && 0.0 < self.omega_max
    }

    pub(crate) fn check_inside(&self, omega: f64) -> Result<()> {
        if omega > self.omega_min && omega < self.omega_max {
            Ok(())
        } else {
            Err(Error::OutsideGrid {
                omega,
                min: self.omega_min,
                max: self.omega_max,
            })
        }
    }
}

/// Assumed behaviour of a spectrum component beyond the sampled grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// The grid is taken to cover everything.
    None,
    /// `c / nu^k` on each side, `c` fitted separately per side.
    Rational(u32),
}

impl TailModel {
    pub(crate) fn validate(self, grid: &FrequencyGrid) -> Result<()> {
        match self {
            TailModel::None => Ok(()),
            TailModel::Rational(0) => Err(Error::InvalidInput("rational tail order must be >= 1".into())),
            TailModel::Rational(_) if !grid.straddles_zero() => Err(Error::InvalidInput(
                "a rational tail needs a grid with omega_min < 0 < omega_max".into(),
            )),
            TailModel::Rational(_) => Ok(()),
        }
    }
}

/// Complex spectrum `re + i im` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
    pub tail_model: TailModel,
}

impl Spectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>, tail_model: TailModel) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n_points
            )));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(format!("spectrum value at omega = {}", grid.omega(k))));
        }
        tail_model.validate(&grid)?;
        Ok(Self {
            grid,
            values,
            tail_model,
        })
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants() {
        assert!(FrequencyGrid::new(-1.0, 1.0, 16).is_ok());
        assert!(FrequencyGrid::new(-1.0, 1.0, 15).is_err());
        assert!(FrequencyGrid::new(-1.0, 1.0, 14).is_err());
        assert!(FrequencyGrid::new(1.0, 1.0, 16).is_err());
        assert!(FrequencyGrid::new(f64::NAN, 1.0, 16).is_err());
        let g = FrequencyGrid::new(-50.0, 50.0, 4096).unwrap();
        assert_eq!(g.omega(0), -50.0);
        assert_eq!(g.omega(4095), 50.0);
        assert!((g.spacing() - 100.0 / 4095.0).abs() < 1e-15);
        // An even symmetric grid never lands on zero.
        assert!(g.points().iter().all(|w| *w != 0.0));
    }

    #[test]
    fn abscissae_must_be_uniform() {
        let g = FrequencyGrid::new(0.0, 3.0, 16).unwrap();
        let mut pts = g.points();
        assert_eq!(FrequencyGrid::from_abscissae(&pts).unwrap(), g);
        pts[5] += 1e-3;
        assert!(FrequencyGrid::from_abscissae(&pts).is_err());
    }

    #[test]
    fn spectrum_validation() {
        let g = FrequencyGrid::new(-1.0, 1.0, 16).unwrap();
        let ok = vec![Complex64::new(1.0, 0.0); 16];
        assert!(Spectrum::new(g, ok.clone(), TailModel::Rational(1)).is_ok());
        assert!(Spectrum::new(g, ok[..15].to_vec(), TailModel::None).is_err());
        let mut bad = ok.clone();
        bad[3].im = f64::INFINITY;
        assert!(Spectrum::new(g, bad, TailModel::None).is_err());
        assert!(Spectrum::new(g, ok.clone(), TailModel::Rational(0)).is_err());
        let positive = FrequencyGrid::new(1.0, 2.0, 16).unwrap();
        assert!(Spectrum::new(positive, ok, TailModel::Rational(1)).is_err());
    }
}
