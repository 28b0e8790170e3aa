//! Rational tail completion: beyond the grid a component is modelled as
//! `c / nu^k`, with `c` fitted by least squares on the outer samples of each
//! side, and the Hilbert integral over the missing range is done analytically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::FrequencyGrid;

/// Fraction of the grid (per side) used for the fit.
const FIT_FRACTION: f64 = 0.05;

/// Fitted coefficients of `c / nu^k` on both sides of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub order: u32,
    pub c_left: f64,
    pub c_right: f64,
    /// Relative RMS misfit of the model on the fitted samples.
    pub misfit: f64,
}

fn samples_per_side(n: usize) -> usize {
    ((FIT_FRACTION * n as f64).ceil() as usize).clamp(2, n / 2)
}

fn least_squares(points: &[(f64, f64)], order: u32) -> f64 {
    let k = order as i32;
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(nu, g)| {
        let basis = nu.powi(-k);
        (num + g * basis, den + basis * basis)
    });
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

impl TailFit {
    /// Fits both sides from the outer samples of `samples` on `grid`, which
    /// must straddle zero.
    pub fn from_samples(samples: &[f64], grid: &FrequencyGrid, order: u32) -> Self {
        let n = grid.n_points;
        let m = samples_per_side(n);
        let left: Vec<(f64, f64)> = (0..m).map(|k| (grid.omega(k), samples[k])).collect();
        let right: Vec<(f64, f64)> = (n - m..n).map(|k| (grid.omega(k), samples[k])).collect();
        Self::from_points(&left, &right, order)
    }

    /// Same fit for a component available as a function on `[a, b]`.
    pub fn from_fn<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, order: u32) -> Self {
        const POINTS: usize = 64;
        let width = FIT_FRACTION * (b - a);
        let side = |start: f64| -> Vec<(f64, f64)> {
            (0..POINTS)
                .map(|k| start + width * k as f64 / (POINTS - 1) as f64)
                .map(|nu| (nu, g(nu)))
                .collect()
        };
        Self::from_points(&side(a), &side(b - width), order)
    }

    fn from_points(left: &[(f64, f64)], right: &[(f64, f64)], order: u32) -> Self {
        let c_left = least_squares(left, order);
        let c_right = least_squares(right, order);
        let k = order as i32;
        let (mut err, mut norm) = (0.0, 0.0);
        for (pts, c) in [(left, c_left), (right, c_right)] {
            for &(nu, g) in pts {
                err += (g - c * nu.powi(-k)).powi(2);
                norm += g * g;
            }
        }
        let misfit = if norm > 0.0 { (err / norm).sqrt() } else { 0.0 };
        Self {
            order,
            c_left,
            c_right,
            misfit,
        }
    }

    /// `(1/pi) [int_{-inf}^{left} + int_{right}^{inf}] g(nu) / (nu - omega) dnu`
    /// under the fitted model, for `left < omega < right`, `left < 0 < right`.
    pub fn contribution(&self, left: f64, right: f64, omega: f64) -> f64 {
        let k = self.order;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let upper = self.c_right * rational_tail_integral(k, right, omega);
        let lower = -self.c_left * sign * rational_tail_integral(k, -left, -omega);
        (upper + lower) / PI
    }
}

/// `int_b^inf du / (u^k (u - w))` for `b > 0`, `w < b`, `k >= 1`.
pub(crate) fn rational_tail_integral(k: u32, b: f64, w: f64) -> f64 {
    let ratio = w / b;
    if ratio.abs() < 0.5 {
        // sum_m w^m / ((m + k) b^(m + k))
        let mut term = b.powi(-(k as i32));
        let mut sum = 0.0;
        for m in 0..200 {
            let add = term / (m + k) as f64;
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
            term *= ratio;
        }
        sum
    } else {
        // 1/(u^k (u - w)) = w^-k (1/(u - w) - 1/u) - sum_{j=2..k} w^-(k-j+1) u^-j
        let mut value = w.powi(-(k as i32)) * -(-ratio).ln_1p();
        for j in 2..=k as i32 {
            value -= w.powi(-(k as i32 - j + 1)) * b.powi(1 - j) / (j - 1) as f64;
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_real, QuadratureConfig};

    fn numeric(k: u32, b: f64, w: f64) -> f64 {
        // u = b / x maps [b, inf) onto (0, 1]
        let cfg = QuadratureConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            ..QuadratureConfig::default()
        };
        let f = |x: f64| {
            if x == 0.0 {
                return 0.0;
            }
            let u = b / x;
            b / (x * x) / (u.powi(k as i32) * (u - w))
        };
        integrate_real(f, 0.0, 1.0, &cfg).unwrap().0
    }

    #[test]
    fn analytic_tail_matches_quadrature() {
        for k in 1..=4 {
            for &(b, w) in &[(10.0, 0.0), (10.0, 3.0), (10.0, -4.0), (10.0, 7.5), (10.0, -30.0), (2.0, 1.999)] {
                let exact = numeric(k, b, w);
                let got = rational_tail_integral(k, b, w);
                assert!(
                    (got - exact).abs() < 1e-11 * exact.abs().max(1e-3),
                    "k={k} b={b} w={w}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let grid = FrequencyGrid::new(-40.0, 40.0, 400).unwrap();
        let samples: Vec<f64> = grid
            .points()
            .iter()
            .map(|w| if *w < 0.0 { -3.0 / w } else { 2.0 / w })
            .collect();
        let fit = TailFit::from_samples(&samples, &grid, 1);
        assert!((fit.c_left + 3.0).abs() < 1e-12);
        assert!((fit.c_right - 2.0).abs() < 1e-12);
        assert!(fit.misfit < 1e-12);
        let fit = TailFit::from_fn(|w| 5.0 / (w * w), -40.0, 40.0, 2);
        assert!((fit.c_left - 5.0).abs() < 1e-12 && (fit.c_right - 5.0).abs() < 1e-12);
    }

    #[test]
    fn odd_inverse_power_tail_at_origin() {
        // g = 1/nu beyond +-L: (1/pi) * 2 int_L^inf du / u^2 = 2 / (pi L)
        let fit = TailFit {
            order: 1,
            c_left: 1.0,
            c_right: 1.0,
            misfit: 0.0,
        };
        assert!((fit.contribution(-200.0, 200.0, 0.0) - 2.0 / (PI * 200.0)).abs() < 1e-15);
    }
}
