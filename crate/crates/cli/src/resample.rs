//! Shape-preserving (Fritsch-Carlson / PCHIP) cubic interpolation.

/// Monotone piecewise cubic Hermite interpolant through `(x, y)`.
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    /// `x` must be strictly increasing with at least two entries; the caller
    /// checks this.
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len());
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes.fill(delta[0]);
        } else {
            for k in 1..n - 1 {
                let (a, b) = (delta[k - 1], delta[k]);
                if a * b > 0.0 {
                    // weighted harmonic mean
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / a + w2 / b);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            slopes,
        }
    }

    /// Value at `t`; outside the data the end cubic is extended.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let k = self.x.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.slopes[k] + h01 * self.y[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

// Three-point end formula, limited so the end stays monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_cubics_on_lines() {
        let x = [0.0, 0.5, 1.5, 2.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let p = Pchip::new(&x, &y);
        for (a, b) in x.iter().zip(&y) {
            assert_eq!(p.eval(*a), *b);
        }
        for t in [0.1, 0.7, 1.9, 3.3] {
            assert!((p.eval(t) - (3.0 * t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn no_overshoot_at_a_step() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|&v| if v < 5.0 { 0.0 } else { 1.0 }).collect();
        let p = Pchip::new(&x, &y);
        for k in 0..=900 {
            let v = p.eval(k as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v), "{v}");
        }
    }

    #[test]
    fn smooth_data_is_accurate() {
        let x: Vec<f64> = (0..200).map(|k| -10.0 + 0.1 * k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 / (1.0 + v * v)).collect();
        let p = Pchip::new(&x, &y);
        let t = 0.33;
        assert!((p.eval(t) - 1.0 / (1.0 + t * t)).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(
            steps in prop::collection::vec((0.01f64..2.0, 0.0f64..3.0), 3..40),
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let p = Pchip::new(&x, &y);
            let end = *x.last().unwrap();
            let mut prev = p.eval(0.0);
            for k in 1..=2000 {
                let v = p.eval(end * k as f64 / 2000.0);
                prop_assert!(v >= prev - 1e-12 * (1.0 + prev.abs()), "{} < {}", v, prev);
                prev = v;
            }
        }
    }
}
