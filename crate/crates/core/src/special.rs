//! Closed-form helpers that have no home in `num-complex`.

use num_complex::Complex64;

/// `int_0^1 e^{-s t} t^{-1/2} dt = sqrt(pi/s) erf(sqrt(s))`, the Laplace
/// transform of the unit-width inverse-square-root pulse.
///
/// Small |s| (and the left half-plane) use the entire power series
/// `sum_k (-s)^k / (k! (k + 1/2))`; elsewhere the Laplace continued fraction
/// for `erfc` is evaluated by backward recurrence. Accurate to ~1e-13 for
/// Re s >= 0; the left half-plane degrades with |s| through cancellation.
pub fn inv_sqrt_pulse_laplace(s: Complex64) -> Complex64 {
    if s.norm() < 8.0 || s.re < 0.0 {
        series(s)
    } else {
        continued_fraction(s)
    }
}

fn series(s: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0); // (-s)^k / k!
    let mut sum = Complex64::new(2.0, 0.0);
    for k in 1..2000 {
        term *= -s / k as f64;
        let add = term / (k as f64 + 0.5);
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() && k as f64 > s.norm() {
            break;
        }
    }
    sum
}

fn continued_fraction(s: Complex64) -> Complex64 {
    const TERMS: usize = 400;
    let z = s.sqrt();
    // erfc(z) = e^{-z^2} / (sqrt(pi) * (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))))
    let mut t = z;
    for k in (1..=TERMS).rev() {
        t = z + (k as f64 * 0.5) / t;
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    Complex64::new(sqrt_pi, 0.0) / z - (-s).exp() / (z * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin_is_two() {
        let v = inv_sqrt_pulse_laplace(Complex64::new(0.0, 0.0));
        assert!((v - 2.0).norm() < 1e-15);
    }

    #[test]
    fn branches_agree_on_the_overlap() {
        for &(re, im) in &[(8.0, 0.0), (9.0, 3.0), (6.0, -7.0), (0.5, 10.0), (0.0, -12.0)] {
            let s = Complex64::new(re, im);
            let a = series(s);
            let b = continued_fraction(s);
            assert!((a - b).norm() < 1e-10 * a.norm(), "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn large_real_argument_tends_to_sqrt_pi_over_s() {
        let s = Complex64::new(400.0, 0.0);
        let v = inv_sqrt_pulse_laplace(s);
        assert!((v.re - (std::f64::consts::PI / 400.0).sqrt()).abs() < 1e-14);
    }
}
