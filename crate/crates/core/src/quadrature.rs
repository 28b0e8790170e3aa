//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands.
//!
//! The workhorse is a global-error-driven bisection scheme built on the
//! 7-point Gauss / 15-point Kronrod pair (QUADPACK constants). On top of it
//! sit helpers for piecewise integration over breakpoint lists, graded meshes
//! toward endpoint singularities, and semi-infinite oscillatory tails summed
//! chunk by chunk and accelerated with iterated Aitken extrapolation.

use std::ops::{Add, AddAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and limits shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals for one adaptive integration.
    pub max_subdivisions: usize,
    /// Forces the truncation point of semi-infinite integrals when set.
    pub truncation_time: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 200,
            truncation_time: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidInput("max_subdivisions must be >= 1".into()));
        }
        if let Some(t) = self.truncation_time {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidInput(
                    "truncation_time must be finite and positive".into(),
                ));
            }
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// An integral value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: Complex64, error: f64) -> Self {
        Self { value, error }
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl AddAssign for Estimate {
    fn add_assign(&mut self, rhs: Estimate) {
        self.value += rhs.value;
        self.error += rhs.error;
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// One application of the 15-point Kronrod rule with the embedded 7-point
/// Gauss rule providing the error estimate.
fn kronrod_panel<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<Complex64> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand(x))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut values = [(Complex64::default(), Complex64::default()); 7];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        kronrod += (lo + hi) * WGK[j];
        res_abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * WG[j / 2];
        }
        *slot = (lo, hi);
    }

    let mean = kronrod * 0.5;
    let mut res_asc = (fc - mean).norm() * WGK[7];
    for (j, (lo, hi)) in values.iter().enumerate() {
        res_asc += ((lo - mean).norm() + (hi - mean).norm()) * WGK[j];
    }

    let width = half.abs();
    let res_abs = res_abs * width;
    let res_asc = res_asc * width;
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error,
    })
}

/// Adaptive integration of `f` over `[a, b]`.
///
/// Subdivides the panel with the largest error estimate until the summed
/// error falls below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite(format!("integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate::default());
    }

    let mut panels = vec![kronrod_panel(&f, a, b)?];
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= cfg.target(value) {
            return Ok(Estimate::new(value, error));
        }

        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        let too_narrow = (p.b - p.a).abs() <= 64.0 * f64::EPSILON * p.a.abs().max(p.b.abs());
        if panels.len() >= cfg.max_subdivisions || too_narrow {
            return Err(Error::NonConvergence {
                a,
                b,
                error,
                subdivisions: panels.len(),
            });
        }

        let left = kronrod_panel(&f, p.a, mid)?;
        let right = kronrod_panel(&f, mid, p.b)?;
        panels[worst] = left;
        panels.push(right);
    }
}

/// Real-valued convenience wrapper around [`integrate`]; returns `(value, error)`.
pub fn integrate_real<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let est = integrate(|x| Complex64::new(f(x), 0.0), a, b, cfg)?;
    Ok((est.value.re, est.error))
}

/// Integrates piecewise over consecutive pairs of `points` (which must be
/// sorted); each piece is integrated adaptively on its own.
pub fn integrate_piecewise<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let mut total = Estimate::default();
    for w in points.windows(2) {
        total += integrate(&f, w[0], w[1], cfg)?;
    }
    Ok(total)
}

/// Breakpoints in `[a, b]` that accumulate geometrically toward `a`, the
/// smallest piece having width `min_width`. Used for endpoint singularities
/// such as t^(-1/2) or the 1/(y + omega) behaviour next to an excised pole.
pub fn graded_toward_start(a: f64, b: f64, ratio: f64, min_width: f64) -> Vec<f64> {
    debug_assert!(ratio > 1.0 && min_width > 0.0);
    let mut offsets = vec![];
    let mut w = min_width;
    while w < b - a {
        offsets.push(w);
        w *= ratio;
    }
    let mut pts = Vec::with_capacity(offsets.len() + 2);
    pts.push(a);
    pts.extend(offsets.into_iter().map(|o| a + o));
    pts.push(b);
    pts
}

/// Mirror image of [`graded_toward_start`]: points accumulate toward `b`.
pub fn graded_toward_end(a: f64, b: f64, ratio: f64, min_width: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = graded_toward_start(0.0, b - a, ratio, min_width)
        .into_iter()
        .map(|o| b - o)
        .collect();
    pts.reverse();
    pts[0] = a;
    pts
}

/// `n` pieces of geometrically growing width between `a > 0` and `b`.
pub fn geometric_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    debug_assert!(a > 0.0 && b > a && n >= 1);
    let ratio = (b / a).powf(1.0 / n as f64);
    let mut pts: Vec<f64> = (0..=n).map(|k| a * ratio.powi(k as i32)).collect();
    pts[n] = b;
    pts
}

/// Splits `[a, b]` into pieces no longer than `max_len` (at least one piece).
pub fn uniform_points(a: f64, b: f64, max_len: f64) -> Vec<f64> {
    let n = (((b - a) / max_len).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    let mut pts: Vec<f64> = (0..=n).map(|k| a + h * k as f64).collect();
    pts[n] = b;
    pts
}

/// Repeated Aitken delta-squared extrapolation of a sequence of partial sums.
/// Returns the last entry of the deepest column that can be formed.
pub fn iterated_aitken(partial_sums: &[Complex64]) -> Complex64 {
    let mut column: Vec<Complex64> = partial_sums.to_vec();
    let mut best = *column.last().unwrap_or(&Complex64::default());
    while column.len() >= 3 {
        let mut next = Vec::with_capacity(column.len() - 2);
        for w in column.windows(3) {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let denom = d2 - d1;
            if denom.norm() <= f64::EPSILON * (w[2].norm() + f64::MIN_POSITIVE) {
                next.push(w[2]);
            } else {
                next.push(w[2] - d2 * d2 / denom);
            }
        }
        if next.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            break;
        }
        best = *next.last().expect("non-empty column");
        column = next;
    }
    best
}

/// Integral of `f` over `[start, inf)` for an oscillatory integrand whose
/// sign pattern repeats every `half_period`. The integral is cut at
/// consecutive half periods (the zeros of the phasor), the chunk integrals
/// are accumulated into partial sums, and the sequence is accelerated with
/// iterated Aitken extrapolation until two successive extrapolations agree.
pub fn oscillatory_tail<F>(
    f: F,
    start: f64,
    half_period: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    const MIN_CHUNKS: usize = 12;
    const MAX_CHUNKS: usize = 400;
    if !(half_period.is_finite() && half_period > 0.0) {
        return Err(Error::InvalidInput("half period must be positive".into()));
    }

    let mut sums = Vec::with_capacity(MAX_CHUNKS);
    let mut running = Complex64::default();
    let mut quad_error = 0.0;
    let mut previous: Option<Complex64> = None;
    let mut lo = start;
    for k in 0..MAX_CHUNKS {
        let hi = start + half_period * (k + 1) as f64;
        let chunk = integrate(&f, lo, hi, cfg)?;
        running += chunk.value;
        quad_error += chunk.error;
        sums.push(running);
        lo = hi;

        if sums.len() >= MIN_CHUNKS && sums.len() % 2 == 0 {
            // Aitken is best behaved on a window of recent partial sums.
            let window = &sums[sums.len().saturating_sub(MIN_CHUNKS)..];
            let extrapolated = iterated_aitken(window);
            if let Some(prev) = previous {
                let change = (extrapolated - prev).norm();
                if change <= cfg.target(extrapolated) {
                    return Ok(Estimate::new(extrapolated, quad_error + change));
                }
            }
            previous = Some(extrapolated);
        }
    }
    Err(Error::NonConvergence {
        a: start,
        b: f64::INFINITY,
        error: f64::NAN,
        subdivisions: MAX_CHUNKS,
    })
}
