//! Registered test signals with ground-truth integrability metadata.
//!
//! The catalog holds causal physical responses (exponential decay, damped
//! oscillator, unit pulse), the two integrability counterexamples
//! `theta(t-1)/t` (L2 but not L1) and `theta(t) theta(1-t)/sqrt(t)` (L1 but
//! not L2), and three negative controls used by the Kramers-Kronig checks:
//! the Heaviside step, the constant 1 and the sign function.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::inv_sqrt_pulse_laplace;

pub const CATALOG_IDS: [&str; 8] = [
    "exp-decay",
    "damped-oscillator",
    "rect-pulse",
    "inv-t-tail",
    "inv-sqrt-pulse",
    "heaviside",
    "constant",
    "sign",
];

/// Smallest time used in place of t = 0 where a signal is singular.
pub const SINGULAR_CLAMP: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Membership::Yes => "Yes",
            Membership::No => "No",
            Membership::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    ExpDecay { alpha: f64 },
    DampedOscillator { alpha: f64, omega0: f64 },
    RectPulse,
    InvTTail,
    InvSqrtPulse,
    Heaviside,
    Constant,
    Sign,
    Combination(Vec<(f64, CausalSignal)>),
}

/// A named time-domain signal plus what is known about it analytically.
///
/// Descriptors are immutable once built; every method is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalSignal {
    id: String,
    shape: Shape,
    parameters: BTreeMap<String, f64>,
    causal: bool,
    l1: Membership,
    l2: Membership,
    lambda0: Option<f64>,
}

fn theta(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}

fn take_params(
    id: &str,
    given: &BTreeMap<String, f64>,
    defaults: &[(&str, f64)],
) -> Result<BTreeMap<String, f64>> {
    for name in given.keys() {
        if !defaults.iter().any(|(d, _)| d == name) {
            return Err(Error::InvalidParameter {
                signal: id.to_string(),
                message: format!("unknown parameter `{name}`"),
            });
        }
    }
    let mut out = BTreeMap::new();
    for (name, default) in defaults {
        let v = given.get(*name).copied().unwrap_or(*default);
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                signal: id.to_string(),
                message: format!("parameter `{name}` must be finite"),
            });
        }
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

fn require_positive(id: &str, params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    let v = params[name];
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            signal: id.to_string(),
            message: format!("`{name}` must be > 0 (got {v})"),
        })
    }
}

/// Builds the catalog signal `id` with the given parameter overrides.
///
/// `exp-decay` takes `alpha` (default 1); `damped-oscillator` takes `alpha`
/// (default 1) and `omega0` (default 2). The other entries take none.
pub fn catalog_get(id: &str, parameters: &BTreeMap<String, f64>) -> Result<CausalSignal> {
    use Membership::*;
    let (shape, params, causal, l1, l2, lambda0) = match id {
        "exp-decay" => {
            let p = take_params(id, parameters, &[("alpha", 1.0)])?;
            let alpha = require_positive(id, &p, "alpha")?;
            (Shape::ExpDecay { alpha }, p, true, Yes, Yes, Some(-alpha))
        }
        "damped-oscillator" => {
            let p = take_params(id, parameters, &[("alpha", 1.0), ("omega0", 2.0)])?;
            let alpha = require_positive(id, &p, "alpha")?;
            let omega0 = require_positive(id, &p, "omega0")?;
            (
                Shape::DampedOscillator { alpha, omega0 },
                p,
                true,
                Yes,
                Yes,
                Some(-alpha),
            )
        }
        "rect-pulse" => (
            Shape::RectPulse,
            take_params(id, parameters, &[])?,
            true,
            Yes,
            Yes,
            Some(f64::NEG_INFINITY),
        ),
        "inv-t-tail" => (
            Shape::InvTTail,
            take_params(id, parameters, &[])?,
            true,
            No,
            Yes,
            Some(0.0),
        ),
        "inv-sqrt-pulse" => (
            Shape::InvSqrtPulse,
            take_params(id, parameters, &[])?,
            true,
            Yes,
            No,
            Some(f64::NEG_INFINITY),
        ),
        "heaviside" => (
            Shape::Heaviside,
            take_params(id, parameters, &[])?,
            true,
            No,
            No,
            Some(0.0),
        ),
        "constant" => (
            Shape::Constant,
            take_params(id, parameters, &[])?,
            false,
            No,
            No,
            None,
        ),
        "sign" => (
            Shape::Sign,
            take_params(id, parameters, &[])?,
            false,
            No,
            No,
            None,
        ),
        other => return Err(Error::UnknownSignal(other.to_string())),
    };
    Ok(CausalSignal {
        id: id.to_string(),
        shape,
        parameters: params,
        causal,
        l1,
        l2,
        lambda0,
    })
}

/// Catalog entry with default parameters.
pub fn catalog_default(id: &str) -> Result<CausalSignal> {
    catalog_get(id, &BTreeMap::new())
}

impl CausalSignal {
    /// `sum_k c_k f_k(t)`. Integrability is only asserted when every term is
    /// in the class; the abscissa is the largest of the terms'.
    pub fn linear_combination(terms: Vec<(f64, CausalSignal)>) -> Result<CausalSignal> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("empty linear combination".into()));
        }
        if terms.iter().any(|(c, _)| !c.is_finite()) {
            return Err(Error::NonFinite("combination coefficient".into()));
        }
        let all = |m: fn(&CausalSignal) -> Membership| {
            if terms.iter().all(|(_, s)| m(s) == Membership::Yes) {
                Membership::Yes
            } else {
                Membership::Unknown
            }
        };
        let l1 = all(|s| s.l1);
        let l2 = all(|s| s.l2);
        let causal = terms.iter().all(|(_, s)| s.causal);
        let lambda0 = terms
            .iter()
            .map(|(_, s)| s.lambda0)
            .try_fold(f64::NEG_INFINITY, |acc, l| l.map(|v| acc.max(v)));
        let id = terms
            .iter()
            .map(|(c, s)| format!("{c}*{}", s.id))
            .collect::<Vec<_>>()
            .join("+");
        Ok(CausalSignal {
            id,
            shape: Shape::Combination(terms),
            parameters: BTreeMap::new(),
            causal,
            l1,
            l2,
            lambda0,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn parameters(&self) -> &BTreeMap<String, f64> {
        &self.parameters
    }

    pub fn is_causal(&self) -> bool {
        self.causal
    }

    pub fn l1_membership(&self) -> Membership {
        self.l1
    }

    pub fn l2_membership(&self) -> Membership {
        self.l2
    }

    /// Abscissa of absolute convergence; `-inf` for compactly supported
    /// signals, `None` where the one-sided transform is not meaningful.
    pub fn lambda0(&self) -> Option<f64> {
        self.lambda0
    }

    /// Heaviside, constant and sign: the failure cases the Kramers-Kronig
    /// checks must reject.
    pub fn is_negative_control(&self) -> bool {
        matches!(self.shape, Shape::Heaviside | Shape::Constant | Shape::Sign)
    }

    /// Amplitude at `t`; exactly 0 for t < 0 when causal. The 1/sqrt(t)
    /// pulse returns its value at [`SINGULAR_CLAMP`] for t = 0.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("t = {t}")));
        }
        Ok(self.amplitude(t))
    }

    pub(crate) fn amplitude(&self, t: f64) -> f64 {
        match &self.shape {
            // The step gates before the exponential can overflow.
            Shape::ExpDecay { .. } | Shape::DampedOscillator { .. } if t < 0.0 => 0.0,
            Shape::ExpDecay { alpha } => (-alpha * t).exp(),
            Shape::DampedOscillator { alpha, omega0 } => (-alpha * t).exp() * (omega0 * t).sin(),
            Shape::RectPulse => theta(t) * theta(1.0 - t),
            Shape::InvTTail => {
                if t >= 1.0 {
                    1.0 / t
                } else {
                    0.0
                }
            }
            Shape::InvSqrtPulse => {
                if (0.0..=1.0).contains(&t) {
                    1.0 / t.max(SINGULAR_CLAMP).sqrt()
                } else {
                    0.0
                }
            }
            Shape::Heaviside => theta(t),
            Shape::Constant => 1.0,
            Shape::Sign => {
                if t > 0.0 {
                    1.0
                } else if t < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Shape::Combination(terms) => terms.iter().map(|(c, s)| c * s.amplitude(t)).sum(),
        }
    }

    /// `e^{-s' t} f(t)` with exponential factors merged before evaluation,
    /// so a growing weight never meets an underflowed amplitude.
    pub(crate) fn damped_amplitude(&self, t: f64, s_prime: f64) -> f64 {
        match &self.shape {
            Shape::ExpDecay { .. } | Shape::DampedOscillator { .. } if t < 0.0 => 0.0,
            Shape::ExpDecay { alpha } => (-(alpha + s_prime) * t).exp(),
            Shape::DampedOscillator { alpha, omega0 } => {
                (-(alpha + s_prime) * t).exp() * (omega0 * t).sin()
            }
            Shape::Combination(terms) => terms
                .iter()
                .map(|(c, s)| c * s.damped_amplitude(t, s_prime))
                .sum(),
            _ => match self.amplitude(t) {
                a if a == 0.0 => 0.0,
                a => a * (-s_prime * t).exp(),
            },
        }
    }

    pub fn has_closed_form_laplace(&self) -> bool {
        match &self.shape {
            Shape::ExpDecay { .. }
            | Shape::DampedOscillator { .. }
            | Shape::RectPulse
            | Shape::InvSqrtPulse
            | Shape::Heaviside => true,
            Shape::Combination(terms) => terms.iter().all(|(_, s)| s.has_closed_form_laplace()),
            _ => false,
        }
    }

    /// Analytic Laplace transform where one is registered.
    pub fn closed_form_laplace(&self, s: Complex64) -> Option<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match &self.shape {
            Shape::ExpDecay { alpha } => Some(one / (s + alpha)),
            Shape::DampedOscillator { alpha, omega0 } => {
                let d = s + alpha;
                Some(Complex64::new(*omega0, 0.0) / (d * d + omega0 * omega0))
            }
            Shape::RectPulse => Some(one_minus_exp_over(s)),
            Shape::InvSqrtPulse => Some(inv_sqrt_pulse_laplace(s)),
            Shape::Heaviside => Some(one / s),
            Shape::Combination(terms) => terms
                .iter()
                .map(|(c, sig)| sig.closed_form_laplace(s).map(|v| v * c))
                .sum(),
            _ => None,
        }
    }

    /// Analytic Fourier transform `int e^{i w t} f(t) dt` for L1 entries.
    pub fn closed_form_fourier(&self, omega: f64) -> Option<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let iw = Complex64::new(0.0, omega);
        match &self.shape {
            Shape::ExpDecay { alpha } => Some(one / (alpha - iw)),
            Shape::DampedOscillator { alpha, omega0 } => {
                let d = alpha - iw;
                Some(Complex64::new(*omega0, 0.0) / (d * d + omega0 * omega0))
            }
            Shape::RectPulse => {
                // (e^{i w} - 1) / (i w)
                if omega.abs() < 1e-4 {
                    Some(one + iw / 2.0 + iw * iw / 6.0 + iw * iw * iw / 24.0)
                } else {
                    Some((iw.exp() - 1.0) / iw)
                }
            }
            Shape::InvSqrtPulse => Some(inv_sqrt_pulse_laplace(-iw)),
            Shape::Combination(terms) => terms
                .iter()
                .map(|(c, sig)| sig.closed_form_fourier(omega).map(|v| v * c))
                .sum(),
            _ => None,
        }
    }

    /// Power `p` of the |w|^(-p) decay of the Fourier transform, for the
    /// entries whose spectrum decays like an integer power.
    pub fn spectral_decay_order(&self) -> Option<u32> {
        match &self.shape {
            Shape::ExpDecay { .. } | Shape::RectPulse => Some(1),
            Shape::DampedOscillator { .. } => Some(2),
            Shape::Combination(terms) => terms
                .iter()
                .map(|(_, s)| s.spectral_decay_order())
                .try_fold(u32::MAX, |acc, o| o.map(|o| acc.min(o))),
            _ => None,
        }
    }

    /// Formal transform samples for the negative controls: `i/w` for the
    /// step (regular part only), `1` for the constant read as a spectrum,
    /// and `2i/w` for the sign function.
    pub fn formal_spectrum(&self, omega: f64) -> Option<Complex64> {
        match self.shape {
            Shape::Heaviside => Some(Complex64::new(0.0, 1.0 / omega)),
            Shape::Constant => Some(Complex64::new(1.0, 0.0)),
            Shape::Sign => Some(Complex64::new(0.0, 2.0 / omega)),
            _ => None,
        }
    }

    /// End of the support when it is compact.
    pub fn support_end(&self) -> Option<f64> {
        match &self.shape {
            Shape::RectPulse | Shape::InvSqrtPulse => Some(1.0),
            Shape::Combination(terms) => terms
                .iter()
                .map(|(_, s)| s.support_end())
                .try_fold(0.0_f64, |acc, e| e.map(|e| acc.max(e))),
            _ => None,
        }
    }

    /// Jump discontinuities in t > 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::RectPulse | Shape::InvTTail | Shape::InvSqrtPulse => vec![1.0],
            Shape::Combination(terms) => {
                let mut v: Vec<f64> = terms.iter().flat_map(|(_, s)| s.breakpoints()).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            }
            _ => vec![],
        }
    }

    /// True when the signal has an integrable singularity at t = 0 that
    /// calls for a graded mesh.
    pub fn singular_at_origin(&self) -> bool {
        match &self.shape {
            Shape::InvSqrtPulse => true,
            Shape::Combination(terms) => terms.iter().any(|(_, s)| s.singular_at_origin()),
            _ => false,
        }
    }

    /// Upper bound on `int_T^inf e^{-s' t} |f(t)| dt`, or `None` when no
    /// such bound is available (the tail does not converge absolutely).
    pub fn laplace_tail_bound(&self, t: f64, s_prime: f64) -> Option<f64> {
        match &self.shape {
            Shape::ExpDecay { alpha } | Shape::DampedOscillator { alpha, .. } => {
                let rate = s_prime + alpha;
                (rate > 0.0).then(|| (-rate * t).exp() / rate)
            }
            Shape::RectPulse | Shape::InvSqrtPulse => Some(if t >= 1.0 { 0.0 } else { f64::INFINITY }),
            Shape::InvTTail => {
                (s_prime > 0.0 && t >= 1.0).then(|| (-s_prime * t).exp() / (s_prime * t))
            }
            Shape::Heaviside => (s_prime > 0.0).then(|| (-s_prime * t).exp() / s_prime),
            Shape::Constant | Shape::Sign => None,
            Shape::Combination(terms) => terms
                .iter()
                .map(|(c, s)| s.laplace_tail_bound(t, s_prime).map(|b| c.abs() * b))
                .sum(),
        }
    }
}

/// `(1 - e^{-s}) / s`, continuous through s = 0.
fn one_minus_exp_over(s: Complex64) -> Complex64 {
    if s.norm() < 1e-4 {
        Complex64::new(1.0, 0.0) - s / 2.0 + s * s / 6.0 - s * s * s / 24.0
    } else {
        (Complex64::new(1.0, 0.0) - (-s).exp()) / s
    }
}
