use std::collections::BTreeMap;
use std::path::Path;

use kk_core::catalog::{catalog_get, CausalSignal, Membership};
use kk_core::contour::{integrate_contour, ContourSpec};
use kk_core::hilbert::{
    kk_check_with, negative_control_spectrum, spectrum_from_signal, Engine, FrequencyGrid, KkReport, KkVerdict,
    Reconstruction, SpectralOptions, Spectrum, TailFit, TailModel, Thresholds,
};
use kk_core::integrability::{classify_integrability, IntegrabilityVerdict, DEFAULT_SCHEDULE, DEFAULT_TOL};
use kk_core::quadrature::QuadratureConfig;
use kk_core::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::read_spectrum;
use crate::output::{plot_csv, to_json, write_output};
use crate::resample::Pchip;
use crate::parse::{parse_grid, parse_params, TailChoice};
use crate::{CheckArgs, ClassifyArgs, ContourArgs, DemoArgs, KkArgs, SignalArgs};

#[derive(Serialize)]
struct Report<C, R, V> {
    tool_version: &'static str,
    subcommand: &'static str,
    config: C,
    results: R,
    verdict: V,
}

fn emit<C: Serialize, R: Serialize, V: Serialize>(
    subcommand: &'static str,
    config: C,
    results: R,
    verdict: V,
    path: Option<&Path>,
) -> CliResult<()> {
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config,
        results,
        verdict,
    };
    write_output(path, &to_json(&report)?)
}

fn load_signal(args: &SignalArgs) -> CliResult<(CausalSignal, BTreeMap<String, f64>)> {
    let params = parse_params(&args.params)?;
    let signal = catalog_get(&args.signal, &params)?;
    let effective = signal.parameters().clone();
    Ok((signal, effective))
}

fn tail_label(tail: TailModel) -> String {
    match tail {
        TailModel::None => "none".into(),
        TailModel::Rational(k) => format!("rational:{k}"),
    }
}

fn thresholds(args: &KkArgs) -> CliResult<Thresholds> {
    let mut t = Thresholds::default();
    if let Some(v) = args.consistent_below {
        t.consistent_below = v;
    }
    if let Some(v) = args.inconsistent_above {
        t.inconsistent_above = v;
    }
    t.validate()?;
    Ok(t)
}

fn verdict_exit(verdict: KkVerdict) -> u8 {
    match verdict {
        KkVerdict::Consistent => 0,
        KkVerdict::Inconsistent => 2,
        KkVerdict::Inconclusive => 3,
    }
}

#[derive(Serialize)]
struct KkResults {
    tail_model: String,
    #[serde(flatten)]
    report: KkReport,
    warnings: Vec<String>,
}

/// Runs the check, writes report and plot, returns the exit code.
fn finish_kk<C: Serialize>(
    subcommand: &'static str,
    config: C,
    spectrum: &Spectrum,
    args: &KkArgs,
    thresholds: &Thresholds,
    warnings: Vec<String>,
) -> CliResult<u8> {
    let engine: Engine = args.engine.into();
    let (report, rec) = kk_check_with(spectrum, engine, thresholds, &SpectralOptions::default())?;
    if let Some(path) = &args.plot {
        write_output(Some(path), &plot_bytes(&rec)?)?;
    }
    let verdict = report.verdict;
    let results = KkResults {
        tail_model: tail_label(spectrum.tail_model),
        report,
        warnings,
    };
    emit(subcommand, config, results, verdict, args.report.as_deref())?;
    Ok(verdict_exit(verdict))
}

fn plot_bytes(rec: &Reconstruction) -> CliResult<Vec<u8>> {
    plot_csv([&rec.omega, &rec.real_given, &rec.imag_given, &rec.real, &rec.imag])
}

#[derive(Serialize)]
struct DemoConfig<'a> {
    signal: &'a str,
    parameters: BTreeMap<String, f64>,
    grid: FrequencyGrid,
    engine: Engine,
    tail: String,
    thresholds: Thresholds,
}

pub fn demo(args: &DemoArgs) -> CliResult<u8> {
    let (signal, parameters) = load_signal(&args.signal)?;
    let grid = parse_grid(&args.grid)?;
    let thresholds = thresholds(&args.kk)?;
    let mut spectrum = if signal.l1_membership() == Membership::Yes {
        spectrum_from_signal(&signal, &grid, &QuadratureConfig::default())?
    } else if signal.is_negative_control() {
        negative_control_spectrum(&signal, &grid)?
    } else {
        return Err(CliError::Usage(format!(
            "`{}` is neither absolutely integrable nor a negative control; its spectrum is not defined pointwise",
            signal.id()
        )));
    };
    if let TailChoice::Fixed(tail) = args.kk.tail {
        spectrum = Spectrum::new(grid, spectrum.values, tail)?;
    }
    let config = DemoConfig {
        signal: signal.id(),
        parameters,
        grid,
        engine: args.kk.engine.into(),
        tail: tail_label(spectrum.tail_model),
        thresholds,
    };
    finish_kk("demo", config, &spectrum, &args.kk, &thresholds, vec![])
}

#[derive(Serialize)]
struct ComplexValue {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ContourConfig<'a> {
    signal: &'a str,
    parameters: BTreeMap<String, f64>,
    omega: f64,
    radius: f64,
    epsilon: f64,
    quadrature: QuadratureConfig,
}

#[derive(Serialize)]
struct Segments {
    lower: ComplexValue,
    upper: ComplexValue,
    small_arc: ComplexValue,
    large_arc: ComplexValue,
}

#[derive(Serialize)]
struct ContourResults {
    segments: Segments,
    total: ComplexValue,
    total_abs: f64,
    error_budget: f64,
    closes: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum ContourVerdict {
    Closed,
    NotClosed,
}

pub fn contour(args: &ContourArgs) -> CliResult<u8> {
    let (signal, parameters) = load_signal(&args.signal)?;
    if signal.l1_membership() != Membership::Yes {
        return Err(kk_core::Error::NotL1(signal.id().to_string()).into());
    }
    if !signal.has_closed_form_laplace() {
        return Err(CliError::Usage(format!("`{}` has no closed-form transform", signal.id())));
    }
    let spec = ContourSpec::new(args.omega, args.radius, args.epsilon)?;
    let cfg = QuadratureConfig::default();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let b = integrate_contour(|s| signal.closed_form_laplace(s).unwrap_or(nan), &spec, &cfg)?;
    let closes = b.closes();
    let results = ContourResults {
        segments: Segments {
            lower: b.segment_lower.into(),
            upper: b.segment_upper.into(),
            small_arc: b.small_arc.into(),
            large_arc: b.large_arc.into(),
        },
        total: b.total.into(),
        total_abs: b.total.norm(),
        error_budget: b.error_budget,
        closes,
    };
    let config = ContourConfig {
        signal: signal.id(),
        parameters,
        omega: args.omega,
        radius: args.radius,
        epsilon: args.epsilon,
        quadrature: cfg,
    };
    let verdict = if closes {
        ContourVerdict::Closed
    } else {
        ContourVerdict::NotClosed
    };
    emit("contour", config, results, verdict, args.out.as_deref())?;
    Ok(if closes { 0 } else { 2 })
}

#[derive(Serialize)]
struct ClassifyConfig<'a> {
    signal: &'a str,
    parameters: BTreeMap<String, f64>,
    schedule: &'a [f64],
    tol: f64,
}

#[derive(Serialize)]
struct Expected {
    l1: Membership,
    l2: Membership,
}

#[derive(Serialize)]
struct ClassifyResults {
    #[serde(flatten)]
    verdict: IntegrabilityVerdict,
    expected: Expected,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum ClassifyVerdict {
    Match,
    Mismatch,
}

pub fn classify(args: &ClassifyArgs) -> CliResult<u8> {
    let (signal, parameters) = load_signal(&args.signal)?;
    let verdict = classify_integrability(&signal, &DEFAULT_SCHEDULE, DEFAULT_TOL)?;
    let expected = Expected {
        l1: signal.l1_membership(),
        l2: signal.l2_membership(),
    };
    let matches = verdict.l1.agrees_with(expected.l1) && verdict.l2.agrees_with(expected.l2);
    let config = ClassifyConfig {
        signal: signal.id(),
        parameters,
        schedule: &DEFAULT_SCHEDULE,
        tol: DEFAULT_TOL,
    };
    let results = ClassifyResults { verdict, expected };
    let outcome = if matches {
        ClassifyVerdict::Match
    } else {
        ClassifyVerdict::Mismatch
    };
    emit("classify", config, results, outcome, args.out.as_deref())?;
    Ok(if matches { 0 } else { 2 })
}

#[derive(Serialize)]
struct CheckConfig<'a> {
    input: String,
    columns: &'a [String; 3],
    grid: FrequencyGrid,
    engine: Engine,
    tail: String,
    thresholds: Thresholds,
}

/// Rational order with the smallest worst-component misfit.
fn auto_tail(re: &[f64], im: &[f64], grid: &FrequencyGrid) -> TailModel {
    if !grid.straddles_zero() {
        return TailModel::None;
    }
    let mut best = (1, f64::INFINITY);
    for k in 1..=3 {
        let m = TailFit::from_samples(re, grid, k)
            .misfit
            .max(TailFit::from_samples(im, grid, k).misfit);
        if m < best.1 {
            best = (k, m);
        }
    }
    TailModel::Rational(best.0)
}

pub fn check(args: &CheckArgs) -> CliResult<u8> {
    let data = read_spectrum(&args.input, &args.columns)?;
    let (lo, hi) = (data.omega[0], *data.omega.last().unwrap());
    let grid = match &args.grid {
        Some(text) => parse_grid(text)?,
        None => {
            let n = data.omega.len().max(64);
            FrequencyGrid::new(lo, hi, n + n % 2)?
        }
    };
    let thresholds = thresholds(&args.kk)?;

    // Extrapolation would invent data; a little rounding slack is allowed.
    let slack = 1e-9 * (hi - lo);
    if grid.omega_min < lo - slack || grid.omega_max > hi + slack {
        return Err(CliError::Input {
            path: args.input.clone(),
            message: format!(
                "grid [{}, {}] extends beyond the data range [{lo}, {hi}]",
                grid.omega_min, grid.omega_max
            ),
        });
    }
    let mut warnings = vec![];
    if grid.omega_min > lo + slack || grid.omega_max < hi - slack {
        warnings.push(format!(
            "grid [{}, {}] is narrower than the data range [{lo}, {hi}]; samples outside it are ignored",
            grid.omega_min, grid.omega_max
        ));
    }

    let points = grid.points();
    let clamp = |w: f64| w.clamp(lo, hi);
    let re_fit = Pchip::new(&data.omega, &data.re);
    let im_fit = Pchip::new(&data.omega, &data.im);
    let re: Vec<f64> = points.iter().map(|&w| re_fit.eval(clamp(w))).collect();
    let im: Vec<f64> = points.iter().map(|&w| im_fit.eval(clamp(w))).collect();
    let tail = match args.kk.tail {
        TailChoice::Fixed(t) => t,
        TailChoice::Auto => auto_tail(&re, &im, &grid),
    };
    let values = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
    let spectrum = Spectrum::new(grid, values, tail)?;

    let config = CheckConfig {
        input: args.input.display().to_string(),
        columns: &args.columns,
        grid,
        engine: args.kk.engine.into(),
        tail: tail_label(tail),
        thresholds,
    };
    finish_kk("check", config, &spectrum, &args.kk, &thresholds, warnings)
}
