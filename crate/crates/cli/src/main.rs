use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod input;
mod output;
mod resample;
mod parse;

use parse::TailChoice;

/// Kramers-Kronig toolkit: catalog demos, contour checks, integrability
/// classification and consistency checks of measured spectra.
#[derive(Debug, Parser)]
#[command(name = "kk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a catalog spectrum and check it for KK consistency.
    Demo(DemoArgs),
    /// Integrate around the indented half-disc contour.
    Contour(ContourArgs),
    /// Probe L1 and L2 membership of a catalog signal.
    Classify(ClassifyArgs),
    /// Check a spectrum read from CSV for KK consistency.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Pv,
    Spectral,
}

impl From<EngineArg> for kk_core::hilbert::Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Pv => Self::Pv,
            EngineArg::Spectral => Self::Spectral,
        }
    }
}

#[derive(Debug, Args)]
struct SignalArgs {
    /// Catalog id, e.g. exp-decay.
    #[arg(long)]
    signal: String,
    /// Parameter override, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Debug, Args)]
struct KkArgs {
    #[arg(long, value_enum, default_value = "pv")]
    engine: EngineArg,
    /// Report JSON; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Reconstruction CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// auto, none or rational:K.
    #[arg(long, default_value = "auto", value_parser = parse::parse_tail)]
    tail: TailChoice,
    #[arg(long)]
    consistent_below: Option<f64>,
    #[arg(long)]
    inconsistent_above: Option<f64>,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[command(flatten)]
    signal: SignalArgs,
    #[arg(long, value_name = "MIN:MAX:N", default_value = "-50:50:4096", allow_hyphen_values = true)]
    grid: String,
    #[command(flatten)]
    kk: KkArgs,
}

#[derive(Debug, Args)]
struct ContourArgs {
    #[command(flatten)]
    signal: SignalArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long, default_value_t = 100.0)]
    radius: f64,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    signal: SignalArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    /// Header names of the frequency, real and imaginary columns.
    #[arg(long, default_value = "omega,re,im", value_parser = parse::parse_columns)]
    columns: [String; 3],
    /// Uniform analysis grid; defaults to the data range.
    #[arg(long, value_name = "MIN:MAX:N", allow_hyphen_values = true)]
    grid: Option<String>,
    #[command(flatten)]
    kk: KkArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Demo(a) => commands::demo(&a),
        Command::Contour(a) => commands::contour(&a),
        Command::Classify(a) => commands::classify(&a),
        Command::Check(a) => commands::check(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
