use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

#[derive(Parser, Debug)]
#[command(name = "kontsevich", version, about = "Exact graph calculus for the Kontsevich star-product through ħ³")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the star-product series.
    Expand(ExpandArgs),
    /// Associator term counts, order breakdown, and optional evaluation.
    Assoc(AssocArgs),
    /// Check that the ħ³ associator is absorbed by the Jacobi consequences.
    VerifyClaim(VerifyArgs),
    /// Apply a gauge transformation to the star-product.
    Gauge(GaugeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// so(3): P¹² = u3, P²³ = u1, P³¹ = u2.
    So3,
    /// P¹² = u3, P¹³ = u1·u2; violates Jacobi.
    Witness,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugePreset {
    Identity,
    /// id + ħ²/12 · eye.
    LoopRemoval,
    /// Seeded rational coefficients.
    Random,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Only this power of ħ.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
    pub grade: Option<u8>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    /// Poisson structure JSON: {"dim": n, "entries": [{"i", "j", "poly"}]} with i < j.
    #[arg(long, conflicts_with = "preset")]
    pub poisson: Option<PathBuf>,
    /// Built-in bivector instead of a file.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Expected dimension; checked against the structure.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Seed for the random arguments.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Argument polynomial; give one per sink to override the random ones.
    #[arg(long = "arg")]
    pub args: Vec<String>,
}

#[derive(Args, Debug)]
pub struct AssocArgs {
    #[command(flatten)]
    pub poisson: PoissonArgs,
    /// Highest power of ħ evaluated.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=3))]
    pub order: u8,
    /// Star-product series file to use instead of the built-in one.
    #[arg(long)]
    pub star: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the reduced associator series (line format) to this file.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Also recover the coefficients by exact linear solving.
    #[arg(long)]
    pub solve: bool,
    /// Three-sink series whose ħ³ part replaces the computed associator.
    #[arg(long)]
    pub series: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GaugeArgs {
    #[arg(long, value_enum, conflicts_with = "coefficients")]
    pub preset: Option<GaugePreset>,
    /// Gauge coefficient JSON: {"I_loop": "p/q", "I0": ..., "I7": ...}.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    /// Seed for the random preset.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Star-product series file to gauge instead of the built-in one.
    #[arg(long)]
    pub star: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand(a) => commands::expand(&a),
        Command::Assoc(a) => commands::assoc(&a),
        Command::VerifyClaim(a) => commands::verify_claim(&a),
        Command::Gauge(a) => commands::gauge(&a),
    };
    match result {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
