//! `ropes`: generate, measure and verify thick curves on the unit sphere.

mod commands;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ropes_core::Family;

/// Exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const GATE: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const PARSE: u8 = 65;
}

#[derive(Debug, Parser)]
#[command(name = "ropes", version, about = "Thick curves on the unit sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a closed or open solution and write it out.
    Generate(GenerateArgs),
    /// Run thickness, coverage, shape and endpoint checks on a curve file.
    Verify(VerifyArgs),
    /// Measure the thickness of a curve file.
    Thickness(ThicknessArgs),
    /// List the closed solutions for one n or a range of n.
    Enumerate(EnumerateArgs),
    /// Convert a curve file to OBJ, PLY or SVG.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Obj,
    Ply,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Obj,
    Ply,
    Svg,
}

impl From<ExportFormat> for Format {
    fn from(f: ExportFormat) -> Format {
        match f {
            ExportFormat::Obj => Format::Obj,
            ExportFormat::Ply => Format::Ply,
            ExportFormat::Svg => Format::Svg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Brute,
    Accelerated,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    /// Samples per arc for OBJ and PLY output.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
    pub samples_per_arc: u32,
    /// Write a tube mesh of radius sin(theta) instead of a polyline.
    #[arg(long)]
    pub tube: bool,
    /// Output path; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_family, default_value = "closed")]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub mesh: MeshArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Curve file (format version 1 JSON).
    pub input: PathBuf,
    /// Tube half-width to verify against; defaults to the file's family
    /// value, else to the measured thickness.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of coverage grid points.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid_size: u64,
    /// Use a seeded random grid instead of the Fibonacci lattice.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples used for the thickness measurement.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u32).range(3..))]
    pub samples: u32,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ThicknessArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u32).range(3..))]
    pub samples: u32,
    #[arg(long, value_enum, default_value_t = Engine::Accelerated)]
    pub engine: Engine,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct NSelection {
    #[arg(long)]
    pub n: Option<u32>,
    /// Inclusive range such as `2..12`.
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub select: NSelection,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
    #[command(flatten)]
    pub mesh: MeshArgs,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ropes_core::Error> for Failure {
    fn from(e: ropes_core::Error) -> Self {
        use ropes_core::Error as E;
        let code = match &e {
            E::Io(_) => exit::IO,
            E::Parse(_) => exit::PARSE,
            E::NotCoprime { .. } | E::ConstructionFailed { .. } => exit::GATE,
            E::InvalidN { .. } | E::InvalidK { .. } | E::InvalidTheta(_) => exit::USAGE,
            _ => exit::GATE,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Thickness(args) => commands::thickness(&args),
        Command::Enumerate(args) => commands::enumerate(&args),
        Command::Export(args) => commands::export(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("ropes: {failure}");
            }
            ExitCode::from(failure.code)
        }
    }
}
