use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod verify;

/// Build and check entanglement witnesses from mutually unbiased bases.
///
/// Exit codes: 0 ok or inconclusive, 2 usage or input error, 3 entanglement
/// detected, 4 a verification check failed.
#[derive(Debug, Parser)]
#[command(name = "mubw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a witness and write it together with its spec.
    Build(BuildArgs),
    /// PPT, realignment and witness values for a state.
    CheckState(CheckStateArgs),
    /// Minimise Tr(rho W) over a grid of qutrit torus witnesses.
    Scan(ScanArgs),
    /// Label an operator as PSD, proper witness, not block-positive or inconclusive.
    Classify(ClassifyArgs),
    /// Run a verification suite and print worst margins.
    Verify(VerifyArgs),
    /// Write a family of mutually unbiased bases as JSON.
    ExportMubs(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long = "d")]
    d: usize,
    /// Number of bases; defaults to the number of rotations, or d + 1.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Rotation angles about n* (d = 3 only), e.g. `pi,pi,0,0` or `2pi/3,0`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["perms", "matrix_file"])]
    angles: Option<String>,
    /// 0-based permutation images, one per basis: `1,2,0;0,1,2;...` or repeated flags.
    #[arg(long, conflicts_with = "matrix_file")]
    perms: Vec<String>,
    /// JSON list of rotation specs (`{"angle":..}`, `{"perm":[..]}`, `{"matrix":[[..]]}`) or of matrices.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
    /// Bases to use instead of the built-in family.
    #[arg(long)]
    mubs_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckStateArgs {
    /// Matrix JSON file, or `canonical` for the 3x3 PPT entangled state.
    #[arg(long)]
    state: String,
    /// Witness files (repeatable).
    #[arg(long)]
    witness: Vec<PathBuf>,
    /// Additional qutrit torus witness given by angles.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Local dimension; inferred from a square state by default.
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value = "canonical")]
    state: String,
    /// `torus` or `single-1` .. `single-4` (one free angle, the others zero).
    #[arg(long, default_value = "torus")]
    family: String,
    /// Number of angles for `torus`.
    #[arg(long = "L", default_value_t = 4)]
    l: usize,
    /// Points per angle.
    #[arg(long, default_value_t = mubw_core::detect::DEFAULT_GRID)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "angles")]
    witness: Option<PathBuf>,
    /// Classify the qutrit torus witness at these angles.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Local dimension; inferred by default.
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    conv_tol: f64,
    #[arg(long, env = "MUBW_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Mub,
    Weyl,
    Theorem1,
    Closedform,
    PaperNumbers,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "MUBW_SEED", default_value_t = 0)]
    seed: u64,
    /// `json` prints a machine-readable summary instead of PASS/FAIL lines.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long = "d")]
    d: usize,
    /// `d3-canonical` or `prime-weyl`; defaults to the canonical family for d = 3.
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => commands::build(a),
        Command::CheckState(a) => commands::check_state(a),
        Command::Scan(a) => commands::scan(a),
        Command::Classify(a) => commands::classify(a),
        Command::Verify(a) => verify::run(a),
        Command::ExportMubs(a) => commands::export_mubs(a),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
