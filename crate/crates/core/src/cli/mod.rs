//! Command-line surface: sampled spectrum curves, determinant grids,
//! orbit traces, winding/coupling reports, and the seeded verification
//! suite. Exit codes: 0 success, 1 verification failure, 2 usage error.

pub mod commands;
pub mod output;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use output::OutputFormat;

#[derive(Parser, Debug)]
#[command(
    name = "jspec",
    version,
    about = "Joint spectra of dihedral and self-similar operator pencils"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample spectrum curves for a pencil family.
    Spectrum(SpectrumArgs),
    /// Evaluate the Fuglede-Kadison determinant over a real (z1, z2) grid.
    DetGrid(DetGridArgs),
    /// Iterate a renormalization map and emit the orbit.
    Dynamics(DynamicsArgs),
    /// Winding number and homology coupling of a closed path.
    Winding(WindingArgs),
    /// Run the seeded verification suite.
    Verify(VerifyArgs),
}

/// Where and how command output is written.
#[derive(Args, Debug, Clone)]
pub struct OutputSpec {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Destination path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFamily {
    Dinf,
    Dn,
    Projections,
    Grig,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Pencil family to sample.
    #[arg(long, value_enum)]
    pub family: SpectrumFamily,
    /// Level / order parameter; required for dn and grig.
    #[arg(long)]
    pub n: Option<u32>,
    /// Slice parameters "l1,l2" for dinf and projections.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub slice: String,
    /// Points per parameter sweep.
    #[arg(long, default_value_t = 101)]
    pub x_steps: usize,
    #[command(flatten)]
    pub output: OutputSpec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetMethod {
    Closed,
    Quadrature,
}

#[derive(Args, Debug)]
pub struct DetGridArgs {
    /// Range "lo,hi" swept by z1 along the real axis.
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub re_range: String,
    /// Range "lo,hi" swept by z2 along the real axis.
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub im_range: String,
    /// Grid points per axis.
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    /// Determinant evaluation method.
    #[arg(long, value_enum, default_value_t = DetMethod::Closed)]
    pub method: DetMethod,
    #[command(flatten)]
    pub output: OutputSpec,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    /// Map to iterate: F, F1, F2, or alpha.
    #[arg(long)]
    pub map: String,
    /// Start point as a flat "re,im,..." list, one pair per coordinate.
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,
    /// Iteration count.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputSpec,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct WindingPathSource {
    /// JSON path file: { "closed": bool, "samples": [[z1_re, z1_im, z2_re, z2_im], ...] }.
    #[arg(long)]
    pub path_file: Option<PathBuf>,
    /// Built-in path; currently gamma-half-circle.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Args, Debug)]
pub struct WindingArgs {
    #[command(flatten)]
    pub source: WindingPathSource,
    /// Sample count for built-in paths.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Reverse the path orientation.
    #[arg(long)]
    pub reverse: bool,
    /// Traverse the path twice.
    #[arg(long)]
    pub double: bool,
    #[command(flatten)]
    pub output: OutputSpec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Spectrum,
    Det,
    Grig,
    Dynamics,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Which checks to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// RNG seed for all randomized checks.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// How a command invocation failed, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparsable input, or data the computation rejects: exit 2.
    Usage(String),
    /// The verification suite found a failing check: exit 1.
    VerificationFailed,
    /// Stdout consumer went away (e.g. `jspec ... | head`): quiet exit 0.
    Pipe,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::Pipe
        } else {
            CliError::Usage(format!("io error: {e}"))
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum(args) => commands::cmd_spectrum(args),
        Command::DetGrid(args) => commands::cmd_det_grid(args),
        Command::Dynamics(args) => commands::cmd_dynamics(args),
        Command::Winding(args) => commands::cmd_winding(args),
        Command::Verify(args) => verify::cmd_verify(args),
    }
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors.
        Err(e) => e.exit(),
    };
    match execute(&cli) {
        Ok(()) | Err(CliError::Pipe) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::VerificationFailed) => ExitCode::from(1),
    }
}
