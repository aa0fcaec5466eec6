//! `spinqec` command-line front end.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit status 2.
    Usage(String),
    /// Verification, checkpoint or construction failure; exit status 1.
    Failed(String),
}

impl From<spinqec::Error> for CliError {
    fn from(e: spinqec::Error) -> Self {
        match e {
            spinqec::Error::InvalidArgument(_)
            | spinqec::Error::NotFound(_)
            | spinqec::Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spinqec",
    version,
    about = "Error-correcting codes on a single large spin"
)]
struct Cli {
    /// Directory for output files without an explicit path.
    #[arg(long, global = true, env = "SPINQEC_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Random seed, recorded in every output file.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate or export a codeword pair and check its error-correction conditions.
    Codegen(CodegenArgs),
    /// Check the error-correction conditions of a codeword file.
    Verify(VerifyArgs),
    /// List, run and trace the encoding, decoding and correction pulses.
    Sequence(SequenceArgs),
    /// Sweep storage time and pulse fidelity, writing a CSV of fidelities.
    Simulate(SimulateArgs),
    /// Compare Hilbert-space sizes of qubit, GKP-style and qudit codes.
    Resources(ResourcesArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operators {
    /// Single-spin operators for one qudit, collective otherwise.
    Auto,
    Single,
    Collective,
}

#[derive(Debug, Args)]
pub struct CodegenArgs {
    /// Correction order N.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..),
          required_unless_present_any = ["catalog", "multi"])]
    pub order: Option<u32>,
    /// Code family: even gives d = 4N(N+1), odd gives 4N(N+1)+2.
    #[arg(long, default_value = "even")]
    pub family: String,
    /// Export a catalogued code instead of generating one.
    #[arg(long, conflicts_with_all = ["order", "multi"])]
    pub catalog: Option<String>,
    /// Export a multi-qudit code (three-spin-3/2, four-spin-7/2).
    #[arg(long, conflicts_with = "order")]
    pub multi: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub operators: Operators,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Codeword file written by `codegen`.
    #[arg(required_unless_present_any = ["catalog", "multi"], conflicts_with_all = ["catalog", "multi"])]
    pub path: Option<PathBuf>,
    #[arg(long, conflicts_with = "multi")]
    pub catalog: Option<String>,
    #[arg(long)]
    pub multi: Option<String>,
    /// Order to test; defaults to the code's declared order.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: Option<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    pub operators: Operators,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Also write the full report as JSON.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Enc,
    Dec,
    Reencode,
    Correct,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long, value_enum, default_value = "enc")]
    pub which: Which,
    #[arg(long, default_value = "adjacent")]
    pub alphabet: String,
    /// Amplitude of |0>; giving any state parameter runs the sequence.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    /// Error applied before decoding, or the branch to correct (none, X, Y, Z).
    #[arg(long)]
    pub inject: Option<String>,
    /// Print and write the state after every pulse.
    #[arg(long)]
    pub trace: bool,
    /// Trace CSV path (default: <out-dir>/trace-<which>.csv).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the pulse list as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MonteCarlo,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Storage times in units of T: `a,b,...` or `start:stop:log10|linear[,count]`.
    #[arg(long = "t-over-T", default_value = "0.001:0.1:log10")]
    pub t_over_t: String,
    /// Per-pulse fidelities, same syntax.
    #[arg(long, default_value = "1.0")]
    pub pulse_fidelity: String,
    /// Pulse error model: depolarizing, over-rotation or ideal.
    #[arg(long, default_value = "depolarizing")]
    pub model: String,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "monte-carlo")]
    pub mode: Mode,
    #[arg(long, default_value = "adjacent")]
    pub alphabet: String,
    /// Measurement order, e.g. `Y,X,Z`.
    #[arg(long, default_value = "Y,X,Z")]
    pub cascade: String,
    #[arg(long, default_value_t = spinqec::protocol::DEFAULT_RELAXATION_ORDER,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub relaxation_order: u32,
    /// Read out through an explicit electron ancilla.
    #[arg(long)]
    pub ancilla: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: DataFormat,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_order: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TableFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        out_dir: cli.out_dir,
        seed: cli.seed,
    };
    let result = match &cli.command {
        Command::Codegen(args) => commands::codegen(&ctx, args),
        Command::Verify(args) => commands::verify(&ctx, args),
        Command::Sequence(args) => commands::sequence(&ctx, args),
        Command::Simulate(args) => commands::simulate(&ctx, args),
        Command::Resources(args) => commands::resources(&ctx, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
