//! The `efxg` command line: argument parsing and command dispatch.
//!
//! [`run`] takes the argument list and two sinks and returns the process
//! exit code, so the binary and the tests share one code path.

mod commands;
mod exit;
mod trace;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use exit::{Exit, EXIT_BUDGET, EXIT_INTERNAL, EXIT_MISMATCH, EXIT_NONE, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
pub use trace::{SolveTrace, Step, TRACE_VERSION};

#[derive(Debug, Parser)]
#[command(name = "efxg", version, about = "EFX allocations and orientations on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(alias = "allocations")]
    Allocation,
    #[value(alias = "orientations")]
    Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Goods,
    Chores,
    Mixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an allocation against one or more notions.
    Check(CheckArgs),
    /// Compute an allocation or orientation satisfying a notion.
    Solve(SolveArgs),
    /// Decide whether an allocation or orientation satisfying a notion exists.
    Decide(DecideArgs),
    /// Compile a (3,B2)-SAT formula or a circuit into an instance.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Translate certificates between a source problem and its compiled instance.
    Certify(CertifyArgs),
    /// Exhaustive search for a notion.
    Oracle(OracleArgs),
    /// Generate a seeded random instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance JSON file.
    #[arg(long, short)]
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Maximum number of states to enumerate.
    #[arg(long, default_value_t = efx_core::oracle::DEFAULT_BUDGET)]
    pub budget: u128,
    /// Worker threads for exhaustive search (1 = serial).
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub instance: InstanceArg,
    /// Allocation JSON file.
    #[arg(long, short)]
    pub alloc: PathBuf,
    /// Notions to check; `all` checks every notion.
    #[arg(long, short, value_delimiter = ',', required = true)]
    pub notion: Vec<String>,
    /// Print the violation report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArg,
    #[arg(long, short)]
    pub notion: String,
    #[arg(long, short, value_enum, default_value = "allocation")]
    pub mode: Mode,
    /// Where to write the allocation; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Where to write the JSON step log.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Root for the tree procedure.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub instance: InstanceArg,
    #[arg(long, short)]
    pub notion: String,
    #[arg(long, short, value_enum, default_value = "allocation")]
    pub mode: Mode,
    /// Where to write the witness, if one exists.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// DIMACS-style CNF to a mixed orientation instance.
    Sat3b2(ReduceArgs),
    /// Netlist to a goods allocation instance (AND gates are eliminated first).
    Circuit(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Source file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Instance JSON to write.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Reduction map JSON to write.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub instance: InstanceArg,
    /// Reduction map written by `reduce`.
    #[arg(long)]
    pub map: PathBuf,
    /// Source assignment, e.g. `1,0,1`; translated into an allocation.
    #[arg(long, conflicts_with = "cert", required_unless_present = "cert")]
    pub assignment: Option<String>,
    /// Allocation JSON; translated back into an assignment.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Where to write the allocation; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArg,
    #[arg(long, short)]
    pub notion: String,
    #[arg(long, short, value_enum, default_value = "allocation")]
    pub mode: Mode,
    /// Count passing states instead of stopping at the first.
    #[arg(long)]
    pub count: bool,
    /// Where to write the witness, if one exists.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    /// Number of edges; ignored with `--tree`.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest value (default: 0 for goods, -9 for chores, -5 for mixed).
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<i64>,
    /// Largest value (default: 9 for goods, 0 for chores, 5 for mixed).
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<i64>,
    /// Generate a uniform random tree on `n` vertices.
    #[arg(long)]
    pub tree: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
