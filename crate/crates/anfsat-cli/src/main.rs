mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

pub const EXIT_SAT: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;
pub const EXIT_UNSAT: u8 = 20;

#[derive(Parser, Debug)]
#[command(name = "anfsat", version, about = "3-CNF solving and analysis with functional descriptors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a DIMACS 3-CNF problem.
    Solve(SolveArgs),
    /// Write an exact-uniform random problem.
    Gen(GenArgs),
    /// Write the random-model curves as CSV files.
    Analyze(AnalyzeArgs),
    /// Write the per-clause solution count curve of a problem.
    Trace(TraceArgs),
    /// Compare the solver with brute force on generated problems.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preprocess {
    None,
    Sort,
    #[value(name = "sort+permute")]
    SortPermute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Draws {
    ExpectedSupport,
    TwiceExpectedSupport,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "none")]
    pub preprocess: Preprocess,
    /// Per-step trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Print a satisfying assignment.
    #[arg(long)]
    pub witness: bool,
    /// Print the run report as JSON instead of `c`/`s`/`v` lines.
    #[arg(long)]
    pub json: bool,
    /// Write the preprocessed problem here, with its var_map next to it.
    #[arg(long)]
    pub emit_transformed: Option<PathBuf>,
    /// Record solution counts in the trace when n is at most this.
    #[arg(long, default_value_t = 20)]
    pub count_cutoff: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Clause-to-variable ratio, as `P/Q`, an integer or a decimal.
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// First trajectory index, `n` by default.
    #[arg(long)]
    pub start: Option<usize>,
    #[arg(long, value_enum, default_value = "twice-expected-support")]
    pub draws: Draws,
    /// Generated instances used for the observed m_alpha column.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub n: usize,
    /// Target ratio; rounded to the nearest exact-uniform feasible value.
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "none")]
    pub preprocess: Preprocess,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SAT };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Trace(a) => commands::trace(&a),
        Command::Check(a) => commands::check(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("anfsat: {e}");
            ExitCode::from(match e {
                CliError::CheckFailed(_) | CliError::BadWitness => EXIT_CHECK_FAILED,
                _ => EXIT_USAGE,
            })
        }
    }
}
