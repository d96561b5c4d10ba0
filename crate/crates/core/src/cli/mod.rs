//! Command-line front end. Tables go to stdout (or `--out`), diagnostics
//! to stderr.
//!
//! Exit codes: 0 success, 1 other failure, 2 malformed input,
//! 3 non-unique fixed point without `--initial-state`, 4 degenerate
//! direction, 5 word degree overflow.

mod commands;
mod parse;
mod table;

pub use parse::{parse_grid, parse_vec3, parse_word, WordLetter};
pub use table::{Cell, Table};

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::channel::spec::SpecError;
use crate::channel::ChannelError;
use crate::walk::WalkError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn channel_exit_code(e: &ChannelError) -> i32 {
    match e {
        ChannelError::NonUniqueFixedPoint(_) => 3,
        ChannelError::Algebra(_)
        | ChannelError::KrausCount(_)
        | ChannelError::NotNormalized { .. }
        | ChannelError::LeavesBlochBall(_)
        | ChannelError::InvalidParameter(_) => 2,
        _ => 1,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => 2,
            CliError::Channel(e) => channel_exit_code(e),
            CliError::Walk(e) => match e {
                WalkError::Channel(c) => channel_exit_code(c),
                WalkError::DegenerateDirection | WalkError::DegenerateVariance(_) => 4,
                WalkError::DegreeOverflow { .. } => 5,
                WalkError::Algebra(_) => 1,
                _ => 2,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qubit-walk", version, about = "Exact limit-theorem diagnostics for a qubit walk driven by a channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a channel
    Channel {
        #[command(subcommand)]
        action: ChannelAction,
    },
    /// Exact law of the window sum: (value, probability)
    Dist(WalkArgs),
    /// Distance to the Gaussian limit: (n, ks_distance, target_variance)
    Clt(WalkArgs),
    /// Tail rates: (x, empirical_rate, limit_rate)
    Ldp(WalkArgs),
    /// Cumulant generating functions: (t, lambda_n, lambda_limit)
    Lambda(WalkArgs),
    /// Word expectations of centered Pauli letters against their Gaussian limits
    Moments(WalkArgs),
}

#[derive(Debug, Subcommand)]
pub enum ChannelAction {
    /// Affine form (T_lin, t_vec); JSON output re-parses as a channel
    Show(ChannelArgs),
    /// Choi eigenvalues and, for KRSW input, the inequality conditions
    CheckCp(ChannelArgs),
    /// Stationary state
    Fixpoint(ChannelArgs),
    /// Stationary vector, covariance, spectral radius and convergence verdict
    Analyze(ChannelArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the table here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Channel JSON: a file path or an inline object
    #[arg(long)]
    pub channel: String,
    /// Initial Bloch vector x,y,z resolving a non-unique fixed point
    #[arg(long, allow_hyphen_values = true)]
    pub initial_state: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Direction a,b,c of the observable a·σx + b·σy + c·σz
    #[arg(long, allow_hyphen_values = true, default_value = "1,0,0")]
    pub nu: String,
    /// Site counts, comma separated
    #[arg(long, default_value = "1000")]
    pub n: String,
    /// Time horizon of the window (0, t]
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// t values: a,b,c or start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    /// x values: a,b,c or start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<String>,
    /// Word of letters X|Y|Z with optional windows, e.g. X@0:0.5Y; repeatable
    #[arg(long)]
    pub word: Vec<String>,
    /// Center the dist observable at its stationary mean (moment letters
    /// are always centered)
    #[arg(long)]
    pub centered: bool,
    /// Average each word over all letter orderings
    #[arg(long)]
    pub symmetrized: bool,
}

/// Destination for a table.
pub(crate) fn emit(table: &Table, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            table.write(output.format, &mut f)?;
            f.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            table.write(output.format, stdout.lock())
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Channel { action } => commands::channel(action),
        Command::Dist(a) => commands::dist(&a),
        Command::Clt(a) => commands::clt(&a),
        Command::Ldp(a) => commands::ldp(&a),
        Command::Lambda(a) => commands::lambda(&a),
        Command::Moments(a) => commands::moments(&a),
    }
}

/// Parses `std::env::args`, runs, reports errors on stderr and returns
/// the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
