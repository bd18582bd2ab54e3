//! The `vren` command-line tool and its embedded HTTP service.

mod commands;
pub mod service;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use vren_core::{Diagnostic, VrenError};

pub use commands::execute;

#[derive(Debug, Parser)]
#[command(name = "vren", version, about = "Volleyball rally notation tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert notation to JSON.
    Parse(IoArgs),
    /// Rewrite notation in canonical form.
    Format(IoArgs),
    /// Report diagnostics; exits 1 when any is an error.
    Lint {
        input: PathBuf,
    },
    /// Attack table, reception zones, set distribution or pass/set quality.
    Stats(StatsArgs),
    /// Write a synthetic corpus.
    Generate(GenerateArgs),
    /// Export windowed feature rows for a prediction task.
    Encode(EncodeArgs),
    /// Fit a logistic model for a prediction task.
    Train(TrainArgs),
    /// Score a model on a corpus.
    Eval {
        #[arg(long)]
        model: PathBuf,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-round win probabilities for one rally.
    Predict(PredictArgs),
    /// Change one field of one round and report the probability shift.
    Whatif(WhatIfArgs),
    /// Run the HTTP/JSON service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IoArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TeamArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

impl From<TeamArg> for vren_core::Team {
    fn from(t: TeamArg) -> Self {
        match t {
            TeamArg::A => vren_core::Team::A,
            TeamArg::B => vren_core::Team::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Table,
    Zones,
    Distribution,
    Quality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ServeArg {
    Jump,
    Float,
    Hybrid,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub input: PathBuf,
    /// Team to report on; required by the table and quality reports.
    #[arg(long, value_enum)]
    pub team: Option<TeamArg>,
    #[arg(long, value_enum, default_value = "table")]
    pub report: ReportKind,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutFormat,
    /// Serve-type filter for the zones report.
    #[arg(long, value_enum)]
    pub serve: Option<ServeArg>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusFormat {
    Vren,
    Json,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    pub matches: usize,
    #[arg(long, default_value_t = 50)]
    pub rallies: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generator profile JSON; defaults to the built-in profile.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "vren")]
    pub format: CorpusFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    RallyWinner,
    SetType,
    HitType,
}

impl From<TaskArg> for vren_core::features::TaskKind {
    fn from(t: TaskArg) -> Self {
        use vren_core::features::TaskKind;
        match t {
            TaskArg::RallyWinner => TaskKind::RallyWinner,
            TaskArg::SetType => TaskKind::SetType,
            TaskArg::HitType => TaskKind::HitType,
        }
    }
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, value_enum)]
    pub task: TaskArg,
    /// Number of preceding rounds in each window.
    #[arg(long, default_value_t = vren_core::features::DEFAULT_WINDOW)]
    pub window: usize,
    /// Keep windows inside the current rally.
    #[arg(long)]
    pub no_cross_rally: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeatureFormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FeatureFormatArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hold out validation and test matches (seeded by --seed) and print the
    /// test-set evaluation.
    #[arg(long)]
    pub holdout: bool,
    /// Where to write the model file.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct RallyArgs {
    #[arg(long)]
    pub model: PathBuf,
    pub input: PathBuf,
    /// Match id; may be omitted when the input holds a single match.
    #[arg(long = "match")]
    pub match_id: Option<String>,
    /// Rally number as written in the notation.
    #[arg(long)]
    pub rally: u32,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub rally: RallyArgs,
}

#[derive(Debug, Args)]
pub struct WhatIfArgs {
    #[command(flatten)]
    pub rally: RallyArgs,
    /// Round number (1-based) to change.
    #[arg(long)]
    pub round: u32,
    /// Round field key, e.g. `set` or `pass_to`.
    #[arg(long)]
    pub field: String,
    /// New value in notation syntax; `-` clears an optional field.
    #[arg(long, allow_hyphen_values = true)]
    pub value: String,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "VREN_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Rally-winner model used by /predict/rally and /whatif.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Corpus used when a request carries no source text.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Domain {
        path: PathBuf,
        #[source]
        source: VrenError,
    },
    #[error(transparent)]
    Core(#[from] VrenError),
    /// Diagnostics already located in a file.
    #[error("{} error(s) in {}", .diagnostics.iter().filter(|d| d.is_error()).count(), .path.display())]
    Diagnostics { path: PathBuf, diagnostics: Vec<Diagnostic> },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn at(path: &Path, source: VrenError) -> Self {
        match source {
            VrenError::Parse(diagnostics) => CliError::Diagnostics {
                path: path.to_path_buf(),
                diagnostics,
            },
            source => CliError::Domain {
                path: path.to_path_buf(),
                source,
            },
        }
    }
}

/// `path:line: severity[CODE] rally r round n: message`
pub fn format_diagnostic(path: &Path, d: &Diagnostic) -> String {
    let mut located = d.clone();
    let line = located.line.take();
    match line {
        Some(line) => format!("{}:{line}: {located}", path.display()),
        None => format!("{}: {located}", path.display()),
    }
}

/// Parse arguments, run the command, print errors and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Diagnostics { path, diagnostics }) => {
            for d in &diagnostics {
                eprintln!("{}", format_diagnostic(&path, d));
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
