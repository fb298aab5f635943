//! The `pima` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 unparsable input, 3 invalid
//! configuration, 4 alignment invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pima::logio::{LogFormat, SyntheticParams, DEFAULT_GAP};
use pima::{ConvergencePolicy, FreqRange, Initializer, Linkage};
use thiserror::Error;

mod align;
mod bench;
mod gen;
mod score;

pub use bench::{mean_std, percent_delta};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: pima::Error },
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Invariant { path: PathBuf, source: pima::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 2,
            CliError::Config(_) => 3,
            CliError::Invariant { .. } => 4,
        }
    }
}

impl From<pima::Error> for CliError {
    fn from(e: pima::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "pima",
    version,
    about = "Iterative multiple trace alignment for event logs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align a log, refine to convergence and write the requested outputs.
    Align(AlignArgs),
    /// Score an alignment matrix (TSV) and check its columns.
    Score(ScoreArgs),
    /// Compare refinement runs against the guide-tree baseline.
    Bench(BenchArgs),
    /// Generate a synthetic log.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input log file.
    #[arg(long)]
    pub input: PathBuf,
    /// Log encoding: plain (one trace per line) or csv.
    #[arg(long, default_value = "plain", value_parser = parse_format)]
    pub format: LogFormat,
    /// Token reserved for gaps.
    #[arg(long, default_value = DEFAULT_GAP)]
    pub gap_token: String,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Initializer: random-sequential, sorted-length, sorted-activity-sum or guide-tree.
    #[arg(long = "init", default_value = "random-sequential")]
    pub init: String,
    /// Sort descending for the sorted initializers.
    #[arg(long)]
    pub sort_desc: bool,
    /// Linkage for the guide-tree initializer: single, complete or average.
    #[arg(long, default_value = "average")]
    pub linkage: String,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Column frequency window for multi-trace candidates, as LO:HI fractions.
    #[arg(long, default_value = "0.1:0.9")]
    pub freq_range: String,
    /// Stop a single-trace phase when a pass improves by less than this fraction.
    #[arg(long, default_value_t = 0.0)]
    pub min_improvement: f64,
    /// Maximum single-trace passes per phase.
    #[arg(long, default_value_t = 100)]
    pub max_single: usize,
    /// Maximum multi-trace passes per run.
    #[arg(long, default_value_t = 2)]
    pub max_multi: usize,
}

#[derive(Debug, Clone, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Minimum column frequency for the consensus summary and heatmap.
    #[arg(long, default_value_t = 0.05)]
    pub consensus: f64,
    /// Write the alignment matrix as TSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-iteration statistics as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Write an HTML heatmap of the consensus columns.
    #[arg(long)]
    pub html: Option<PathBuf>,
    /// Write null instead of wall-clock times in the stats JSON.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Alignment TSV file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = DEFAULT_GAP)]
    pub gap_token: String,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Number of traces.
    #[arg(long, default_value_t = 100)]
    pub traces: usize,
    /// Number of activity types.
    #[arg(long, default_value_t = 20)]
    pub types: usize,
    /// Length of the shared backbone sequence.
    #[arg(long, default_value_t = 20)]
    pub backbone: usize,
    #[arg(long, default_value_t = 0.05)]
    pub insertion: f64,
    #[arg(long, default_value_t = 0.05)]
    pub deletion: f64,
    #[arg(long, default_value_t = 0.02)]
    pub swap: f64,
}

impl SynthArgs {
    pub fn params(&self, seed: u64) -> SyntheticParams {
        SyntheticParams {
            n_traces: self.traces,
            n_activity_types: self.types,
            backbone_length: self.backbone,
            deletion_rate: self.deletion,
            insertion_rate: self.insertion,
            swap_rate: self.swap,
            seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Input log; a synthetic log is generated when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "plain", value_parser = parse_format)]
    pub format: LogFormat,
    #[arg(long, default_value = DEFAULT_GAP)]
    pub gap_token: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Number of seeded refinement runs.
    #[arg(long, default_value_t = 30)]
    pub seeds: usize,
    /// Run seeded runs on all cores (timings then include contention).
    #[arg(long)]
    pub parallel: bool,
    /// Also time the generator at N and 2N traces.
    #[arg(long)]
    pub scaling: bool,
    /// Repetitions per size for the scaling run; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Write the report as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output log file (plain format).
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_format(s: &str) -> Result<LogFormat, String> {
    s.parse().map_err(|e: pima::Error| e.to_string())
}

pub fn parse_freq_range(s: &str) -> CliResult<FreqRange> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("frequency range {s:?} must look like LO:HI")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("frequency range bound {v:?} is not a number")))
    };
    Ok(FreqRange::new(parse(lo)?, parse(hi)?)?)
}

impl PolicyArgs {
    pub fn initializer(&self) -> CliResult<Initializer> {
        let init: Initializer = self.init.parse()?;
        let linkage: Linkage = self.linkage.parse()?;
        Ok(match init {
            Initializer::SortedLength { .. } => Initializer::SortedLength {
                descending: self.sort_desc,
            },
            Initializer::SortedActivitySum { .. } => Initializer::SortedActivitySum {
                descending: self.sort_desc,
            },
            Initializer::GuideTree(_) => Initializer::GuideTree(linkage),
            other => other,
        })
    }

    pub fn policy(&self, seed: u64) -> CliResult<ConvergencePolicy> {
        let policy = ConvergencePolicy {
            min_relative_improvement: self.min_improvement,
            max_single_passes: self.max_single,
            max_multi_rounds: self.max_multi,
            freq_range: parse_freq_range(&self.freq_range)?,
            seed,
        };
        policy.validate()?;
        Ok(policy)
    }
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn read_log(input: &InputArgs) -> CliResult<pima::Log> {
    let text = read_file(&input.input)?;
    pima::logio::parse_log(&text, input.format, &input.gap_token).map_err(|source| {
        CliError::Parse {
            path: input.input.clone(),
            source,
        }
    })
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

/// Dispatches a parsed command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Align(args) => align::cmd_align(args, out),
        Command::Score(args) => score::cmd_score(args, out),
        Command::Bench(args) => bench::cmd_bench(args, out),
        Command::Gen(args) => gen::cmd_gen(args, out),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return 3;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
