//! `pivotlab`: batch command-line front end for the labeling and detection
//! pipelines. Every subcommand is a thin composition of library operations;
//! outputs are written atomically and a JSON summary goes to stdout.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage or config error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError::Runtime(message.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Runtime(_) => "runtime",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<pivotlab_core::Error> for CliError {
    fn from(e: pivotlab_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "pivotlab", version, about = "Pivoting labels and detection features for network data")]
struct Cli {
    /// JSON config file with one section per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for parallel operations (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Label malware pairs by shared operator domains.
    PivotMalware(commands::PivotMalwareArgs),
    /// Label host (IP) pairs through the resolve and signature join.
    PivotHosts(commands::PivotHostsArgs),
    /// Aggregate raw traffic into 10-minute buckets.
    Bucketize(commands::BucketizeArgs),
    /// Fit the port model and rank (source, window) groups by scan score.
    ScanScore(commands::ScanScoreArgs),
    /// Score host paths under the access-pattern graph.
    PathScore(commands::PathScoreArgs),
    /// Pair two-phase connections and compute the candidate feature table.
    Bindshell(commands::BindshellArgs),
    /// Extract byte n-gram histograms from files.
    NgramExtract(commands::NgramExtractArgs),
    /// Derive lower-order gram histograms from an n-gram file.
    NgramDerive(commands::NgramDeriveArgs),
    /// Evaluate scored predictions against labels.
    Eval(commands::EvalArgs),
    /// Generate a synthetic corpus with planted ground truth.
    Synth(commands::SynthArgs),
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("reading config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("parsing config {}: {e}", path.display())))
        }
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, CliError> {
    let config = load_config(cli.config.as_ref())?;
    if let Some(workers) = cli.workers.or(config.workers) {
        // A pool may already exist when the library is re-entered; that is
        // fine, the knob only applies to this process's first use.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match cli.command {
        Command::PivotMalware(args) => commands::pivot_malware(args, config.pivot_malware),
        Command::PivotHosts(args) => commands::pivot_hosts(args, config.pivot_hosts),
        Command::Bucketize(args) => commands::bucketize(args, config.bucketize),
        Command::ScanScore(args) => commands::scan_score(args, config.scan_score),
        Command::PathScore(args) => commands::path_score(args, config.path_score),
        Command::Bindshell(args) => commands::bindshell(args, config.bindshell),
        Command::NgramExtract(args) => commands::ngram_extract(args, config.ngram_extract),
        Command::NgramDerive(args) => commands::ngram_derive(args, config.ngram_derive),
        Command::Eval(args) => commands::eval(args, config.eval),
        Command::Synth(args) => commands::synth(args, config.synth),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap prints help/usage itself and picks exit code 0 or 2.
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let object = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.message() }
            });
            eprintln!("{object}");
            ExitCode::from(err.code())
        }
    }
}
