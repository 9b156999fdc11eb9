//! Command-line frontend for `weakcde-core`: censuses, interval statistics,
//! CDE/tCDE/mCDE checks, rowmotion and the rook verifications.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod output;
pub mod target;

use output::Outcome;
use target::{parse_perm, parse_target, Poset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "weakcde", version, about = "Edge densities and toggle statistics of weak order intervals")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// worker threads; 0 picks one per core
    #[arg(long, env = "WEAKCDE_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,
    /// seed for sampled toggle-symmetric distributions
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pattern classes and skew vexillary shape of w
    Classify { w: String },
    /// Class counts over all of Sₙ
    Census { n: usize },
    /// Size, chains and γ-labels of [e,w] (or of a Young interval)
    Interval { target: String },
    /// Uniform and maximal-chain expectations of ddeg against the edge density
    Cde { target: String },
    /// tCDE certificate, or a toggle-symmetric witness against it
    Tcde {
        target: String,
        /// sampled distributions checked against the certificate
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// E(multichain(m); ddeg) for m = 0..=m_max
    Mcde { target: String, m_max: usize },
    /// Rowmotion orbits, order and ddeg averages
    Rowmotion { target: String },
    /// Exhaustive rook evaluations on [e,w], or over all of Sₙ with --all
    RookVerify {
        w: Option<String>,
        #[arg(long, value_name = "N", conflicts_with = "w")]
        all: Option<usize>,
    },
    /// Edge density and tCDE constant for every balanced skew vexillary w ∈ Sₙ
    Theorem {
        n: usize,
        /// also build rook certificates, checked on this many sampled distributions
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Connected balanced shapes in an a×b box
    Balanced { a: u32, b: u32 },
    /// Hasse diagram with γ-labels
    Export {
        target: String,
        /// DOT output (the default for this command)
        #[arg(long)]
        dot: bool,
    },
}

/// Largest `n` for whole-group sweeps.
const MAX_SWEEP_N: usize = 9;

fn check_sweep(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_SWEEP_N {
        return Err(CliError::Parse(format!("n must be between 1 and {}", MAX_SWEEP_N)));
    }
    Ok(())
}

fn poset_of(s: &str) -> Result<Poset, CliError> {
    Poset::build(&parse_target(s)?)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    Ok(match &cli.command {
        Command::Classify { w } => commands::classify(&parse_perm(w)?),
        Command::Census { n } => {
            check_sweep(*n)?;
            commands::census(*n)
        }
        Command::Interval { target } => commands::interval(&poset_of(target)?),
        Command::Cde { target } => commands::cde(&poset_of(target)?),
        Command::Tcde { target, samples } => commands::tcde(&poset_of(target)?, *samples, cli.seed),
        Command::Mcde { target, m_max } => commands::mcde(&poset_of(target)?, *m_max),
        Command::Rowmotion { target } => commands::rowmotion(&poset_of(target)?),
        Command::RookVerify { w, all } => match (w, all) {
            (Some(w), None) => {
                let w = parse_perm(w)?;
                if w.n() > target::MAX_INTERVAL_N {
                    return Err(CliError::Parse(format!("n = {} is too large", w.n())));
                }
                commands::rook_verify(vec![w], w.to_compact_string())
            }
            (None, Some(n)) => {
                check_sweep(*n)?;
                commands::rook_verify(weakcde_core::perm::Permutation::all(*n).collect(), format!("S{}", n))
            }
            _ => return Err(CliError::Parse("rook-verify needs w or --all N".into())),
        },
        Command::Theorem { n, samples } => {
            check_sweep(*n)?;
            commands::theorem(*n, *samples, cli.seed)
        }
        Command::Balanced { a, b } => {
            if *a == 0 || *b == 0 || *a > 12 || *b > 12 {
                return Err(CliError::Parse("a and b must be between 1 and 12".into()));
            }
            commands::balanced(*a, *b)
        }
        Command::Export { target, .. } => commands::export(&poset_of(target)?),
    })
}

fn render(cli: &Cli, outcome: &Outcome) -> Result<String, CliError> {
    let format = match cli.command {
        Command::Export { dot: true, .. } => Format::Dot,
        Command::Export { .. } if cli.format == Format::Json => Format::Dot,
        _ => cli.format,
    };
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Tsv => Ok(outcome.tsv.render()),
        Format::Dot => outcome.dot.clone().ok_or_else(|| CliError::Parse("DOT output is only available for interval and export".into())),
    }
}

fn run_parsed(cli: &Cli) -> Result<(String, bool), CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build()?;
    let outcome = pool.install(|| execute(cli))?;
    Ok((render(cli, &outcome)?, outcome.violation))
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code: 2 for parse errors, 1 when a checked property fails, 0 otherwise.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok((text, violation)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(path.clone(), e)),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e)),
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return EXIT_USAGE;
            }
            if violation { EXIT_VIOLATION } else { EXIT_OK }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_USAGE
        }
    }
}

/// Like [`run`], but returns the rendered output instead of printing it; `--out` is ignored.
pub fn run_to_string<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return (if e.use_stderr() { EXIT_USAGE } else { EXIT_OK }, e.to_string()),
    };
    match run_parsed(&cli) {
        Ok((text, violation)) => (if violation { EXIT_VIOLATION } else { EXIT_OK }, text),
        Err(e) => (EXIT_USAGE, e.to_string()),
    }
}
