//! Command-line front end: reads instance files, runs a solver and prints a
//! report. Text reports are `# key: value` lines, followed by the resulting
//! instance when there is one, so the whole output parses as an instance file.
//!
//! Exit codes: 0 solved or YES, 1 NO or infeasible, 2 usage or data error.

mod report;
mod sweep;
mod verbs;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use stabrepair::bribery::BriberyError;
use stabrepair::extension::{ExtensionError, DEFAULT_RED_CAP};
use stabrepair::oracle::{
    OracleError, BRIBERY_CAP, EXTENSION_CAP, MIN_REMOVABLE_CAP, SAT_CAP, STABLE_ENUM_CAP,
};
use stabrepair::partition::{PartitionError, DEFAULT_SUBSET_CAP};
use stabrepair::{CoreError, ParseError};

pub use report::Report;

#[derive(Parser, Debug)]
#[command(name = "stabrepair", version, about = "Repair tools for stable matching instances")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse an instance, check the matching (if any) for maximality and stability.
    Check { input: PathBuf },
    /// Stable partition of a unit-capacity instance with strict orders.
    Partition { input: PathBuf },
    /// Minimum set of agents whose removal admits a stable matching.
    DeleteMin { input: PathBuf },
    /// Smallest removable set inside the agents listed in [subset].
    DeleteSubset {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
    },
    /// Cheapest l1 change of [values] making [matching] weakly stable.
    Bribe {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::ExactBipartite)]
        mode: Mode,
        /// Blocking edge limit for --mode brute.
        #[arg(long, default_value_t = BRIBERY_CAP)]
        cap: usize,
    },
    /// Complete partial [ranks] so that [matching] is stable.
    Extend {
        input: PathBuf,
        /// Respect rank lower bounds given as l=<int> in [bounds].
        #[arg(long)]
        lower_bounds: bool,
    },
    /// Complete [orders] fixed on an independent set and find a stable matching.
    StratExtend { input: PathBuf },
    /// Red matching covering every blue edge of a [colors] instance.
    Redblue {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RED_CAP)]
        cap: usize,
    },
    /// Brute-force deciders and instance generators.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Every stable q-matching.
    StableMatchings {
        input: PathBuf,
        #[arg(long, default_value_t = STABLE_ENUM_CAP)]
        cap: usize,
    },
    /// Minimum removable agent set by trying every subset.
    MinRemovable {
        input: PathBuf,
        #[arg(long, default_value_t = MIN_REMOVABLE_CAP)]
        cap: usize,
    },
    /// Exact bribery optimum by trying every endpoint assignment.
    Bribe {
        input: PathBuf,
        #[arg(long, default_value_t = BRIBERY_CAP)]
        cap: usize,
    },
    /// Rank completion by trying every completion.
    Extend {
        input: PathBuf,
        #[arg(long)]
        lower_bounds: bool,
        #[arg(long, default_value_t = EXTENSION_CAP)]
        cap: usize,
    },
    /// Satisfiability of a DIMACS CNF file by trying every assignment.
    Sat {
        input: PathBuf,
        #[arg(long, default_value_t = SAT_CAP)]
        cap: usize,
    },
    /// Bribery instance whose optimum is the minimum vertex cover of the input graph.
    GenVc { input: PathBuf },
    /// Red-blue instance that is coverable iff the DIMACS formula is satisfiable.
    GenRedblue { input: PathBuf },
    /// Random instances checked against the brute-force deciders.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per problem family.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    ExactBipartite,
    Approx,
    Frozen,
    Brute,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{verb} needs a [{section}] section")]
    MissingSection { verb: &'static str, section: &'static str },
    #[error("{0}")]
    Data(String),
    /// The instance is valid but has no solution.
    #[error("{0}")]
    No(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::No(_) => 1,
            _ => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<BriberyError> for CliError {
    fn from(e: BriberyError) -> Self {
        match e {
            BriberyError::NotMaximal | BriberyError::Infeasible(_) | BriberyError::BothUnsaturated(_) => {
                CliError::No(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::NotMaximal => CliError::No(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Bribery(b) => b.into(),
            OracleError::Extension(x) => x.into(),
            OracleError::Infeasible => CliError::No(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Parses the arguments (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match verbs::dispatch(&cli.command) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: if cli.json { report.to_json() } else { report.to_text() },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
