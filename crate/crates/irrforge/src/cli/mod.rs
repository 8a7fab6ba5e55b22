//! Command-line frontend. [`run`] parses arguments, dispatches one command
//! and returns the process exit code.
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | success (irreducible, similar, construction written) |
//! | 1  | `check`: reducible |
//! | 2  | obstruction, rejected construction, or no witness detected |
//! | 3  | numerical failure |
//! | 5  | `similar --spectral`: inconclusive |
//! | 64 | unreadable input or bad usage |

mod commands;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::numkernel::Tolerances;
pub use format::{Format, MatrixFile};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REDUCIBLE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "irrforge",
    version,
    about = "Irreducibility, similarity and generator constructions on complex matrices"
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Globals {
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Relative eigenvalue clustering radius.
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,
    /// Bound on certification residuals.
    #[arg(long, global = true)]
    pub tol_cert: Option<f64>,
    /// Smallest admissible relative gap.
    #[arg(long, global = true)]
    pub gap_min: Option<f64>,
    /// Output format for reports and matrix files.
    #[arg(long, global = true, value_enum, default_value = "structured")]
    pub format: Format,
    /// Directory for matrix files and the report copy.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the matrices behind a result to files.
    #[arg(long, global = true)]
    pub emit_matrices: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide irreducibility with both oracles.
    Check { path: PathBuf },
    /// Find X with X T X^-1 irreducible, or an obstruction.
    Similar {
        path: PathBuf,
        /// Use the Jordan-Chevalley pipeline (non-normal input).
        #[arg(long)]
        spectral: bool,
    },
    /// Reducing projection for X T X^-1 when T is detectably strongly reducible.
    /// Without X, a random invertible one is drawn from --seed, or I is used.
    Witness { t: PathBuf, x: Option<PathBuf> },
    /// Generator constructions.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Semisimple plus nilpotent decomposition.
    Dunford { path: PathBuf },
    /// Seeded random instances (requires --seed).
    #[command(subcommand)]
    Random(RandomCommand),
    /// Run `check` on every matrix file in a directory.
    Verify { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Two orthogonal families of rank-one projections generating M_{n1+n2}.
    Pairs { n1: usize, n2: usize },
    /// Projections of the given ranks generating M_n, n = sum of ranks.
    Ranks {
        #[arg(required = true)]
        ranks: Vec<usize>,
    },
    /// Unitary U with U*PU and the diagonal MASA under I-P generating M_n,
    /// P the first k coordinates.
    Masa {
        n: usize,
        k: usize,
        /// Unitary whose columns diagonalize the MASA (default I).
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Minimal number of rank-k-bounded projections generating M_n.
    Ceiling { n: usize, k: usize },
    /// Hermitian B and G with B + iG generating M_n.
    Realpart { path: PathBuf },
    /// Unitary conjugating a diagonal partition; ranks start with P0.
    Conjugation {
        #[arg(required = true)]
        ranks: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RandomCommand {
    /// Normal matrix with spectrum "v:m,v:m,..." (v may be complex, e.g. 1+2i).
    Normal { spectrum: String },
    /// Invertible matrix with condition number at most `cond`.
    Invertible { n: usize, cond: f64 },
}

/// Result of a command: what to print and how to exit.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Globals {
    pub fn tolerances(&self) -> Result<Tolerances, Error> {
        let mut t = Tolerances::from_env()?;
        if let Some(v) = self.tol_rank {
            t.rank_tol = v;
        }
        if let Some(v) = self.tol_cluster {
            t.cluster_tol = v;
        }
        if let Some(v) = self.tol_cert {
            t.cert_tol = v;
        }
        if let Some(v) = self.gap_min {
            t.gap_min = v;
        }
        t.validate()?;
        Ok(t)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Output goes to the given writers.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "irrforge: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
