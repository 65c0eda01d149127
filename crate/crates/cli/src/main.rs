//! Command-line front end: generation, sequence listings, period scans,
//! identity verification with table rendering, group and iteration
//! structure, the even-period data scan, and recognition.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 usage error.

mod commands;
mod jobs;
mod render;

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dickson",
    version,
    about = "Dickson polynomials over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanFormat {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichIdentity {
    Full,
    Half,
    Lemmas,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Guess,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print D_n(x, alpha), reduced mod (x^q - x) by default.
    Gen {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        n: u64,
        /// Print the exact unreduced closed form instead.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: GenFormat,
    },
    /// Print the whole sequence D_1 .. D_pi(alpha), one per line.
    Sequence {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Theoretical vs empirical period for one (q, alpha).
    Period {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Period agreement for every prime power q <= qmax, every alpha.
    ScanPeriods {
        #[arg(long)]
        qmax: u64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Worker threads for the scan.
        #[arg(long, default_value = "1")]
        jobs: usize,
    },
    /// Verify the reversal identities; --render prints the rotation tables.
    Identity {
        #[arg(long)]
        q: u64,
        /// Restrict to one alpha (default: all units).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        which: WhichIdentity,
        /// Render the coefficient grids with a rotation verdict.
        #[arg(long)]
        render: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: GenFormat,
    },
    /// Composition-group structure for one (q, alpha).
    Group {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Tail/period structure of iterating D_{n,alpha}.
    Dynamics {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    /// Scan the even-period instances (non-coprime degrees) up to qmax.
    OqScan {
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: ScanFormat,
        #[arg(long, default_value = "1")]
        jobs: usize,
    },
    /// Decide whether a polynomial is a reduced Dickson polynomial.
    Recognize {
        #[arg(long)]
        q: u64,
        /// Coefficients "c0,c1,..." ascending, in the element grammar.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Field parameters: modulus, generator, sizes.
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(verified) => {
            if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
