use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Thm1,
    Thm2,
    Lemma,
    Saturation,
    Oracle,
    All,
}

/// Exact spectra of depolarised symmetric Werner states.
#[derive(Debug, Parser)]
#[command(name = "werner", version)]
pub struct Cli {
    /// Local dimension (row budget of every frame).
    #[arg(long, global = true, default_value_t = 2)]
    pub d: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest n accepted by spectrum/sweep/xy; for verify, the largest n
    /// of the dense d = 2 sweeps (d = 3 runs two sites shorter).
    #[arg(long, global = true)]
    pub cap_n: Option<usize>,

    /// Print exact rationals where a float would otherwise be shown.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// dim F_λ, dim U^d_λ and their product tr P_λ.
    Dims { frame: String },
    /// Littlewood-Richardson coefficient c^λ_{μν}.
    Lr {
        lambda: String,
        mu: String,
        nu: String,
        /// List the LR tableaux.
        #[arg(long)]
        witness: bool,
    },
    /// Symmetric group character χ_λ on a cycle type.
    Char { lambda: String, cycle_type: String },
    /// Horn inequalities and LR feasibility for spectra λ = μ + ν.
    Horn {
        lambda: String,
        mu: String,
        nu: String,
        /// Only the basic inequalities.
        #[arg(long)]
        basic: bool,
        /// Only LR feasibility.
        #[arg(long)]
        feasible: bool,
    },
    /// Output spectrum of the channel (--q) or of one twirl term (--k).
    Spectrum {
        lambda: String,
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        q: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Start from P_λ instead of the normalized state π_λ.
        #[arg(long)]
        raw: bool,
        /// Keep zero-weight rows.
        #[arg(long)]
        include_zeros: bool,
    },
    /// Channel output probabilities over a grid of q values.
    Sweep {
        lambda: String,
        /// Comma-separated q values, e.g. "0,1/4,0.5,1".
        #[arg(long)]
        q_grid: String,
    },
    /// Max/min dimension products over LR-connected triples.
    Xy {
        lambda: String,
        lambda_prime: String,
        /// Number of traced sites.
        #[arg(long)]
        k: usize,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Larger sweeps (dense n ≤ 8 at d = 2, n ≤ 6 at d = 3).
        #[arg(long)]
        full: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
