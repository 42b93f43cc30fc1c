mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cayley_spectra::FamilyIndex;

#[derive(Debug, Parser)]
#[command(
    name = "cayley-spectra",
    version,
    about = "Second eigenvalues of Cayley graphs on symmetric groups",
    after_help = "Exit status: 0 pass, 1 fail, 2 inconclusive, 3 usage or input error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "CAYLEY_SPECTRA_THREADS")]
    pub threads: Option<usize>,
    /// Seed for Lanczos start vectors and random transposition sets.
    #[arg(long, global = true, default_value_t = cayley_spectra::lanczos::DEFAULT_SEED)]
    pub seed: u64,
    /// Lanczos residual tolerance, relative to the valency.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Character,
    Lanczos,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeKind {
    Path,
    Star,
    Complete,
    Random,
    RandomGraph,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the six conjugacy classes and their filtered subsets.
    Classes {
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Keep elements moving each of 1..=k.
        #[arg(long)]
        k: Option<usize>,
        /// Print the elements of this class (tag 1..=6).
        #[arg(long)]
        class: Option<u8>,
    },
    /// Second eigenvalue of Cay(S_n, T_k) for a class family T.
    Lambda2 {
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Comma-separated class tags, e.g. 1,2,5.
        #[arg(long)]
        family: FamilyIndex,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Exact spectrum of a normal Cayley graph from the character table.
    Spectrum {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long)]
        family: FamilyIndex,
    },
    /// Character table of S_n.
    Characters {
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
    /// Compare λ₂(G_k) with the counting value for every connected family.
    Sweep {
        /// Degree; 7 reproduces the published classification, 8 is an
        /// endurance run.
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Restrict to these families (repeatable).
        #[arg(long)]
        family: Vec<FamilyIndex>,
        /// With --format csv, list every verdict rather than the passing table.
        #[arg(long)]
        verdicts: bool,
    },
    /// Full-Flag Johnson graph checks.
    Fj {
        /// Single degree in 4..=7 (default: all of them).
        #[arg(long)]
        n: Option<usize>,
        /// Largest n for the quotient-level inequalities.
        #[arg(long, default_value_t = 40)]
        max_n: usize,
    },
    /// Spectral gap against the algebraic connectivity of the transposition graph.
    Aldous {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TreeKind::Random)]
        tree: TreeKind,
        /// Number of random sets (random kinds only).
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Spectral gaps of all transpositions and of the star transpositions.
    Corollaries {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6, 7])]
        n: Vec<usize>,
    },
    /// Hypercube pairs joined by a matching, and prisms.
    Examples {
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 512)]
        max_cycle: usize,
    },
    /// Difference and isomorphism identities of the recursion on n.
    Recursion {
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Restrict to these families (repeatable).
        #[arg(long)]
        family: Vec<FamilyIndex>,
    },
}

/// Usage and input errors.
const ERROR_EXIT: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ERROR_EXIT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(ERROR_EXIT);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
