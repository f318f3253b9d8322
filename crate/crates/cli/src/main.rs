mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Singular tuples of symmetric and multisymmetric tensors.
#[derive(Debug, Parser)]
#[command(name = "tensoreig", version, about)]
pub struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Maximum number of worker threads.
    #[arg(long, global = true, env = "TENSOREIG_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Comma-separated degrees d_1,..,d_k.
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<u32>,
    /// Comma-separated projective dimensions m_1,..,m_k.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// O(t)
    Line,
    /// Omega^r(t)
    Omega,
    /// wedge^{m-r} Q (x) Q(t)
    Wedgeqq,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of singular tuples of a general tensor of the given format.
    EdDegree(FormatArgs),
    /// Find the singular tuples of a tensor by random-restart Newton.
    Solve {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Defaults to 200 times the expected count.
        #[arg(long)]
        max_restarts: Option<usize>,
    },
    /// Rebuild the tensors sharing a tensor's singular tuples.
    FiberCheck {
        #[arg(long)]
        tensor: PathBuf,
        /// Required unless --tuples is given.
        #[arg(long, required_unless_present = "tuples")]
        seed: Option<u64>,
        /// Tuples from a previous `solve` run; skips the solver.
        #[arg(long)]
        tuples: Option<PathBuf>,
    },
    /// Harmonic decomposition of an exact single-block form.
    Harmonic {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Nonvanishing cohomology degrees of a bundle on P^m.
    Bott {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        m: u32,
        /// Required for omega and wedgeqq.
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
    },
    /// Search the Koszul summands of a format for nonvanishing cohomology.
    VanishingScan(FormatArgs),
    /// Check the hypotheses of the reconstruction theorems for a format.
    ValidateFormat(FormatArgs),
    /// Run the full reproduction battery.
    ReproducePaper {
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(commands::run(&cli, &argv))
}
