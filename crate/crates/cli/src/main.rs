use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conemid_cli::commands::{self, RunFlags};
use conemid_cli::CliError;

#[derive(Parser)]
#[command(name = "conemid", version, about = "Thompson midpoint sets on symmetric cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a problem file and write a JSON report.
    Analyze {
        input: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Skip the oracle verification.
        #[arg(long)]
        no_verify: bool,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check the predicted span with the oracles; exit 4 on disagreement.
    Verify {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        /// Cases per suite.
        #[arg(long)]
        pairs: Option<usize>,
        /// Backend descriptor, e.g. `spin:5` or `standard:3`; repeatable.
        #[arg(long = "backend")]
        backends: Vec<String>,
    },
    /// Write accepted midpoint samples, projected on the span, as CSV.
    Samples {
        input: PathBuf,
        csv: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Absolute midpoint tolerance (default 1e-9 * max(1, d_T)).
    #[arg(long)]
    tol: Option<f64>,
    /// Relative tolerance for eigenvalues attaining the distance.
    #[arg(long)]
    tie_tol: Option<f64>,
    /// Seed; falls back to the problem file, then to CONEMID_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampling proposals.
    #[arg(long)]
    samples: Option<usize>,
    /// Sampling radius relative to the smallest eigenvalue of the base point.
    #[arg(long)]
    radius: Option<f64>,
    /// Fail when the Peirce count and the closed form disagree.
    #[arg(long)]
    backend_check: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

impl Flags {
    fn into_run(self, verify: bool) -> RunFlags {
        RunFlags {
            tol: self.tol,
            tie_tol: self.tie_tol,
            seed: self.seed,
            samples: self.samples,
            radius: self.radius,
            backend_check: self.backend_check,
            inject_fault: self.inject_fault,
            verify,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            input,
            output,
            no_verify,
            flags,
        } => commands::run_analyze(&input, output.as_deref(), &flags.into_run(!no_verify)),
        Command::Verify { input, output, flags } => {
            commands::run_verify(&input, output.as_deref(), &flags.into_run(true))
        }
        Command::Selftest { seed, pairs, backends } => commands::run_selftest(seed, pairs, &backends),
        Command::Samples { input, csv, flags } => commands::run_samples(&input, &csv, &flags.into_run(false)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
