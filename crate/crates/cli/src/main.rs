use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mobsum_cli::{run, CommandKind, RunOptions};

#[derive(Parser)]
#[command(
    name = "mobsum",
    version,
    about = "Möbius-map trajectories and their twisted exponential sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map iteration vs. recurrence vs. closed form, and period checks.
    VerifySpectral(RunArgs),
    /// Twisted, correlation and single sums along one trajectory.
    SumScan(RunArgs),
    /// Brute-force Weil-type sums over random rational functions.
    WeilCheck(RunArgs),
    /// Prime blocks, sieve sets, W_j sums and the theorem conditions.
    BszReport(RunArgs),
    /// Segmented Möbius sieve against trial division.
    MobiusCheck(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Binary μ-table cache, reused when large enough.
    #[arg(long)]
    mu_cache: Option<PathBuf>,
    /// Worker threads (overrides the config).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::VerifySpectral(a) => (CommandKind::VerifySpectral, a),
        Command::SumScan(a) => (CommandKind::SumScan, a),
        Command::WeilCheck(a) => (CommandKind::WeilCheck, a),
        Command::BszReport(a) => (CommandKind::BszReport, a),
        Command::MobiusCheck(a) => (CommandKind::MobiusCheck, a),
    };
    let opts = RunOptions {
        config: args.config,
        out: args.out,
        mu_cache: args.mu_cache,
        threads: args.threads,
    };
    match run(kind, &opts) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for path in &outcome.outputs {
                println!("wrote {}", path.display());
            }
            for f in &outcome.failures {
                eprintln!("FAILED: {f}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
