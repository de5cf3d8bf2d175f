use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use upb::artifacts::{run_bound, run_gme, run_state, run_transform, BoundArgs, GmeArgs, StateArgs, TransformArgs};
use upb::sweep::{run_scan, run_theorem, run_verify, ScanArgs, TheoremArgs, VerifyArgs};
use upb::Outcome;

/// Decide unextendibility of merged product bases, build the PPT entangled
/// states they define and estimate their geometric measure of entanglement.
///
/// Exit status: 0 when results match expectations, 1 on a discrepancy,
/// 2 on an error.
#[derive(Parser)]
#[command(name = "upb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide unextendibility of a grid under one merge over seeded samples.
    Verify(VerifyArgs),
    /// Check every merge of a bundled theorem against its claim.
    Theorem(TheoremArgs),
    /// List singular column subsets of the merged party.
    Scan(ScanArgs),
    /// Build and certify the state projecting off a UPB.
    State(StateArgs),
    /// Estimate the geometric measure of a state file.
    Gme(GmeArgs),
    /// Evaluate the closed-form GME bound for eq01 merged AB.
    Bound(BoundArgs),
    /// Apply a transformation script to a grid.
    Transform(TransformArgs),
}

fn run(cli: &Cli) -> anyhow::Result<(Outcome, Option<&std::path::Path>)> {
    Ok(match &cli.command {
        Command::Verify(a) => (run_verify(a)?, a.out.as_deref()),
        Command::Theorem(a) => (run_theorem(a)?, a.out.as_deref()),
        Command::Scan(a) => (run_scan(a)?, a.out.as_deref()),
        Command::State(a) => (run_state(a)?, a.out.as_deref()),
        Command::Gme(a) => (run_gme(a)?, a.out.as_deref()),
        Command::Bound(a) => (run_bound(a)?, a.out.as_deref()),
        Command::Transform(a) => (run_transform(a)?, a.out.as_deref()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(outcome, out)| {
        match out {
            Some(path) => std::fs::write(path, &outcome.body)?,
            None => std::io::stdout().write_all(outcome.body.as_bytes())?,
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            eprintln!("{}", outcome.summary);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("discrepancy: results do not match expectations");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
