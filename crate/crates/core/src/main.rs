use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wstar::report::{to_json, write_json};
use wstar::runner::{run, RunOutcome, ACCEPTANCE_SCRIPT};
use wstar::script::parse;

#[derive(Parser)]
#[command(name = "wstar", version, about = "Verification harness for finite-dimensional W*-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and print its JSON report.
    Run {
        file: PathBuf,
        /// Root seed; check k then uses a seed derived from (N, k).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the built-in acceptance suite.
    Suite {
        #[arg(long, required = true)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Syntax check only.
    Parse { file: PathBuf },
}

fn finish(outcome: RunOutcome, report: Option<PathBuf>) -> ExitCode {
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    if outcome.error.is_none() || !outcome.reports.is_empty() {
        match report {
            Some(path) => {
                if let Err(e) = write_json(&outcome.reports, &path) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => println!("{}", to_json(&outcome.reports)),
        }
    }
    for r in &outcome.reports {
        if !r.passed() {
            eprintln!("{}: {:?} ({})", r.name, r.status, r.witness.as_deref().unwrap_or(""));
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, seed, report } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let outcome = match parse(&text) {
                Ok(script) => run(&script, seed),
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            finish(outcome, report)
        }
        Command::Suite { all: _, seed, report } => {
            let script = parse(ACCEPTANCE_SCRIPT).expect("built-in script parses");
            finish(run(&script, Some(seed)), report)
        }
        Command::Parse { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            match parse(&text) {
                Ok(script) => {
                    println!("ok: {} statements", script.statements.len());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    ExitCode::from(2)
                }
            }
        }
    }
}
