use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qevent_cli::{commands, CliError};

#[derive(Parser)]
#[command(name = "qevent", version, about = "Conditional event time and energy statistics (hbar = 1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario; writes <stem>.report.json and <stem>.distribution.csv.
    Run {
        path: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate every value of the config's sweep block; writes <stem>.sweep.{csv,json}.
    Sweep {
        path: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Randomized property corpus; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 20_260_101)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Dense oracle report for a small finite_dim scenario; exits 1 on disagreement.
    OracleCheck {
        path: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

const USAGE: u8 = 64;

fn print_paths(w: &commands::Written) {
    for p in &w.paths {
        println!("{}", p.display());
    }
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Run { path, out } => commands::run(&path, &out).map(|w| print_paths(&w))?,
        Command::Sweep { path, out } => commands::sweep(&path, &out).map(|w| print_paths(&w))?,
        Command::OracleCheck { path, out } => commands::oracle_check(&path, &out).map(|w| print_paths(&w))?,
        Command::Verify { seed, trials } => {
            let summary = commands::verify(seed, trials)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("JSON values serialize"));
            if summary["ok"] != true {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let line = serde_json::json!({
                "error": "usage",
                "exit_code": USAGE,
                "message": e.to_string().lines().next().unwrap_or_default(),
            });
            eprintln!("{line}");
            return ExitCode::from(USAGE);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.exit_code())
        }
    }
}
