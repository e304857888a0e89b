use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qu0_cli::commands::{self, Outcome, SelfcheckArgs};
use qu0_cli::report::{Location, Report};
use qu0_cli::CliError;

/// Proof checker and finite-model evaluator for simple type theory with
/// undefinedness.
///
/// Exit status: 0 pass, 1 rejected proof / counter-model / failed
/// criterion, 2 usage, parse or I/O error.
#[derive(Debug, Parser)]
#[command(name = "qu0", version)]
struct Cli {
    /// Write the machine-readable JSON report to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Maximum number of elements of any domain.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every proof in a proof script.
    Check {
        script: PathBuf,
        /// Accept the derived rules (their steps are listed as trusted).
        #[arg(long)]
        extended: bool,
    },
    /// Evaluate a closed wff in the model described by a JSON file.
    Eval {
        model: PathBuf,
        wff: String,
        /// Take constant declarations from this script.
        #[arg(long, value_name = "SCRIPT")]
        sig: Option<PathBuf>,
    },
    /// Check a wff of type o in every small standard model.
    Validity {
        wff: String,
        /// Largest number of individuals to try.
        #[arg(long, default_value_t = 2, value_name = "K")]
        max_base: usize,
        #[arg(long, value_name = "SCRIPT")]
        sig: Option<PathBuf>,
    },
    /// Run the built-in soundness and semantics battery.
    Selfcheck {
        /// Break the kernel on purpose (A9 or R1) to see the suite fail.
        #[arg(long, value_name = "A9|R1")]
        mutate: Option<String>,
        /// Sweep models with exactly N individuals instead of 1 and 2.
        #[arg(long, value_name = "N")]
        iota_base: Option<usize>,
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',', value_name = "IDS")]
        only: Vec<u8>,
    },
    /// Generate a proof with a tactic and print it as a script.
    Tactic {
        /// lemma1 (A ~= A) or odefined (def(A) for A of type o).
        tactic: String,
        wff: String,
        #[arg(long, value_name = "SCRIPT")]
        sig: Option<PathBuf>,
        /// Write the script to PATH instead of stdout.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Eval { .. } => "eval",
            Command::Validity { .. } => "validity",
            Command::Selfcheck { .. } => "selfcheck",
            Command::Tactic { .. } => "tactic",
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { script, extended } => commands::run_check(script, *extended),
        Command::Eval { model, wff, sig } => {
            commands::run_eval(model, wff, sig.as_deref(), cli.cap)
        }
        Command::Validity { wff, max_base, sig } => {
            commands::run_validity(wff, *max_base, sig.as_deref(), cli.cap)
        }
        Command::Selfcheck {
            mutate,
            iota_base,
            only,
        } => commands::run_selfcheck(&SelfcheckArgs {
            mutate: mutate.clone(),
            iota_base: *iota_base,
            cap: cli.cap,
            only: only.clone(),
        }),
        Command::Tactic {
            tactic,
            wff,
            sig,
            emit,
        } => commands::run_tactic(tactic, wff, sig.as_deref(), emit.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.report
        }
        Err(e) => {
            eprintln!("error: {e}");
            let file = match (&cli.command, &e) {
                (Command::Check { script, .. }, CliError::Script { .. }) => {
                    Some(script.display().to_string())
                }
                (_, CliError::Io { path, .. }) => Some(path.display().to_string()),
                _ => None,
            };
            let loc = Location {
                file,
                line: e.line(),
                ..Location::default()
            };
            Report::error(cli.command.name(), loc, e.to_string())
        }
    };
    if let Some(path) = &cli.report {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: cannot write report {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code as u8)
}
