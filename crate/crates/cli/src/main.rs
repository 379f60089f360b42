mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn run(cli: Cli) -> Result<u8, commands::CliError> {
    match cli.command {
        Command::Residues { p, k, format } => commands::residues(p, k, format),
        Command::Bound(args) => commands::bound(&args),
        Command::Search(args) => commands::search(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Paley {
            p,
            limits,
            dimacs,
            format,
        } => commands::paley(p, &limits, dimacs.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
