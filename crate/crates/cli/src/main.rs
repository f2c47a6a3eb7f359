mod args;
mod commands;
mod error;
mod measures;
mod pipeline;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Rank(args) => {
            let files = commands::rank(&args)?;
            println!(
                "wrote {} files to {}",
                files.len(),
                args.model.out.display()
            );
        }
        Command::Correlate(args) => {
            for line in commands::correlate(&args)? {
                println!("{line}");
            }
        }
        Command::Scatter(args) => {
            commands::scatter(&args)?;
            println!("wrote {}", args.model.out.join("scatter.csv").display());
        }
        Command::IngestCheck(args) => {
            for line in commands::ingest_check(&args)? {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(CliError::config("").exit_code() as u8),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.to_string().replace('\n', " "));
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
