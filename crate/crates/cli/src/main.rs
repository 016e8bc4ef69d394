mod args;
mod brownian;
mod integrate;
mod output;
mod series;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

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
    let (outcome, output) = match &cli.command {
        Command::Integrate(a) => (integrate::run(a), &a.output),
        Command::Brownian(a) => (brownian::run(a), &a.output),
        Command::Series(a) => (series::run(a), &a.output),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = output::emit(&report, output) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    eprintln!("{}", report.summary);
    ExitCode::from(report.exit as u8)
}
