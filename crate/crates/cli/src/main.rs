//! `smoothbias` command-line tool.

mod config;
mod fail;
mod grid;
mod report;
mod run;

use clap::Parser;

use config::{Cli, RunConfig};
use fail::CliError;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            fail(CliError::Usage(first.to_string()));
        }
    };
    let result = RunConfig::merge(&cli.common, run::grid_args(&cli.command))
        .and_then(|cfg| run::run(&cli.command, &cfg));
    if let Err(e) = result {
        fail(e);
    }
}

fn fail(e: CliError) -> ! {
    eprintln!("{e}");
    std::process::exit(e.exit_code());
}
