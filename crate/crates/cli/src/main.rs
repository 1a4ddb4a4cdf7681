mod commands;
mod failure;
mod options;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use failure::Failure;
use options::Cli;

const THREADS_VAR: &str = "NEHARI_FT_THREADS";

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let mut options = cli.options;
    if let Some(path) = options.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        options.merge_config(&text)?;
    }
    match &options.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            commands::run(cli.command, &options, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            commands::run(cli.command, &options, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let failure = Failure::usage(e.render().to_string().trim_end());
            eprintln!("{}", failure.record());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.record());
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
