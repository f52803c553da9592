use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sil_cli::commands::{finish, run};
use sil_cli::{configure_threads, Cli, Failure, EXIT_FLAGS};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FLAGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sil {}: {f}", cli.command.name());
            ExitCode::from(f.code as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    configure_threads(std::env::var("SIL_THREADS").ok())?;
    let report = run(cli)?;
    let summary = report.summary.clone();
    let body = finish(cli, report)?;
    let mut out = std::io::stdout().lock();
    if body.is_empty() {
        writeln!(out, "{summary}").map_err(Failure::runtime)?;
    } else {
        // Stdout already carries the data; keep it machine-readable.
        out.write_all(body.as_bytes()).map_err(Failure::runtime)?;
        eprintln!("{summary}");
    }
    Ok(())
}
