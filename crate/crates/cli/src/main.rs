use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use zenoctl_cli::{run, write_atomic, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig { tol: cli.tol, seed: cli.seed };
    let report = match run(&cli.command, cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let rendered = report.render(cli.format);
    let written = match &cli.out {
        Some(path) => write_atomic(path, rendered.as_bytes()),
        None => std::io::stdout().write_all(rendered.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
