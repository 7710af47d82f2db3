use std::process::ExitCode;

use clap::Parser;
use confball_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cli.command.common().out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match outcome.failure {
        Some(msg) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
