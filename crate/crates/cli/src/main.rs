//! `jacobi`: JSON in, JSON out front end for the diagram engine.
//!
//! Failures print `{"error": {"code", "message"}}` on stdout and exit with
//! 2 (usage), 3 (malformed input), 4 (validation), 5 (resource cutoff) or
//! 6 (i/o). A verification suite that runs but fails exits with 1.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use commands::{Cli, Failure};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(Failure::usage(e.render().to_string().trim_end())),
    };
    let out = match commands::run(&cli) {
        Ok(out) => out,
        Err(f) => return report(f),
    };
    let text = out.text + "\n";
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| e.to_string())
        }
    };
    match written {
        Err(e) => report(Failure::io(e)),
        Ok(()) if out.passed => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
    }
}

fn report(f: Failure) -> ExitCode {
    let body = json!({"error": {"code": f.code, "message": f.message}});
    let text = serde_json::to_string_pretty(&body).expect("error object serializes");
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(f.exit)
}
