use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use isolab_cli::{render, run, usage_error, Cli, EXIT_ERROR};
use serde_json::Value;

/// A closed pipe is not worth a panic; the exit code still reports the job.
fn emit(doc: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{}", render(doc));
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit();
        }
        Err(e) => {
            emit(&usage_error(e.to_string().trim()));
            std::process::exit(EXIT_ERROR);
        }
    };
    let (code, doc) = run(&cli.command);
    emit(&doc);
    std::process::exit(code);
}
