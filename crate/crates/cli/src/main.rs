use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use bighom_cli::{dispatch, Exit, Manifest, Outcome};
use clap::Parser;

fn main() -> ExitCode {
    let manifest = match Manifest::try_parse() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return ExitCode::from(if e.use_stderr() { Exit::Invalid.code() } else { 0 });
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| dispatch(&manifest)))
        .unwrap_or_else(|_| Outcome::error(Exit::Internal, "internal error"));
    if let Some(msg) = outcome.doc.get("error").and_then(|m| m.as_str()) {
        eprintln!("error: {msg}");
    }
    let text = outcome.render(manifest.json);
    match &manifest.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(Exit::Invalid.code());
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(outcome.exit.code())
}
