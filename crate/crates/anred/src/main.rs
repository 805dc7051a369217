//! Thin executable wrapper around [`anred::cli::run`].

use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out: Box<dyn Write> = Box::new(stdout.lock());
    let mut err: Box<dyn Write> = Box::new(stderr.lock());
    let status = anred::cli::run(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(status as u8)
}
