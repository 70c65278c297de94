use std::process::ExitCode;

use qgamow_cli::{parse_config, run, ParseError};

fn main() -> ExitCode {
    let cfg = match parse_config(std::env::args_os()) {
        Ok(cfg) => cfg,
        // prints help/version with status 0 and usage errors with status 2
        Err(ParseError::Clap(e)) => e.exit(),
        Err(ParseError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
