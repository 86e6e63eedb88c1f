use std::process::ExitCode;

use clap::Parser;
use kkcoeff::cli::{self, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) if e.exit_code() == 0 => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    match cli::run(&args) {
        Ok(outcome) => {
            print!("{}", outcome.render(args.format));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
