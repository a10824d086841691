use std::process::ExitCode;

use ccei_cli::{emit, run, Cli, EXIT_INPUT_ERROR};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&out, cli.options.out.as_deref())?;
        Ok(out.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
