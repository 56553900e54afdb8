use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use cayley_imc_cli::cli::Cli;
use cayley_imc_cli::{execute, Command};

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for oracle divergence.
    let spec = match Cli::try_parse() {
        Ok(cli) => cli.command.into_spec(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let tracing = matches!(spec.command, Command::Trace(_));
    let result = if tracing {
        let stdout = io::stdout();
        let mut out = io::BufWriter::new(stdout.lock());
        execute(&spec, Some(&mut out))
    } else {
        execute(&spec, None)
    };
    match result {
        Ok(outcome) => {
            let block = outcome.render(spec.json);
            let written = if tracing {
                io::stderr().write_all(block.as_bytes())
            } else {
                io::stdout().write_all(block.as_bytes())
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
