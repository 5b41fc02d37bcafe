use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use polyspectra_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|outcome| {
        outcome.files.write_all()?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("{} finished in {:.3} s", cli.command.name(), start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
