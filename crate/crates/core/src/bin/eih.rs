use std::fs;
use std::process::ExitCode;

use clap::Parser;
use efficient_index::cli::{self, Cli, Output};

fn main() -> ExitCode {
    let args = Cli::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(args: &Cli) -> efficient_index::Result<()> {
    let text = match cli::run(&args.command)? {
        Output::Json { report, plot } => {
            if let Some(path) = &args.plot_csv {
                fs::write(path, cli::plot_csv(&plot)?)?;
            }
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Output::Csv(text) => text,
    };
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
