use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use keycrit_cli::{params::load_params, render, run, Format, EXPERIMENTS};

/// Run a named experiment and print its report.
#[derive(Debug, Parser)]
#[command(name = "keycrit", version)]
struct Args {
    /// One of: cex_i, cex_ii, cex_iii, spiked, toeplitz, ecc, markov, table, sweep.
    #[arg(long)]
    experiment: String,
    /// Parameters as a JSON object, or a path to a JSON file.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let result = load_params(args.params.as_deref())
        .and_then(|p| run(&args.experiment, &p, args.seed))
        .and_then(|r| Ok((render(&r, args.format)?, r.ok())));
    let (text, ok) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, keycrit_cli::CliError::UnknownExperiment(_)) {
                eprintln!("known experiments: {}", EXPERIMENTS.join(", "));
            }
            return ExitCode::from(2);
        }
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
