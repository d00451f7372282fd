use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use toeplitz_cli::{emit, exit_code, parse_config, run, CliError, Command, EXIT_INPUT_ERROR};

/// Berezin-Toeplitz spectral experiments on the Bargmann space and the sphere.
#[derive(Debug, Parser)]
#[command(name = "toeplitz", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory for the JSON report and CSV table.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for parameter sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Reserved; every computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    };
    ExitCode::from(code as u8)
}

fn execute(args: &Args) -> Result<i32, CliError> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::input(format!("--threads {t}: {e}")))?;
    }
    let config = parse_config(&args.config)?;
    let result = run(args.command, &config);
    let code = exit_code(&result);
    let outcome = result?;
    for (n, t) in &outcome.timings {
        eprintln!("N = {n}: {:.3} s", t.as_secs_f64());
    }
    for path in emit(&outcome, args.command, &config, &args.out)? {
        eprintln!("wrote {}", path.display());
    }
    println!("{}: {}", args.command.name(), outcome.verdict);
    Ok(code)
}
