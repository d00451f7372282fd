//! Config parsing, command dispatch and report writing for the `toeplitz`
//! binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::{Path, PathBuf};

pub use commands::{run, Command, Outcome};
pub use config::{parse_config, parse_config_str, ExperimentConfig};
pub use error::{CliError, CliResult};

/// Success (PASS or COMPUTED).
pub const EXIT_SUCCESS: i32 = 0;
/// FAIL or UNDECIDED verdict.
pub const EXIT_VERDICT_FAIL: i32 = 1;
/// Bad input, module rejection or I/O failure.
pub const EXIT_INPUT_ERROR: i32 = 2;

pub fn exit_code(result: &CliResult<Outcome>) -> i32 {
    match result {
        Ok(o) if o.verdict.is_success() => EXIT_SUCCESS,
        Ok(_) => EXIT_VERDICT_FAIL,
        Err(_) => EXIT_INPUT_ERROR,
    }
}

/// Writes the JSON report and, when present, the CSV table. File names
/// default to `<command>.json` and `<command>.csv` inside `out_dir`.
pub fn emit(outcome: &Outcome, command: Command, config: &ExperimentConfig, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let json_name = config
        .output
        .json
        .clone()
        .unwrap_or_else(|| format!("{}.json", command.name()));
    let mut written = vec![report::write_file(
        out_dir,
        &json_name,
        &report::to_json_string(&outcome.report),
    )?];
    if let Some(table) = &outcome.table {
        let csv_name = config
            .output
            .csv
            .clone()
            .unwrap_or_else(|| format!("{}.csv", command.name()));
        written.push(report::write_file(out_dir, &csv_name, &table.to_csv())?);
    }
    Ok(written)
}
