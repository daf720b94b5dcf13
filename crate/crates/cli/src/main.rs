mod args;
mod run;

use std::collections::HashSet;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, Format, JobConfig};
use run::{execute, CliError, Report};

const WORKERS_VAR: &str = "BCFMOP_WORKERS";

/// Reads `key = value` lines (or `key value`); `#` starts a comment.
fn read_config(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let mut pairs = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(char::is_whitespace))
            .unwrap_or((line, "true"));
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("{path}:{}: missing key", number + 1)));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

/// Removes `--config FILE` from `argv` and appends every configured key the
/// command line does not already set.
fn apply_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut args = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            config = Some(iter.next().ok_or_else(|| CliError::Usage("--config needs a file".into()))?);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            args.push(arg);
        }
    }
    let Some(path) = config else { return Ok(args) };
    let present: HashSet<String> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (key, value) in read_config(&path)? {
        if present.contains(&key) || value == "false" {
            continue;
        }
        args.push(format!("--{key}"));
        if value != "true" {
            args.push(value);
        }
    }
    Ok(args)
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(value) = std::env::var(WORKERS_VAR) else { return Ok(()) };
    let workers: usize = value
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Failed(e.to_string()))
}

fn load_replay(path: &str) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let config = report.get("config").cloned().ok_or_else(|| CliError::Usage(format!("{path}: no embedded config")))?;
    serde_json::from_value(config).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn render_csv(table: &[Vec<String>]) -> String {
    table.iter().map(|row| row.join(",") + "\n").collect()
}

fn run(argv: Vec<String>) -> Result<ExitCode, CliError> {
    let argv = apply_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return Ok(ExitCode::from(err.exit_code() as u8));
        }
    };
    configure_workers()?;
    let job = match &cli.job.command {
        Command::Replay(replay) => load_replay(&replay.report)?,
        _ => cli.job,
    };
    let output = execute(&job)?;
    let text = match (job.format, &output.table) {
        (Format::Json, _) => {
            let report = Report { config: &job, result: &output.result, checks: &output.checks };
            serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
        }
        (Format::Csv, Some(table)) => render_csv(table),
        (Format::Csv, None) => return Err(CliError::Usage("CSV output is only available for srpoly and zeros".into())),
    };
    print!("{text}");
    match output.checks.iter().find(|c| !c.passed()) {
        Some(failed) => {
            eprintln!("check {} failed: {}", failed.check, failed.witness.as_deref().unwrap_or("no witness"));
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys_yield_to_the_command_line() {
        let dir = std::env::temp_dir().join(format!("bcfmop-config-{}", std::process::id()));
        std::fs::write(&dir, "n = 5\nplain_first = true\nverify = false\n--count 3\n").unwrap();
        let argv: Vec<String> = ["bcfmop", "bcf", "--n=7", "--config", dir.to_str().unwrap()].map(String::from).to_vec();
        let args = apply_config(argv).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(args, ["bcfmop", "bcf", "--n=7", "--plain-first", "--count", "3"]);
    }
}
