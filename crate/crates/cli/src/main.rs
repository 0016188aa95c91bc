// Parameter checks are written as !(x > a) so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod data;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use config::{parse_args, Parsed, RunConfig};
use error::CliError;

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FHL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::param("FHL_THREADS", format!("'{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::param("FHL_THREADS", e))
}

fn execute(argv: &[String]) -> Result<u8, CliError> {
    let args = match parse_args(argv)? {
        Parsed::Info(text) => {
            print!("{text}");
            return Ok(0);
        }
        Parsed::Run(a) => a,
    };
    let mut cfg = RunConfig::from_args(*args)?;
    init_threads()?;
    let outcome = commands::run(&mut cfg)?;

    let mut table_on_stdout = false;
    if let Some(table) = &outcome.table {
        match &cfg.out {
            Some(path) => output::write_table_to(&cfg, table, path)?,
            None if matches!(cfg.command, config::CommandName::Curves | config::CommandName::KernelDump) => {
                let stdout = std::io::stdout();
                output::write_table(&cfg, table, &mut stdout.lock())?;
                table_on_stdout = true;
            }
            None => {}
        }
    }
    if let Some(path) = &cfg.report {
        let text = outcome.report.to_json(&cfg)?;
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let failed: Vec<&commands::Check> = outcome.checks.iter().filter(|c| !c.passed()).collect();
    let line = if failed.is_empty() {
        outcome.summary.clone()
    } else {
        let names: Vec<String> = failed
            .iter()
            .map(|c| format!("{} (expected {:?}, got {:?})", c.name, c.expected, c.observed))
            .collect();
        format!("{}; unexpected: {}", outcome.summary, names.join("; "))
    };
    if table_on_stdout {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
    if let Some(e) = outcome.failure {
        return Err(e);
    }
    if cfg.assert && !failed.is_empty() {
        return Ok(4);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = match execute(&argv) {
        Ok(code) => code,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("fhl: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}
