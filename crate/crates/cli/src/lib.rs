//! Library side of the `lqfi` command-line tool.

pub mod args;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command};
use crate::checks::{check_table, failures, Check};
use crate::commands::{render, Emitted, Globals, RunConfig};
use crate::error::CliError;
use crate::output::Format;

/// Parses `argv`, runs the command and maps the outcome to an exit code.
pub fn run(argv: Vec<OsString>) -> ExitCode {
    let argv = match config::expand_args(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn emit(out: Option<&Path>, emitted: &Emitted) -> Result<(), CliError> {
    for (path, contents) in &emitted.files {
        write_file(path, contents)?;
    }
    match out {
        Some(path) => write_file(path, &emitted.main),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(emitted.main.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn check_document(command: &str, g: &Globals, params: &impl Serialize, checks: &[Check]) -> String {
    let config = RunConfig {
        command,
        globals: *g,
        window: None,
        params,
    };
    let failed = failures(checks);
    let report = serde_json::json!({
        "checks": checks.len(),
        "failed": failed,
        "findings": checks.iter().filter(|c| c.informational && !c.passed).count(),
    });
    render(g.format, &config, &check_table(checks), report)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    let g = Globals {
        format: cli.format,
        seed: cli.seed,
        threads: cli.threads,
    };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Dephasing(a) => emit(out, &commands::dephasing(a, &g)?),
        Command::Amplitude(a) => emit(out, &commands::amplitude(a, &g)?),
        Command::Depolarizing(a) => {
            let (emitted, report) = commands::depolarizing(a, &g)?;
            if g.format == Format::Csv {
                eprintln!("{}", commands::depolarizing_summary(&report));
            }
            emit(out, &emitted)
        }
        Command::Sweep(a) => {
            let dir = out.ok_or_else(|| CliError::Usage("sweep needs --out DIR".into()))?;
            let emitted = commands::sweep(a, &g, dir)?;
            emit(None, &emitted)
        }
        Command::Verify(a) => {
            let checks = checks::full_suite(a.states, g.seed)?;
            finish_checks(out, "verify", &g, a, &checks)
        }
        Command::Oracle(a) => {
            if a.resolution < 32 {
                return Err(CliError::Usage(format!("--resolution must be at least 32, got {}", a.resolution)));
            }
            let checks = checks::oracle_checks(a.states, g.seed, a.resolution)?;
            finish_checks(out, "oracle", &g, a, &checks)
        }
    }
}

fn finish_checks(
    out: Option<&Path>,
    command: &str,
    g: &Globals,
    params: &impl Serialize,
    checks: &[Check],
) -> Result<(), CliError> {
    let emitted = Emitted {
        main: check_document(command, g, params, checks),
        files: Vec::new(),
    };
    emit(out, &emitted)?;
    match failures(checks) {
        0 => Ok(()),
        failed => Err(CliError::Verification { failed }),
    }
}
