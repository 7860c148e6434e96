use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cglmp::cli::{render, resolve_output_path, run, CliError, RunConfig};

fn execute(config: &RunConfig) -> Result<i32, CliError> {
    let outcome = run(config)?;
    for line in &outcome.warnings {
        eprintln!("{line}");
    }
    let text = render(&outcome.report, config.format)?;
    match &config.output {
        Some(path) => {
            let path = resolve_output_path(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let code = match execute(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
