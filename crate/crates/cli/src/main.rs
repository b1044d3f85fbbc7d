//! `conical-ab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 numerical failure.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, ScatterConfig, ShellConfig, SpectrumConfig, VerifyConfig, XsecConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("output failed: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<conical_ab::Error> for CliError {
    fn from(e: conical_ab::Error) -> Self {
        match e {
            conical_ab::Error::InvalidParams(_) => CliError::Invalid(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    // each arm validates the whole configuration before computing
    let (outcome, out) = match cli.command {
        Command::Spectrum(a) => {
            let cfg = SpectrumConfig::from_args(&a)?;
            (commands::spectrum(&cfg)?, cfg.out)
        }
        Command::Scatter(a) => {
            let cfg = ScatterConfig::from_args(&a)?;
            (commands::scatter(&cfg)?, cfg.out)
        }
        Command::Xsec(a) => {
            let cfg = XsecConfig::from_args(&a)?;
            (commands::xsec(&cfg)?, cfg.out)
        }
        Command::Verify(a) => {
            let cfg = VerifyConfig::from_args(&a)?;
            (commands::verify(&cfg)?, cfg.out)
        }
        Command::Shell(a) => {
            let cfg = ShellConfig::from_args(&a)?;
            (commands::shell(&cfg)?, cfg.out)
        }
    };
    match &out.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    Ok(if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
