//! Experiment runner behind the `schurdist` binary. Every subcommand
//! produces one [`ExperimentReport`], rendered as JSON or CSV.

pub mod args;
pub mod commands;
pub mod report;

use std::io::Write;

use schurdist::Limits;

pub use args::{Cli, Command, Format};
pub use report::ExperimentReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: schurdist::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 i/o, 2 parse or domain, 3 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_capacity() => 3,
            CliError::Core { .. } | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Attaches the offending subcommand or parameter to a library error.
pub(crate) trait Context<T> {
    fn ctx(self, what: impl std::fmt::Display) -> Result<T, CliError>;
}

impl<T> Context<T> for schurdist::Result<T> {
    fn ctx(self, what: impl std::fmt::Display) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context: what.to_string(), source })
    }
}

/// Applies `--cap key=value` overrides to the default limits.
pub fn limits_from_caps(caps: &[String]) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    for cap in caps {
        let (key, value) = cap
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--cap '{cap}': expected KEY=VALUE")))?;
        let bad = || CliError::Usage(format!("--cap '{cap}': '{value}' is not a non-negative integer"));
        match key.trim() {
            "dense" => limits.dense_dim = value.trim().parse().map_err(|_| bad())?,
            "partitions" => limits.partitions = value.trim().parse().map_err(|_| bad())?,
            "subsets" => limits.subsets = value.trim().parse().map_err(|_| bad())?,
            other => {
                return Err(CliError::Usage(format!(
                    "--cap: unknown key '{other}' (dense, partitions, subsets)"
                )))
            }
        }
    }
    Ok(limits)
}

/// Runs the parsed command and renders it in the requested format.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let limits = limits_from_caps(&cli.caps)?;
    let report = commands::run(&cli.command, cli.seed, &limits)?;
    Ok(match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}

/// [`execute`], then write to `--out` or stdout.
pub fn execute_and_write(cli: &Cli) -> Result<(), CliError> {
    let text = execute(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_overrides() {
        let l = limits_from_caps(&["dense=16".into(), "subsets = 7".into()]).unwrap();
        assert_eq!((l.dense_dim, l.subsets), (16, 7));
        assert_eq!(limits_from_caps(&["dense".into()]).unwrap_err().exit_code(), 2);
        assert_eq!(limits_from_caps(&["width=3".into()]).unwrap_err().exit_code(), 2);
    }
}
