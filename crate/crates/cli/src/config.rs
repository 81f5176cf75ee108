//! Run configuration: defaults, an optional `key=value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use easyqg::tensor::DEFAULT_BUDGET;

use crate::CliError;

pub const DEFAULT_MAX_LEGS: usize = 8;
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_legs: usize,
    /// Largest number of tensor entries an operator may touch.
    pub budget: u128,
    /// Required by every stochastic command.
    pub seed: Option<u64>,
    pub samples: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_legs: DEFAULT_MAX_LEGS,
            budget: DEFAULT_BUDGET,
            seed: None,
            samples: DEFAULT_SAMPLES,
            format: Format::Text,
            output: None,
            jobs: None,
        }
    }
}

fn positive<T: FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T, CliError> {
    match v.trim().parse::<T>() {
        Ok(x) if x > T::default() => Ok(x),
        _ => Err(CliError::Usage(format!("{key} must be a positive integer, got '{v}'"))),
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "max_legs" => self.max_legs = positive(key, value)?,
            "budget" => self.budget = positive(key, value)?,
            "seed" => {
                self.seed = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("seed must be an unsigned integer, got '{value}'")))?,
                )
            }
            "samples" => self.samples = positive(key, value)?,
            "format" => self.format = value.parse().map_err(CliError::Usage)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "jobs" => self.jobs = Some(positive(key, value)?),
            _ => return Err(CliError::Usage(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key=value", no + 1)))?;
            self.set(k.trim(), v)
                .map_err(|e| CliError::Usage(format!("{origin}:{}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Usage("this command is stochastic and needs --seed".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let mut c = RunConfig::default();
        c.apply_text("# run\nmax_legs = 6\nseed=42\nformat = json\n\nsamples=10 # few\n", "cfg")
            .unwrap();
        assert_eq!(c.max_legs, 6);
        assert_eq!(c.seed, Some(42));
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.samples, 10);
        assert_eq!(c.budget, DEFAULT_BUDGET);
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_text("max_legs 6", "cfg"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_text("max_legs=0", "cfg"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_text("colour=red", "cfg"), Err(CliError::Usage(_))));
        assert!(c.require_seed().is_err());
    }
}
