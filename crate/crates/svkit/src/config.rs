//! `key = value` study files. Keys are the long command-line flag names.

use std::path::PathBuf;
use std::str::FromStr;

use svkit_core::meshpart::TieBreak;
use svkit_core::metrics::Scheme;

use crate::error::{HarnessError, Result};
use crate::study::{Format, StudyConfig};

pub const KEYS: [&str; 13] = [
    "example",
    "scheme",
    "k",
    "n",
    "t-final",
    "dt-factor",
    "tie-break",
    "perturb",
    "seed",
    "format",
    "out",
    "initial",
    "compare-dg",
];

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(HarnessError::ConfigSyntax {
                line: idx + 1,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(HarnessError::UnknownKey(key));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn invalid(key: &str, value: &str, reason: impl ToString) -> HarnessError {
    HarnessError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: reason.to_string(),
    }
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: ToString,
{
    value.trim().parse().map_err(|e: T::Err| invalid(key, value, e))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: ToString,
{
    value.split(',').map(|v| parse_one(key, v)).collect()
}

pub fn parse_scheme(value: &str) -> Result<Scheme> {
    match value.trim().to_ascii_lowercase().as_str() {
        "lsv" => Ok(Scheme::Lsv),
        "rsv" => Ok(Scheme::Rsv),
        "dg" => Ok(Scheme::Dg),
        _ => Err(invalid("scheme", value, "expected lsv, rsv or dg")),
    }
}

pub fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

impl StudyConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "example" => self.case = value.parse()?,
            "scheme" => self.schemes = value.split(',').map(parse_scheme).collect::<Result<_>>()?,
            "k" => self.ks = parse_list(key, value)?,
            "n" => self.ns = parse_list(key, value)?,
            "t-final" => self.t_final = Some(parse_one(key, value)?),
            "dt-factor" => self.dt_factor = parse_one(key, value)?,
            "tie-break" => {
                self.tie_break = match value.trim() {
                    "right" => TieBreak::RadauRight,
                    "left" => TieBreak::RadauLeft,
                    "sign" => TieBreak::Sign,
                    _ => return Err(invalid(key, value, "expected right, left or sign")),
                }
            }
            "perturb" => self.perturbation = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "format" => {
                self.format = match value.trim() {
                    "csv" => Format::Csv,
                    "md" | "markdown" => Format::Markdown,
                    _ => return Err(invalid(key, value, "expected csv or md")),
                }
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "initial" => self.initial = value.parse()?,
            "compare-dg" => self.compare_dg = parse_bool(key, value)?,
            other => return Err(HarnessError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Defaults overridden by `pairs` in order.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut config = Self::default();
        for (k, v) in pairs {
            config.set(k, v)?;
        }
        Ok(config)
    }
}
