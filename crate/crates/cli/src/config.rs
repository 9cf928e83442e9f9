//! `key = value` recipe files. Keys are long flag names without the
//! leading dashes (`_` and `-` are interchangeable); `#` starts a comment.

use std::ffi::OsString;
use std::path::Path;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Syntax { line: usize, message: String },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {e}"),
            ConfigError::Syntax { line, message } => write!(f, "config line {line}: {message}"),
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| ConfigError::Syntax { line: i + 1, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(syntax("empty key or value".into()));
        }
        if key == "config" {
            return Err(syntax("config files cannot include other config files".into()));
        }
        entries.push((key, value.to_string()));
    }
    Ok(entries)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    parse(&std::fs::read_to_string(path).map_err(ConfigError::Io)?)
}

/// Argument list with the file's entries placed before the user's flags,
/// so later (command-line) occurrences win.
pub fn merge(user: &[OsString], entries: &[(String, String)]) -> Vec<OsString> {
    let user_sets = |flag: &str| {
        user.iter()
            .filter_map(|a| a.to_str())
            .any(|a| a == flag || a.starts_with(&format!("{flag}=")))
    };
    let user_temperature = user_sets("--beta") || user_sets("--temperature");
    let mut out: Vec<OsString> = user.iter().take(2).cloned().collect();
    for (key, value) in entries {
        if user_temperature && (key == "beta" || key == "temperature") {
            continue;
        }
        out.push(format!("--{key}={value}").into());
    }
    out.extend(user.iter().skip(2).cloned());
    out
}
