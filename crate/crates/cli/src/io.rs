use std::fmt::Display;
use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The computation itself failed. Exit code 1.
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn domain(e: impl Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Parses JSON, reporting the failing field path and position.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        CliError::Usage(format!(
            "{origin}: at `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    de.end()
        .map_err(|e| CliError::Usage(format!("{origin}: trailing input at line {}, column {}", e.line(), e.column())))?;
    Ok(value)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// Inline JSON, or `@path` to read it from a file.
pub fn inline_or_file<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => read_json(Path::new(path)),
        None => parse_json(arg, what),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

/// Where a command's result goes.
pub struct Sink {
    pub json: bool,
    pub out: Option<PathBuf>,
}

impl Sink {
    /// Prints `text` (or the JSON form with `--json`) and writes `doc` to
    /// `--out` when given.
    pub fn emit<T: Serialize, D: Serialize>(&self, report: &T, text: &str, doc: &D) -> Result<(), CliError> {
        let mut stdout = std::io::stdout().lock();
        let written = if self.json {
            writeln!(stdout, "{}", to_json(report))
        } else {
            write!(stdout, "{text}")
        };
        match written.and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => return Err(CliError::Domain(format!("stdout: {e}"))),
            _ => {}
        }
        if let Some(path) = &self.out {
            fs::write(path, to_json(doc) + "\n")
                .map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// Comma- or space-separated list of indices.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

pub fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use latcode::cwcode::CodeCatalog;

    #[test]
    fn error_path_and_position() {
        let err = parse_json::<CodeCatalog>("{\"n\":7,\n\"k\":\"four\",\"codewords\":[]}", "code.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("code.json: at `k` (line 2"), "{msg}");
        assert_eq!(err.exit_code(), 2);
        let err = parse_json::<CodeCatalog>("{\"n\":7,\"k\":4,\"codewords\":[[0,1],[2,\"x\"]]}", "c").unwrap_err();
        assert!(err.to_string().contains("`codewords[1][1]`"), "{err}");
        assert!(parse_json::<CodeCatalog>("{\"n\":7", "c").is_err());
    }

    #[test]
    fn indices() {
        assert_eq!(parse_indices("1,3, 6").unwrap(), vec![1, 3, 6]);
        assert_eq!(parse_indices("").unwrap(), Vec::<usize>::new());
        assert!(parse_indices("1,-2").is_err());
        assert_eq!(join(&[1, 3, 5, 6]), "1,3,5,6");
    }
}
