use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Cap,
    Construction,
    Verification,
}

impl ErrorKind {
    pub fn code(self) -> u8 {
        match self {
            ErrorKind::Input => 2,
            ErrorKind::Cap => 3,
            ErrorKind::Construction => 4,
            ErrorKind::Verification => 5,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    /// Report to print before failing, e.g. a verdict that did not match.
    pub output: Option<String>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl ToString) -> Self {
        CliError { kind, message: message.to_string(), output: None }
    }

    pub fn input(message: impl ToString) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn with_output(mut self, text: String) -> Self {
        self.output = Some(text);
        self
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Pretty JSON with a trailing newline. Struct fields serialize in
/// declaration order and maps are ordered, so output is byte-stable.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// CSV lines from a header and rows of already-escaped cells.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
