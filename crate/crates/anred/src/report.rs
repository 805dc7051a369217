//! Machine-readable run summaries.
//!
//! A report is an ordered list of `key=value` pairs written once, as a
//! whole, to one stream. Keys are dotted lowercase words; values are kept
//! single-line. The leading `schema` entry versions the format so
//! consumers can detect changes.

use std::fmt::Display;
use std::io::{self, Write};

pub const SCHEMA_VERSION: u32 = 1;

/// An append-only key/value document.
#[derive(Clone, Debug)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Self { entries: Vec::new() };
        report.push("schema", SCHEMA_VERSION);
        report.push("command", command);
        report
    }

    /// Appends one entry. Newlines in the value are flattened to spaces to
    /// keep the document line-oriented.
    pub fn push(&mut self, key: &str, value: impl Display) {
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.to_owned(), value));
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn write_to(&self, out: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.entries {
            writeln!(out, "{key}={value}")?;
        }
        Ok(())
    }
}
