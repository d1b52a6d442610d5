use std::fmt;
use std::fs;
use std::io::Write;

use intmeasure::Error;
use serde::Serialize;

use crate::{Format, Settings};

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ExperimentFailure { .. }
            | Error::BudgetExceeded { .. }
            | Error::NoConvergence { .. }
            | Error::RadiusBound { .. } => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// A failed verdict; the report is still written.
#[derive(Debug)]
pub struct Failure {
    pub index: Option<u32>,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "FAIL at index {i}: {}", self.reason),
            None => write!(f, "FAIL: {}", self.reason),
        }
    }
}

pub struct Report {
    pub name: &'static str,
    pub json: serde_json::Value,
    pub csv: String,
    pub svg: String,
    pub failure: Option<Failure>,
}

impl Report {
    pub fn new(name: &'static str, json: impl Serialize, csv: String, svg: String) -> Self {
        Self {
            name,
            json: serde_json::to_value(json).expect("report serializes"),
            csv,
            svg,
            failure: None,
        }
    }

    pub fn failing(mut self, failure: Option<Failure>) -> Self {
        self.failure = failure;
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Svg => self.svg.clone(),
        }
    }
}

/// Builds a CSV table from serializable rows.
pub fn csv_table<R: Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

pub fn emit(settings: &Settings, report: &Report) -> Result<(), CliError> {
    let mut formats: Vec<Format> = Vec::new();
    for f in &settings.formats {
        if !formats.contains(f) {
            formats.push(*f);
        }
    }
    match &settings.out {
        None => {
            let [format] = formats.as_slice() else {
                return Err(CliError::config("several formats need --out"));
            };
            std::io::stdout()
                .write_all(report.render(*format).as_bytes())
                .map_err(|e| CliError::config(e.to_string()))
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::config(format!("{}: {e}", dir.display())))?;
            for format in formats {
                let path = dir.join(format!("{}.{}", report.name, format.extension()));
                fs::write(&path, report.render(format))
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
    }
}
