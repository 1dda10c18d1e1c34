use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

/// Directory used for reports when `--output` is not given.
pub const OUT_DIR_ENV: &str = "SEMIGROWTH_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// A rendered result: JSON always, CSV and text where they make sense.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
    /// False when a mathematical check failed.
    pub pass: bool,
}

impl Report {
    pub fn new<T: Serialize>(value: &T, text: String, pass: bool) -> Self {
        let json = serde_json::to_value(value).expect("report types serialize");
        Report { json: canonical(json), csv: None, text, pass }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                Some(s)
            }
            Format::Csv => self.csv.clone(),
            Format::Text => Some(self.text.clone()),
        }
    }
}

/// Recursively sorts object keys so output does not depend on map ordering.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

/// Where output goes: an explicit path, `$SEMIGROWTH_OUT_DIR/<command>.<ext>`, or stdout.
pub fn destination(output: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = output {
        return (p != Path::new("-")).then(|| p.to_path_buf());
    }
    let dir = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty())?;
    Some(Path::new(&dir).join(format!("{command}.{}", format.extension())))
}

pub fn write(body: &str, dest: Option<&Path>) -> io::Result<()> {
    match dest {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, body)
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}
