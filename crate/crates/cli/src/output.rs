//! CSV/JSON rendering and the run manifest.

use std::fs;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use collapse_kit::bounds::config_hash;
use collapse_kit::config::serialize_config;
use collapse_kit::LoadedConfig;
use serde_json::{json, Value};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of one subcommand, renderable as CSV or JSON.
pub struct Report {
    pub command: &'static str,
    pub config: Option<LoadedConfig>,
    /// Extra `# key = value` header lines.
    pub header: Vec<(String, String)>,
    pub columns: String,
    pub rows: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, config: Option<LoadedConfig>, columns: &str) -> Self {
        Self {
            command,
            config,
            header: Vec::new(),
            columns: columns.to_string(),
            rows: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    /// A `quantity,value` row.
    pub fn quantity(&mut self, name: &str, value: f64) {
        self.rows.push(format!("{name},{value:e}"));
    }

    fn hash(&self) -> Option<String> {
        self.config.as_ref().map(|c| config_hash(&c.experiment, &c.constants))
    }

    pub fn csv(&self) -> String {
        let mut out = format!("# collapse-kit {VERSION}\n# command = {}\n", self.command);
        if let Some(h) = self.hash() {
            out.push_str(&format!("# config_hash = {h}\n"));
        }
        for (k, v) in &self.header {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> Value {
        json!({
            "command": self.command,
            "version": VERSION,
            "config_hash": self.hash(),
            "result": self.result,
        })
    }
}

/// RFC 3339 time of the run; `SOURCE_DATE_EPOCH` pins it for reproducible
/// output.
pub fn timestamp() -> String {
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    when.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Prints the report and, with an output directory, writes the CSV, the
/// canonical configuration and the manifest listing both.
pub fn emit(report: &Report, json: bool, out: Option<&Path>) -> Result<(), CliError> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.json()).expect("report serialises")
        );
    } else {
        print!("{}", report.csv());
    }
    let Some(dir) = out else {
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    let csv_name = format!("{}.csv", report.command);
    fs::write(dir.join(&csv_name), report.csv())?;
    outputs.push(csv_name);
    let canonical = report.config.as_ref().map(serialize_config);
    if let Some(text) = &canonical {
        fs::write(dir.join("config.cfg"), text)?;
        outputs.push("config.cfg".to_string());
    }
    let manifest = json!({
        "subcommand": report.command,
        "version": VERSION,
        "timestamp": timestamp(),
        "config": canonical,
        "config_hash": report.hash(),
        "arguments": std::env::args().skip(1).collect::<Vec<_>>(),
        "outputs": outputs,
    });
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n",
    )?;
    Ok(())
}
