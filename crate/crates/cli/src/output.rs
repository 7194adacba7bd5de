//! Artifact emission: headers, CSV and JSON documents, output routing.
//!
//! Every artifact starts with a metadata block echoing the tool version,
//! the artifact format number, the command, and the full effective
//! configuration. CSV carries it as '#' comment lines; JSON carries it as
//! a leading "meta" object. Floats in CSV print in shortest round-trip
//! form, JSON numbers at 17 significant digits; both are locale-free, so
//! a rerun with the same configuration and seed is byte-identical.

use std::fs;
use std::io;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{EchoValue, RunConfig};
use crate::CliError;

/// Version of the artifact layout, bumped on any breaking output change.
pub const ARTIFACT_FORMAT: u32 = 1;

/// Where artifacts go: files under a directory, or stdout.
pub struct Sink {
    out_dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            out_dir: config.out_dir.clone(),
        }
    }

    /// Writes one artifact, creating the output directory on demand, or
    /// prints it when no directory is configured.
    pub fn emit(&self, file_name: &str, content: &str) -> Result<(), CliError> {
        match &self.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| describe(e, dir.display()))?;
                let path = dir.join(file_name);
                fs::write(&path, content).map_err(|e| describe(e, path.display()))?;
                println!("wrote {}", path.display());
            }
            None => print!("{content}"),
        }
        Ok(())
    }
}

fn describe(e: io::Error, target: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("cannot write {target}: {e}"))
}

fn header_lines(config: &RunConfig, command: &str) -> String {
    let mut s = format!(
        "# rough-heston {} artifact-format {ARTIFACT_FORMAT}\n# command: {command}\n",
        env!("CARGO_PKG_VERSION"),
    );
    for (key, value) in config.echo() {
        s.push_str(&format!("# {key} = {value}\n"));
    }
    s
}

/// Shortest round-trip decimal form of a float, '.' decimal separator.
pub fn csv_number(x: f64) -> String {
    format!("{x}")
}

/// A CSV artifact: metadata header, column names, then the rows.
pub fn csv_document(
    config: &RunConfig,
    command: &str,
    columns: &[&str],
    rows: &[Vec<String>],
) -> String {
    let mut s = header_lines(config, command);
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// A JSON artifact: a "meta" object first, then the body fields in their
/// given order.
pub fn json_document(config: &RunConfig, command: &str, body: Value) -> Result<String, CliError> {
    let mut meta_config = Map::new();
    for (key, value) in config.echo() {
        let v = match value {
            EchoValue::Float(x) => json!(x),
            EchoValue::Int(n) => json!(n),
            EchoValue::Text(s) => json!(s),
        };
        meta_config.insert(key.to_string(), v);
    }
    let mut root = Map::new();
    root.insert(
        "meta".into(),
        json!({
            "tool": "rough-heston",
            "version": env!("CARGO_PKG_VERSION"),
            "artifact_format": ARTIFACT_FORMAT,
            "command": command,
            "config": Value::Object(meta_config),
        }),
    );
    match body {
        Value::Object(fields) => {
            for (key, value) in fields {
                root.insert(key, value);
            }
        }
        other => {
            root.insert("result".into(), other);
        }
    }

    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    Value::Object(root)
        .serialize(&mut ser)
        .map_err(|e| CliError::Usage(format!("cannot serialize output: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Usage(format!("non-UTF8 output: {e}")))
}

/// Compact JSON with floats at 17 significant digits, enough to round-trip
/// any double exactly.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_document_is_header_then_columns_then_rows() {
        let config = RunConfig::default();
        let doc = csv_document(
            &config,
            "demo",
            &["a", "b"],
            &[vec!["1".into(), "2".into()]],
        );
        let lines: Vec<&str> = doc.lines().collect();
        assert!(lines[0].starts_with("# rough-heston "));
        assert_eq!(lines[1], "# command: demo");
        assert!(lines.contains(&"# model.rho = -0.5"));
        assert_eq!(lines[lines.len() - 2], "a,b");
        assert_eq!(lines[lines.len() - 1], "1,2");
        assert!(doc.ends_with('\n'));
    }

    #[test]
    fn json_document_leads_with_meta_and_keeps_17_digits() {
        let config = RunConfig::default();
        let doc = json_document(&config, "demo", json!({ "x": 0.1 })).unwrap();
        assert!(doc.starts_with("{\"meta\":{\"tool\":\"rough-heston\""));
        assert!(
            doc.contains("\"x\":1.0000000000000001e-1"),
            "17-significant-digit float missing in {doc}"
        );
        let parsed: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(parsed["meta"]["config"]["hawkes.seed"], json!(41));
        assert_eq!(parsed["x"], json!(0.1));
    }
}
