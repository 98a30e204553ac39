use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A named table of text cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_header(name: &str, header: Vec<String>) -> Self {
        Self { name: name.into(), header, rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.header.iter().cloned().zip(row.iter().map(|c| Value::String(c.clone()))).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Everything a subcommand produces.
#[derive(Clone, Debug, Default)]
pub struct Artifact {
    pub tables: Vec<Table>,
}

impl Artifact {
    pub fn push(&mut self, table: Table) {
        self.tables.push(table);
    }
}

/// Version, flags and seed recorded at the top of every output.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub command: String,
    pub flags: Value,
    pub seed: Option<u64>,
}

pub fn render(artifact: &Artifact, provenance: &Provenance, format: Format) -> io::Result<Vec<u8>> {
    let generated = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut out = Vec::new();
    match format {
        Format::Csv => {
            writeln!(out, "# mobius-boot {}", env!("CARGO_PKG_VERSION"))?;
            writeln!(out, "# command: {}", provenance.command)?;
            writeln!(out, "# flags: {}", provenance.flags)?;
            match provenance.seed {
                Some(s) => writeln!(out, "# seed: {s}")?,
                None => writeln!(out, "# seed: none")?,
            }
            writeln!(out, "# generated: {generated}")?;
            for table in &artifact.tables {
                writeln!(out, "# table: {}", table.name)?;
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&table.header)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                drop(w);
            }
        }
        Format::Json => {
            let tables: Map<String, Value> = artifact.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
            let doc = json!({
                "provenance": {
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": provenance.command,
                    "flags": provenance.flags,
                    "seed": provenance.seed,
                    "generated": generated,
                },
                "tables": tables,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.push(b'\n');
        }
    }
    Ok(out)
}

/// `--format` wins; otherwise a `.json` output path selects JSON.
pub fn resolve_format(format: Option<Format>, out: Option<&Path>) -> Format {
    format.unwrap_or_else(|| match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

pub fn write(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(bytes),
        None => io::stdout().lock().write_all(bytes),
    }
}
