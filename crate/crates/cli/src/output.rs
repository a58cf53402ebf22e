//! CSV and JSON writers and readers for tables and verification reports.

use std::io::Write;

use clap::ValueEnum;
use cossqrt::report::ReportRecord;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// String-valued rows under a header, in emission order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cell at `row` under column `name`.
    pub fn get(&self, row: usize, name: &str) -> Option<&str> {
        let c = self.column(name)?;
        self.rows.get(row).map(|r| r[c].as_str())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            OutputFormat::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(|c| Value::String(c.clone())))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                write_json(&Value::Array(objects), out)?;
            }
        }
        Ok(())
    }

    pub fn parse(format: OutputFormat, text: &str) -> Result<Table, CliError> {
        match format {
            OutputFormat::Csv => {
                let mut r = csv::Reader::from_reader(text.as_bytes());
                let header = r.headers()?.iter().map(str::to_string).collect();
                let rows = r
                    .records()
                    .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
                    .collect::<Result<Vec<Vec<String>>, _>>()?;
                Ok(Table { header, rows })
            }
            OutputFormat::Json => {
                let objects: Vec<Map<String, Value>> = serde_json::from_str(text)?;
                let header: Vec<String> = objects.first().map(|o| o.keys().cloned().collect()).unwrap_or_default();
                let rows = objects
                    .iter()
                    .map(|o| {
                        header
                            .iter()
                            .map(|h| match o.get(h) {
                                Some(Value::String(s)) => s.clone(),
                                Some(other) => other.to_string(),
                                None => String::new(),
                            })
                            .collect()
                    })
                    .collect();
                Ok(Table { header, rows })
            }
        }
    }
}

fn write_json<W: Write>(value: &Value, mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_reports<W: Write>(records: &[ReportRecord], format: OutputFormat, out: W) -> Result<(), CliError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
        OutputFormat::Json => write_json(&serde_json::to_value(records)?, out),
    }
}

pub fn parse_reports(format: OutputFormat, text: &str) -> Result<Vec<ReportRecord>, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            Ok(r.deserialize().collect::<Result<Vec<ReportRecord>, _>>()?)
        }
        OutputFormat::Json => Ok(serde_json::from_str(text)?),
    }
}
