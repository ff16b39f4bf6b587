use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Duration;

use clap::ValueEnum;
use serde_json::Value;

/// Version of every CSV schema emitted by the tool. Bump when a column
/// changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Mismatch,
    Exhausted,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Mismatch => ExitCode::from(1),
            Status::Exhausted => ExitCode::from(3),
        }
    }
}

/// Flat rendering used for CSV and text output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub struct Report {
    /// Name of the CSV schema, e.g. `height`.
    pub schema: &'static str,
    pub json: Value,
    pub table: Table,
    pub status: Status,
}

pub fn emit(report: &Report, format: Format, timings: Option<Duration>) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let mut doc = report.json.clone();
            if let (Some(t), Value::Object(map)) = (timings, &mut doc) {
                map.insert(
                    "timings".into(),
                    serde_json::json!({ "total_ms": t.as_secs_f64() * 1e3 }),
                );
            }
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# cyheight {} schema v{CSV_SCHEMA_VERSION}",
                report.schema
            )?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            drop(w);
            if let Some(t) = timings {
                eprintln!("timings: total {:.3} ms", t.as_secs_f64() * 1e3);
            }
        }
        Format::Text => {
            write_text(&mut out, &report.table)?;
            if let Some(t) = timings {
                writeln!(out, "total time: {:.3} ms", t.as_secs_f64() * 1e3)?;
            }
        }
    }
    out.flush()
}

fn write_text(out: &mut impl Write, table: &Table) -> io::Result<()> {
    if table.rows.len() == 1 {
        let width = table.header.iter().map(|h| h.len()).max().unwrap_or(0);
        for (h, v) in table.header.iter().zip(&table.rows[0]) {
            writeln!(out, "{h:<width$}  {v}")?;
        }
        return Ok(());
    }
    let mut widths: Vec<usize> = table.header.iter().map(|h| h.len()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&table.header))?;
    for row in &table.rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}
