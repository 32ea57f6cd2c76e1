//! Rendering of enumeration records as Markdown tables, CSV and JSON lines,
//! and of single-array analyses.

mod analysis;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::enumerate::EnumerationRecord;
use crate::homtheory::TripleWitness;

pub use analysis::{analyze, Analysis, CompleteCore, Eigenvalue, KreinEntry, Parameters};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
    JsonLines,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "csv" => Ok(TableFormat::Csv),
            "jsonl" | "json-lines" | "json" => Ok(TableFormat::JsonLines),
            other => Err(format!("unknown table format {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The printable cells of one record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub vertices: String,
    pub eigenvalues: String,
    pub array: String,
    pub witnesses: String,
}

impl TableRow {
    pub fn from_record(r: &EnumerationRecord) -> TableRow {
        let parts: Vec<String> = r.k.iter().map(u64::to_string).collect();
        let eigenvalues =
            r.spectrum.iter().map(|s| format!("{}^{{{}}}", s.value, s.multiplicity)).collect::<Vec<_>>().join(" ");
        TableRow {
            vertices: format!("v = {} = {}", r.n, parts.join(" + ")),
            eigenvalues,
            array: r.array.to_string(),
            witnesses: witness_cell(r.witnesses()),
        }
    }

    /// Cells without the witness column, separated by `" | "`.
    pub fn base_line(&self) -> String {
        format!("{} | {} | {}", self.vertices, self.eigenvalues, self.array)
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base_line())?;
        if !self.witnesses.is_empty() {
            write!(f, " | {}", self.witnesses)?;
        }
        Ok(())
    }
}

/// `"(0, 1, 1) (1, 0, 2)"`; triples of different `e` get an `e=` prefix.
pub fn witness_cell(ws: &[TripleWitness]) -> String {
    let mixed = ws.windows(2).any(|p| p[0].e != p[1].e);
    ws.iter().map(|w| if mixed { format!("e={}: {w}", w.e) } else { w.to_string() }).collect::<Vec<_>>().join(" ")
}

fn sorted(records: &[EnumerationRecord]) -> Vec<&EnumerationRecord> {
    let mut v: Vec<&EnumerationRecord> = records.iter().collect();
    v.sort_by_key(|r| r.array.sort_key());
    v
}

pub fn emit_table(records: &[EnumerationRecord], format: TableFormat) -> String {
    let rows = sorted(records);
    match format {
        TableFormat::Markdown => markdown(&rows),
        TableFormat::Csv => csv_table(&rows),
        TableFormat::JsonLines => rows.iter().map(|r| r.to_json() + "\n").collect(),
    }
}

fn markdown(rows: &[&EnumerationRecord]) -> String {
    let with_witnesses = rows.iter().any(|r| !r.witnesses().is_empty());
    let mut header = vec!["Number of vertices", "Eigenvalues", "Intersection #s"];
    if with_witnesses {
        header.push("α,β,γ");
    }
    let mut out = format!("| {} |\n", header.join(" | "));
    out += &format!("|{}\n", "---|".repeat(header.len()));
    for r in rows {
        let row = TableRow::from_record(r);
        if with_witnesses {
            out += &format!("| {} | {} |\n", row.base_line(), row.witnesses);
        } else {
            out += &format!("| {} |\n", row.base_line());
        }
    }
    out
}

fn csv_table(rows: &[&EnumerationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = "writing to memory cannot fail";
    w.write_record(["vertices", "eigenvalues", "array", "witnesses"]).expect(io);
    for r in rows {
        let row = TableRow::from_record(r);
        w.write_record([&row.vertices, &row.eigenvalues, &row.array, &row.witnesses]).expect(io);
    }
    String::from_utf8(w.into_inner().expect(io)).expect("csv output is UTF-8")
}

/// Parses JSON-lines output back into records; blank lines are ignored.
pub fn parse_jsonl(text: &str) -> Result<Vec<EnumerationRecord>, ReportError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| ReportError::Parse { line: i + 1, message: e.to_string() }))
        .collect()
}
