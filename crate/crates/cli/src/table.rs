//! Column-ordered result tables and their CSV / JSON renderings.

use std::io::Write;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use trapfermi::ExactRational;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Null,
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(_) | Cell::Null => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

/// Numerator, denominator and nearest double of an exact value.
pub fn rational_cells(q: &ExactRational) -> [Cell; 3] {
    [
        Cell::Text(q.numer().to_string()),
        Cell::Text(q.denom().to_string()),
        Cell::Float(trapfermi::exact::to_f64(q)),
    ]
}

pub const RATIONAL_COLUMNS: [&str; 3] = ["numerator", "denominator", "decimal"];

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
fn format_float(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub d: serde_json::Value,
    #[serde(rename = "M")]
    pub m: Option<u32>,
    #[serde(rename = "N0")]
    pub n0: Option<String>,
    pub two_m_tilde: Option<u64>,
    pub command: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, meta: &Meta, mut out: impl Write) -> serde_json::Result<()> {
        #[derive(Serialize)]
        struct Document<'a> {
            meta: &'a Meta,
            data: Rows<'a>,
        }
        serde_json::to_writer_pretty(
            &mut out,
            &Document {
                meta,
                data: Rows(self),
            },
        )?;
        writeln!(out).map_err(serde_json::Error::io)
    }

    /// Fixed-width text for terminal display.
    pub fn write_text(&self, mut out: impl Write) -> std::io::Result<()> {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::csv_text).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain([self.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |out: &mut dyn Write, items: &[&str]| -> std::io::Result<()> {
            let last = items.len() - 1;
            for (j, item) in items.iter().enumerate() {
                if j == last {
                    writeln!(out, "{item}")?;
                } else {
                    write!(out, "{item:<w$}  ", w = widths[j])?;
                }
            }
            Ok(())
        };
        line(&mut out, &self.columns)?;
        for row in &cells {
            line(
                &mut out,
                &row.iter().map(String::as_str).collect::<Vec<_>>(),
            )?;
        }
        Ok(())
    }
}

struct Rows<'a>(&'a Table);

struct Row<'a> {
    columns: &'a [&'static str],
    cells: &'a [Cell],
}

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for cells in &self.0.rows {
            seq.serialize_element(&Row {
                columns: &self.0.columns,
                cells,
            })?;
        }
        seq.end()
    }
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.columns.len()))?;
        for (k, v) in self.columns.iter().zip(self.cells) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
