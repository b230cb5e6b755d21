//! Text formats: edge lists, partitions and CSV tables.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::partition::VertexPartition;

/// Significant digits used for floating point output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Parse an edge list: an optional `#n <count>` header, then one `u v` pair
/// per line. Blank lines and other `#` lines are ignored. Without a header the
/// order is one more than the largest id.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<MultiGraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("n") {
                let count = parts
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad header {line:?}", lineno + 1)))?;
                n = Some(count);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut id = || -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected two vertex ids", lineno + 1)))?
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex id in {line:?}", lineno + 1)))
        };
        let (u, v) = (id()?, id()?);
        if parts.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing tokens in {line:?}", lineno + 1)));
        }
        edges.push((u, v));
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    MultiGraph::from_edges(n, edges)
}

pub fn format_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("#n {}\n", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_edge_list<W: Write>(g: &MultiGraph, mut w: W) -> Result<()> {
    w.write_all(format_edge_list(g).as_bytes())?;
    Ok(())
}

/// Parse a partition of `0..n`: one block per line, ids separated by spaces.
pub fn read_partition<R: BufRead>(reader: R, n: usize) -> Result<VertexPartition> {
    let mut blocks = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let block = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("line {}: bad vertex id {t:?}", lineno + 1))))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(block);
    }
    VertexPartition::new(n, blocks)
}

pub fn format_partition(p: &VertexPartition) -> String {
    let mut out = String::new();
    for block in p.blocks() {
        let line: Vec<String> = block.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&exponent) {
        let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
        let (mantissa, exp) = s.split_once('e').expect("scientific format");
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Header plus rows of equal width.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Internal(format!("row has {} cells, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::render))?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Parse a CSV produced by [`Table::write_csv`] into its header and numeric
/// columns; empty cells become `None`.
pub fn read_numeric_csv<R: std::io::Read>(r: R) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>)> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some).map_err(|_| Error::Parse(format!("non-numeric cell {c:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
