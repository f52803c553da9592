//! The CSV tables every command emits, and reading them back for plotting.

use std::cmp::Ordering;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(x) => write!(out, "{x}").unwrap(),
            Cell::Int(n) => write!(out, "{n}").unwrap(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                write!(out, "\"{}\"", s.replace('"', "\"\"")).unwrap()
            }
            Cell::Text(s) => out.push_str(s),
            Cell::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Cell::Empty => {}
        }
    }

    fn key_cmp(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Num(a), Cell::Num(b)) => a.total_cmp(b),
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (Cell::Bool(a), Cell::Bool(b)) => a.cmp(b),
            (Cell::Empty, Cell::Empty) => Ordering::Equal,
            (Cell::Empty, _) => Ordering::Less,
            (_, Cell::Empty) => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    /// `key=value` pairs stamped on the comment line after the schema.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Leading columns that identify a row; rows are sorted on them.
    pub key_len: usize,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str], key_len: usize) -> Self {
        Table { command, meta: Vec::new(), columns: columns.to_vec(), rows: Vec::new(), key_len }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn sort(&mut self) {
        let k = self.key_len;
        self.rows.sort_by(|a, b| {
            a[..k].iter().zip(&b[..k]).map(|(x, y)| x.key_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# sil schema={SCHEMA} command={}", self.command);
        for (k, v) in &self.meta {
            write!(out, " {k}={v}").unwrap();
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// A table read back from disk: header plus raw fields.
#[derive(Debug, Clone)]
pub struct Rows {
    pub columns: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl Rows {
    pub fn parse(text: &str) -> Result<Self, String> {
        let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let columns = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let records = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(String::from).collect()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        Ok(Rows { columns, records })
    }

    pub fn from_table(table: &Table) -> Self {
        Rows::parse(&table.to_csv()).expect("own output parses")
    }

    pub fn index(&self, name: &str) -> Result<usize, String> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| format!("missing column {name:?}"))
    }

    /// Numeric value of column `col` in record `i`; `None` for an empty field.
    pub fn num(&self, i: usize, col: usize) -> Result<Option<f64>, String> {
        let field = self.records[i][col].trim();
        if field.is_empty() {
            return Ok(None);
        }
        field.parse().map(Some).map_err(|_| format!("row {}: not a number: {field:?}", i + 1))
    }
}
