//! CSV artifacts.  Floats are written with 17 significant digits so the
//! verdict recomputed from the file sees exactly the computed values.

use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Rows produced by a scenario, in output order.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A CSV artifact read back from disk.
#[derive(Debug, Clone)]
pub struct Artifact {
    header: Vec<String>,
    records: Vec<csv::StringRecord>,
}

impl Artifact {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(str::to_owned).collect();
        let records = r.records().collect::<Result<Vec<_>, _>>()?;
        Ok(Self { header, records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    fn index(&self, name: &str) -> Result<usize, CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Artifact(format!("column '{name}' missing")))
    }

    /// Rows in file order.
    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.records.iter().map(move |r| Row { artifact: self, record: r })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, CliError> {
        self.rows().map(|r| r.num(name)).collect()
    }
}

#[derive(Clone, Copy)]
pub struct Row<'a> {
    artifact: &'a Artifact,
    record: &'a csv::StringRecord,
}

impl Row<'_> {
    pub fn text(&self, name: &str) -> Result<&str, CliError> {
        let i = self.artifact.index(name)?;
        Ok(self.record.get(i).unwrap_or(""))
    }

    pub fn num(&self, name: &str) -> Result<f64, CliError> {
        let s = self.text(name)?;
        s.parse().map_err(|_| CliError::Artifact(format!("column '{name}': '{s}' is not a number")))
    }
}
