use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// One CSV cell. Reals keep 17 significant digits.
#[derive(Clone, Copy, Debug)]
pub enum Cell {
    Int(usize),
    Real(f64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
        }
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// `<stem>.manifest.toml` beside the CSV.
pub fn manifest_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.manifest.toml"))
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render())).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes the CSV and a TOML manifest recording how it was produced.
pub fn write_with_manifest<M: Serialize>(path: &Path, table: &Table, manifest: &M) -> Result<(), CliError> {
    write_csv(path, table)?;
    let text = toml::to_string_pretty(manifest)
        .map_err(|e| CliError::Parse(format!("cannot serialize manifest: {e}")))?;
    let mpath = manifest_path(path);
    fs::write(&mpath, text).map_err(io_err(&mpath))
}
