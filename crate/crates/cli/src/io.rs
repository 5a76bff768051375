use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use scheffers::grid::{grid_read, grid_write, read_csv, write_csv, GridFile};
use scheffers::{Error, Result};

/// Lattice metadata for CSV inputs, which carry indices only.
#[derive(Debug, Clone, Default)]
pub struct CsvMeta {
    pub origin: Option<Vec<f64>>,
    pub spacing: Option<Vec<f64>>,
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn read_input(path: &Path, meta: &CsvMeta) -> Result<GridFile> {
    if !is_csv(path) {
        return grid_read(path);
    }
    let text = std::fs::read_to_string(path)?;
    let first = text.lines().find(|l| !l.trim().is_empty()).ok_or_else(|| Error::Csv("empty file".into()))?;
    let dim = first.split(',').count().saturating_sub(1);
    let origin = meta.origin.clone().unwrap_or_else(|| vec![0.0; dim]);
    let spacing = meta.spacing.clone().unwrap_or_else(|| vec![1.0; dim]);
    let grid = read_csv(BufReader::new(text.as_bytes()), dim, origin, spacing)?;
    Ok(GridFile::Grid(grid))
}

pub fn write_output(path: &Path, file: &GridFile) -> Result<()> {
    if !is_csv(path) {
        return grid_write(path, file);
    }
    let GridFile::Grid(g) = file else {
        return Err(Error::Csv(format!("csv output holds real grids only, not {} files", file.kind())));
    };
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(&mut out, g)?;
    out.flush()?;
    Ok(())
}

