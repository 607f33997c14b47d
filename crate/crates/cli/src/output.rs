use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

pub type CsvOut = csv::Writer<BufWriter<File>>;

/// Opens `path` for CSV output, writing `# <header>` as the first line.
pub fn create_csv(path: &Path, header: &str, columns: &[&str]) -> Result<CsvOut> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# {header}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns)?;
    Ok(csv)
}

pub fn num(x: f64) -> String {
    format!("{x:.6}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
