use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::ResultRow;
use crate::error::Result;

pub const CSV_HEADER: [&str; 10] = [
    "experiment_id",
    "policy",
    "grid",
    "K",
    "M",
    "T",
    "gamma",
    "rep",
    "seed",
    "regret",
];

/// Writes the header and one record per row. Floats use Rust's shortest
/// round-trip formatting, so parsing a field gives back the exact value.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment_id.clone(),
            r.policy.clone(),
            r.grid.clone(),
            r.arms.to_string(),
            r.batches.to_string(),
            r.horizon.to_string(),
            r.gamma.to_string(),
            r.rep.to_string(),
            r.seed.to_string(),
            r.regret.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_csv(rows, file)
}

/// Pretty JSON with a trailing newline.
pub fn emit_summary_json<T: Serialize>(summary: &T, path: &Path) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, summary)?;
    file.write_all(b"\n")?;
    file.flush()?;
    Ok(())
}

/// `dir/name.csv` → `dir/name.summary.json`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv_path.with_file_name(format!("{stem}.summary.json"))
}
