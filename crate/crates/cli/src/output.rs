use std::path::Path;

use serde::Serialize;
use sgs_linalg::serial::fmt17;

use crate::CliError;

/// A rendered artifact, written under the output directory as `name`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

/// Everything a command produces. Nothing touches the filesystem until
/// [`write_outputs`], so failed runs leave no partial files.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub files: Vec<OutputFile>,
    /// One-line summary for the terminal.
    pub headline: String,
}

/// Comma-separated, header row, LF line endings.
pub fn csv_file(name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<OutputFile, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let contents = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(OutputFile { name: name.to_string(), contents })
}

pub fn json_file<T: Serialize>(name: &str, value: &T) -> Result<OutputFile, CliError> {
    let mut contents = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    contents.push(b'\n');
    Ok(OutputFile { name: name.to_string(), contents })
}

/// CSV cell for a real: 17 significant digits, empty when not finite.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        String::new()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for f in &outputs.files {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
