use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;
use urfield_core::position_rep::SpacetimePoint;

use crate::config::CliError;

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_atomic(path, &text)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// `<path><suffix>`, e.g. `grid.csv` → `grid.csv.meta.json`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Rows of eight comma-separated numbers. Blank lines, `#` comments and a
/// leading `x,y,z,t,x2,y2,z2,t2` header are skipped.
pub fn parse_points(text: &str) -> Result<Vec<(SpacetimePoint, SpacetimePoint)>, CliError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if out.is_empty() && line.replace(' ', "") == "x,y,z,t,x2,y2,z2,t2" {
            continue;
        }
        let values: Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let values = values.map_err(|e| CliError::Input(format!("line {}: {e}", k + 1)))?;
        if values.len() != 8 {
            return Err(CliError::Input(format!("line {}: expected 8 values, found {}", k + 1, values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Input(format!("line {}: coordinates must be finite", k + 1)));
        }
        out.push((
            SpacetimePoint::new(values[0], values[1], values[2], values[3]),
            SpacetimePoint::new(values[4], values[5], values[6], values[7]),
        ));
    }
    if out.is_empty() {
        return Err(CliError::Input("points file has no rows".into()));
    }
    Ok(out)
}
