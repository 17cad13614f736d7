//! CSV/JSON/plot-script emission. The manifest is always written last, so its
//! presence marks a complete run; on failure every partial file is removed.

use std::io::Write;
use std::path::{Path, PathBuf};

use girko_core::montecarlo::RunManifest;

use crate::CliError;

#[derive(Debug, Default)]
pub struct OutputBundle {
    pub csv_paths: Vec<PathBuf>,
    pub manifest_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
}

impl OutputBundle {
    /// Delete everything written so far (failure path).
    pub fn discard(&self) {
        for p in &self.csv_paths {
            let _ = std::fs::remove_file(p);
        }
        if let Some(p) = &self.plot_path {
            let _ = std::fs::remove_file(p);
        }
        if let Some(p) = &self.manifest_path {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Cell {
    Int(u64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// RFC-4180, LF line endings, '.' decimal separator.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: &[Vec<Cell>],
) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&header.iter().map(|h| quote(h)).collect::<Vec<_>>().join(","));
    out.push('\n');
    for row in rows {
        if row.len() != header.len() {
            return Err(CliError::Failure(format!(
                "row width {} does not match header width {}",
                row.len(),
                header.len()
            )));
        }
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => fmt_float(*v),
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Failure(format!("manifest serialization: {e}")))?;
    write_atomic(path, text.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    f.write_all(bytes)
        .and_then(|_| f.flush())
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

/// Standalone matplotlib script reading the emitted CSVs; no plotting
/// dependency is linked into the binary itself.
pub fn write_plot_script(
    path: &Path,
    csv: &Path,
    xcol: &str,
    ycols: &[&str],
    loglog: bool,
    title: &str,
) -> Result<(), CliError> {
    let mut body = String::from("#!/usr/bin/env python3\nimport csv\nimport sys\n\nimport matplotlib.pyplot as plt\n\n");
    body.push_str(&format!(
        "path = sys.argv[1] if len(sys.argv) > 1 else {:?}\n",
        csv.display().to_string()
    ));
    body.push_str("with open(path, newline=\"\") as fh:\n    rows = list(csv.DictReader(fh))\n\n");
    body.push_str(&format!("x = [float(r[{xcol:?}]) for r in rows]\n"));
    for y in ycols {
        body.push_str(&format!("plt.plot(x, [float(r[{y:?}]) for r in rows], label={y:?})\n"));
    }
    if loglog {
        body.push_str("plt.xscale(\"log\")\nplt.yscale(\"log\")\n");
    }
    body.push_str(&format!(
        "plt.xlabel({xcol:?})\nplt.legend()\nplt.title({title:?})\nplt.savefig(path.replace(\".csv\", \".png\"), dpi=150)\n"
    ));
    write_atomic(path, body.as_bytes())
}
