//! Plot scripts for the CSV outputs. Scripts are written, never run.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    EdgeworthError,
    CdfError,
    Density,
    Maximum,
}

impl PlotKind {
    /// Identifies the schema from the CSV header line.
    pub fn from_header(header: &str) -> Option<Self> {
        match header.trim() {
            "theta,n,r,sup_error,scaled_error" => Some(Self::EdgeworthError),
            "theta,n,sup_error_normal,sup_error_corrected,scaled_corrected" => Some(Self::CdfError),
            "n,mode,unique,u_star,frac,nint,agrees" => Some(Self::Density),
            "theta,n,mode,exact,predicted,scaled_residual" => Some(Self::Maximum),
            _ => None,
        }
    }

    fn body(self) -> &'static str {
        match self {
            Self::EdgeworthError => {
                r#"for r in sorted(set(int(row["r"]) for row in rows)):
    sel = [row for row in rows if int(row["r"]) == r]
    plt.loglog([int(s["n"]) for s in sel], [float(s["sup_error"]) for s in sel], "o-", label=f"r = {r}")
plt.xlabel("n")
plt.ylabel("sup error")
plt.legend()
"#
            }
            Self::CdfError => {
                r#"ns = [int(row["n"]) for row in rows]
plt.loglog(ns, [float(row["sup_error_normal"]) for row in rows], "o-", label="normal")
plt.loglog(ns, [float(row["sup_error_corrected"]) for row in rows], "s-", label="corrected")
plt.xlabel("n")
plt.ylabel("sup error")
plt.legend()
"#
            }
            Self::Density => {
                r#"agree = 0
xs, ys = [], []
for i, row in enumerate(rows, 1):
    agree += int(row["agrees"])
    xs.append(int(row["n"]))
    ys.append(agree / i)
plt.plot(xs, ys)
plt.xlabel("N")
plt.ylabel("fraction of n <= N with mode = nint(u*)")
"#
            }
            Self::Maximum => {
                r#"for theta in sorted(set(row["theta"] for row in rows), key=float):
    sel = [row for row in rows if row["theta"] == theta]
    plt.semilogx([int(s["n"]) for s in sel], [float(s["scaled_residual"]) for s in sel], "o-", label=f"theta = {float(theta):g}")
plt.xlabel("n")
plt.ylabel("residual * log n")
plt.legend()
"#
            }
        }
    }
}

/// Writes `<csv>.py` next to the CSV and returns its path.
pub fn emit_plot_script(csv_path: &Path) -> Result<PathBuf> {
    let text = fs::read_to_string(csv_path).with_context(|| format!("reading {}", csv_path.display()))?;
    let header = text.lines().next().unwrap_or_default();
    let Some(kind) = PlotKind::from_header(header) else {
        bail!("no plot available for CSV header `{header}`");
    };
    let csv_name = csv_path
        .file_name()
        .and_then(|s| s.to_str())
        .context("CSV path has no file name")?;
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    let script = format!(
        r#"import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / "{csv_name}") as f:
    rows = list(csv.DictReader(f))

{body}plt.tight_layout()
plt.savefig(here / "{stem}.png", dpi=150)
"#,
        body = kind.body()
    );
    let mut out = csv_path.to_path_buf();
    out.set_extension("py");
    fs::write(&out, script).with_context(|| format!("writing {}", out.display()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers() {
        assert_eq!(
            PlotKind::from_header("n,mode,unique,u_star,frac,nint,agrees\n"),
            Some(PlotKind::Density)
        );
        assert_eq!(PlotKind::from_header("k,prob"), None);
    }
}
