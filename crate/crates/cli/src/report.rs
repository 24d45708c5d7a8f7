//! Deterministic CSV/JSON emission.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

/// 17 significant digits: round-trips every f64 bit pattern.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV writer with an embedded `# key = value` config header.
pub struct CsvReport {
    lines: Vec<String>,
}

impl CsvReport {
    pub fn new(command: &str, config: &[(&str, String)], columns: &[&str]) -> Self {
        let mut lines = vec![format!("# gapflow {command}")];
        for (k, v) in config {
            lines.push(format!("# {k} = {v}"));
        }
        lines.push(columns.join(","));
        CsvReport { lines }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = String::with_capacity(self.lines.iter().map(|l| l.len() + 1).sum());
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
    }
}

/// Write a JSON value with a trailing newline.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Config pairs as a JSON object for embedding in summaries.
pub fn config_json(config: &[(&str, String)]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = config
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
        .collect();
    serde_json::Value::Object(map)
}

/// Minimal gnuplot script plotting CSV columns.
pub fn write_plot_script(
    path: &Path,
    csv: &Path,
    title: &str,
    x_col: usize,
    y_cols: &[(usize, &str)],
    loglog: bool,
) -> Result<()> {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    if loglog {
        s.push_str("set logscale xy\n");
    }
    s.push_str("set key left top\n");
    let plots: Vec<String> = y_cols
        .iter()
        .map(|(col, name)| {
            format!(
                "'{}' using {}:{} with linespoints title '{}'",
                csv.display(),
                x_col,
                col,
                name
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s.push_str("pause -1 'press enter'\n");
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}
