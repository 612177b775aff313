//! Artifact sink: tasks emit named text files, the sink either writes them
//! into the output directory or prints them as labeled stdout sections.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use equichain_core::{Error, Result};

/// Output format for tabular artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned human-readable text
    Table,
    /// Comma-separated values with a header row
    Csv,
    /// Pretty-printed JSON
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Table => "txt",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Collects named artifacts and flushes them all at once, so a failing
/// task still leaves the artifacts emitted before the failure.
pub struct Artifacts {
    out: Option<PathBuf>,
    sections: Vec<(String, String)>,
}

impl Artifacts {
    pub fn new(out: Option<PathBuf>) -> Result<Self> {
        if let Some(dir) = &out {
            fs::create_dir_all(dir).map_err(|e| {
                Error::Unsupported(format!(
                    "cannot create output directory {}: {e}",
                    dir.display()
                ))
            })?;
        }
        Ok(Artifacts { out, sections: Vec::new() })
    }

    /// Queues one named artifact.
    pub fn emit(&mut self, name: impl Into<String>, content: String) {
        self.sections.push((name.into(), content));
    }

    /// Writes queued artifacts to disk (returning the paths), or prints
    /// them to stdout as `== name ==` sections.
    pub fn finish(self) -> Result<Vec<String>> {
        let mut written = Vec::new();
        match &self.out {
            Some(dir) => {
                for (name, content) in &self.sections {
                    let path = dir.join(name);
                    fs::write(&path, content).map_err(|e| {
                        Error::Unsupported(format!("cannot write {}: {e}", path.display()))
                    })?;
                    written.push(path.display().to_string());
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                for (name, content) in &self.sections {
                    let _ = writeln!(stdout, "== {name} ==");
                    let _ = write!(stdout, "{content}");
                    if !content.ends_with('\n') {
                        let _ = writeln!(stdout);
                    }
                    let _ = writeln!(stdout);
                }
            }
        }
        Ok(written)
    }
}

/// Quotes a CSV cell when it contains a delimiter, quote, or newline.
pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with a header row; integers stay unquoted, text cells are escaped.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Aligned text table: left-aligned first column, right-aligned rest.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: Vec<&str>| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                let _ = write!(line, "{:<w$}", cell, w = widths[i]);
            } else {
                let _ = write!(line, "{:>w$}", cell, w = widths[i]);
            }
        }
        line.trim_end().to_string()
    };
    let _ = writeln!(out, "{}", fmt_row(header.to_vec()));
    let _ = writeln!(
        out,
        "{}",
        "-".repeat(widths.iter().sum::<usize>() + 2 * (cols - 1))
    );
    for row in rows {
        let _ = writeln!(out, "{}", fmt_row(row.iter().map(String::as_str).collect()));
    }
    out
}
