//! CSV tables with a `# config:` provenance header.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use lrdw_core::stats::Bin;

/// Bump when a column layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Identifies the table; companion files are named `<stem>.<name>.csv`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_owned(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn histogram(name: &str, bins: &[Bin]) -> Self {
        let mut t = Table::new(name, &["bin_left", "bin_right", "count"]);
        for b in bins {
            t.push(vec![num(b.left), num(b.right), b.count.to_string()]);
        }
        t
    }

    pub fn to_csv(&self, header: &str) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
            .expect("csv output is UTF-8");
        Ok(format!(
            "# config: {header}\n# schema: lrdw-{}/{SCHEMA_VERSION}\n{body}",
            self.name
        ))
    }
}

/// Shortest round-trip decimal; stable across platforms.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        x.to_string()
    }
}

/// Path of table `index`: the first goes to `out`, later ones to
/// `<stem>.<name>.<ext>` beside it.
pub fn table_path(out: &Path, index: usize, name: &str) -> PathBuf {
    if index == 0 {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}.{name}.{ext}"))
}

/// Writes every table and returns the paths written.
pub fn write_tables(out: &Path, header: &str, tables: &[Table]) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let path = table_path(out, i, &t.name);
        let text = t.to_csv(header).map_err(std::io::Error::other)?;
        let mut f = fs::File::create(&path)?;
        f.write_all(text.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
