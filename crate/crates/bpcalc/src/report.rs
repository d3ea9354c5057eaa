//! Deterministic text and CSV emission. Every numeric cell is printed with
//! 17 significant digits so that equal doubles always produce equal bytes.

use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

/// 17-significant-digit scientific rendering; round-trips every f64.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// A CSV table with an optional leading `# key=value ...` metadata line.
pub struct CsvTable {
    pub meta: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> CsvTable {
        CsvTable {
            meta: None,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.meta {
            let _ = writeln!(out, "# {meta}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, content)?;
    Ok(())
}
