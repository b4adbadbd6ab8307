//! The report artifact shared by every command.
//!
//! ```json
//! {
//!   "schema": "coarsetop.report",
//!   "version": 1,
//!   "command": "enumerate",
//!   "params": [["kind", "prebornology"], ["n", "5"]],
//!   "status": "pass",
//!   "exit_code": 0,
//!   "summary": [["counts", "1 2 5 15 52"]],
//!   "tables": [{"title": "...", "layout": "grid", "columns": [...], "rows": [[...]]}],
//!   "failures": [],
//!   "details": { ... }
//! }
//! ```
//!
//! `params` and `summary` are ordered key/value pairs. `details` holds the
//! command's full result and is not interpreted by `report`.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "coarsetop.report";
pub const VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Falsified,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Falsified => EXIT_FALSIFIED,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Falsified => "falsified",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Aligned columns under a header.
    Grid,
    /// One `first second: third (rest)` line per row.
    List,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub title: String,
    pub layout: Layout,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn grid(title: &str, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            layout: Layout::Grid,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn list(title: &str, columns: &[&str]) -> Self {
        Table { layout: Layout::List, ..Table::grid(title, columns) }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, out: &mut String) {
        out.push_str(&self.title);
        out.push('\n');
        match self.layout {
            Layout::Grid => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                        .collect();
                    format!("  {}\n", padded.join("  ").trim_end())
                };
                out.push_str(&line(&self.columns));
                for row in &self.rows {
                    out.push_str(&line(row));
                }
            }
            Layout::List => {
                for row in &self.rows {
                    let mut s = format!("  {}", row[0]);
                    if let Some(p) = row.get(1) {
                        s.push_str(&format!(" {p}"));
                    }
                    if let Some(v) = row.get(2) {
                        s.push_str(&format!(": {v}"));
                    }
                    let rest: Vec<&str> =
                        row[3.min(row.len())..].iter().map(String::as_str).filter(|c| !c.is_empty()).collect();
                    if !rest.is_empty() {
                        s.push_str(&format!(" ({})", rest.join("; ")));
                    }
                    out.push_str(&s);
                    out.push('\n');
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub params: Vec<(String, String)>,
    pub status: Status,
    pub exit_code: i32,
    pub summary: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub failures: Vec<String>,
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        Report {
            schema: SCHEMA.into(),
            version: VERSION,
            command: command.into(),
            params: vec![],
            status,
            exit_code: status.exit_code(),
            summary: vec![],
            tables: vec![],
            failures: vec![],
            details: serde_json::Value::Null,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn set_status(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.exit_code();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Parses and validates an artifact.
    pub fn from_json(text: &str) -> Result<Report, String> {
        let r: Report = serde_json::from_str(text).map_err(|e| format!("invalid report: {e}"))?;
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA {
            return Err(format!("unknown schema `{}`", self.schema));
        }
        if self.version != VERSION {
            return Err(format!("unsupported report version {}", self.version));
        }
        if self.exit_code != self.status.exit_code() {
            return Err(format!("exit code {} does not match status {}", self.exit_code, self.status.name()));
        }
        for t in &self.tables {
            if let Some(i) = t.rows.iter().position(|r| r.len() != t.columns.len()) {
                return Err(format!("table `{}` row {i} has the wrong number of cells", t.title));
            }
        }
        Ok(())
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("coarsetop {}\n", self.command);
        for (k, v) in &self.params {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status.name()));
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for t in &self.tables {
            out.push('\n');
            t.render(&mut out);
        }
        out.push('\n');
        if self.failures.is_empty() {
            out.push_str("failures: none\n");
        } else {
            out.push_str(&format!("failures: {}\n", self.failures.len()));
            for f in &self.failures {
                out.push_str(&format!("  FAIL {f}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("enumerate", Status::Pass);
        r.param("n", 3);
        r.summary("counts", "1 2 5");
        let mut t = Table::grid("Counts", &["n", "valid"]);
        t.push(vec!["1".into(), "1".into()]);
        t.push(vec!["3".into(), "5".into()]);
        r.tables.push(t);
        let mut l = Table::list("Verdicts", &["subject", "property", "value", "witness"]);
        l.push(vec!["f".into(), "proper".into(), "false".into(), "target set {c}".into()]);
        r.tables.push(l);
        r.details = serde_json::json!({"rows": [1, 2, 5]});
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn validation() {
        let mut r = sample();
        r.exit_code = 3;
        assert!(r.validate().is_err());
        let mut r = sample();
        r.version = 2;
        assert!(Report::from_json(&r.to_json()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(Report::from_json(&v.to_string()).is_err());
        let mut r = sample();
        r.tables[0].rows.push(vec!["x".into()]);
        assert!(r.validate().is_err());
    }

    #[test]
    fn table_rendering() {
        let text = sample().render_table();
        assert!(text.contains("  n  valid\n  1  1\n  3  5\n"));
        assert!(text.contains("  f proper: false (target set {c})\n"));
        assert!(text.contains("counts: 1 2 5\n"));
        assert!(text.ends_with("failures: none\n"));
    }
}
