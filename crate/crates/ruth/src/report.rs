//! Structured reports: named exact assertions plus tables, rendered as JSON
//! or plain text.  Exit status is 0 exactly when every assertion holds.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub assertions: Vec<Assertion>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema_version: crate::format::SCHEMA_VERSION,
            command: command.to_string(),
            assertions: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn assert(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.to_string(), ok, detail: detail.into() });
    }

    pub fn table(&mut self, title: &str, headers: Vec<&str>, rows: Vec<Vec<String>>) {
        self.tables.push(Table {
            title: title.to_string(),
            headers: headers.into_iter().map(str::to_string).collect(),
            rows,
        });
    }

    pub fn ok(&self) -> bool {
        self.assertions.iter().all(|a| a.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        for t in &self.tables {
            out.push_str(&format!("\n{}\n", t.title));
            let widths: Vec<usize> = t
                .headers
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    t.rows
                        .iter()
                        .map(|r| r.get(i).map_or(0, String::len))
                        .max()
                        .unwrap_or(0)
                        .max(h.len())
                })
                .collect();
            let fmt_row = |cells: Vec<String>| -> String {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&fmt_row(t.headers.clone()));
            out.push('\n');
            for r in &t.rows {
                out.push_str(&fmt_row(r.clone()));
                out.push('\n');
            }
        }
        if !self.assertions.is_empty() {
            out.push('\n');
            for a in &self.assertions {
                let mark = if a.ok { "PASS" } else { "FAIL" };
                if a.detail.is_empty() {
                    out.push_str(&format!("[{mark}] {}\n", a.name));
                } else {
                    out.push_str(&format!("[{mark}] {}: {}\n", a.name, a.detail));
                }
            }
        }
        out.push_str(&format!(
            "\n{}: {}\n",
            if self.ok() { "ok" } else { "FAILED" },
            self.command
        ));
        out
    }
}
