//! Report model and its JSON, CSV and Markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::anchors::anchor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Evidence about an open question; never fails a run.
    Informative,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Informative => "informative",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
    pub status: Status,
    pub anchor: &'static str,
}

impl CheckRecord {
    /// `anchor_id` must be a key of the anchor table.
    pub fn new(
        id: impl Into<String>,
        anchor_id: &str,
        inputs: Value,
        expected: impl Serialize,
        got: impl Serialize,
        status: Status,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            inputs,
            expected: serde_json::to_value(expected).expect("serializable"),
            got: serde_json::to_value(got).expect("serializable"),
            status,
            anchor: anchor(anchor_id),
        }
    }

    /// Equality check between two serializable values.
    pub fn equal<T: Serialize + PartialEq>(id: impl Into<String>, anchor_id: &str, inputs: Value, expected: T, got: T) -> Self {
        let ok = expected == got;
        Self::new(id, anchor_id, inputs, expected, got, Status::of(ok))
    }
}

/// Rows of a coefficient table. Rows are kept in the order they were
/// pushed; callers push them sorted.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Report {
            tool: "psialg",
            version: env!("CARGO_PKG_VERSION"),
            config,
            status: Status::Pass,
            checks: Vec::new(),
            table: None,
            data: Value::Null,
            timings_ms: None,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
        self.refresh_status();
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(checks);
        self.refresh_status();
    }

    fn refresh_status(&mut self) {
        self.status = Status::of(self.checks.iter().all(|c| c.status != Status::Fail));
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(r: &Report, fmt: Format) -> Vec<u8> {
    match fmt {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => render_csv(r).into_bytes(),
        Format::Md => render_md(r).into_bytes(),
    }
}

/// The coefficient table when there is one, otherwise the check list.
fn render_csv(r: &Report) -> String {
    let mut out = String::new();
    let line = |out: &mut String, fields: Vec<String>| {
        let f: Vec<String> = fields.iter().map(|x| csv_field(x)).collect();
        out.push_str(&f.join(","));
        out.push('\n');
    };
    match &r.table {
        Some(t) => {
            line(&mut out, t.columns.clone());
            for row in &t.rows {
                line(&mut out, row.clone());
            }
        }
        None => {
            line(&mut out, ["id", "status", "expected", "got", "anchor"].map(String::from).to_vec());
            for c in &r.checks {
                line(
                    &mut out,
                    vec![c.id.clone(), c.status.as_str().into(), compact(&c.expected), compact(&c.got), c.anchor.into()],
                );
            }
        }
    }
    out
}

fn render_md(r: &Report) -> String {
    let mut out = String::new();
    let cmd = r.config.get("command").and_then(Value::as_str).unwrap_or("run");
    let _ = writeln!(out, "# psialg {cmd}\n");
    let _ = writeln!(out, "Overall status: **{}** (version {})\n", r.status.as_str(), r.version);
    let fails = r.checks.iter().filter(|c| c.status == Status::Fail).count();
    let info = r.checks.iter().filter(|c| c.status == Status::Informative).count();
    let _ = writeln!(out, "{} checks, {} failed, {} informative.\n", r.checks.len(), fails, info);
    if !r.checks.is_empty() {
        out.push_str("| check | status | expected | got | anchor |\n|---|---|---|---|---|\n");
        for c in &r.checks {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                c.id.replace('|', "\\|"),
                c.status.as_str(),
                compact(&c.expected).replace('|', "\\|"),
                compact(&c.got).replace('|', "\\|"),
                c.anchor
            );
        }
        out.push('\n');
    }
    if let Some(t) = &r.table {
        let _ = writeln!(out, "| {} |", t.columns.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(t.columns.len()));
        for row in &t.rows {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_report_passes() {
        let r = Report::new(json!({"command": "noop"}));
        let v: Value = serde_json::from_slice(&render(&r, Format::Json)).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["checks"], json!([]));
    }

    #[test]
    fn one_failure_fails_the_report() {
        let mut r = Report::new(json!({}));
        r.push(CheckRecord::equal("a", "hilbert.lee", json!({}), 1, 1));
        r.push(CheckRecord::equal("b", "hilbert.lee", json!({}), 1, 2));
        assert!(r.failed());
        let mut ok = Report::new(json!({}));
        ok.push(CheckRecord::new("c", "koszul.dims", json!({}), 1, 2, Status::Informative));
        assert!(!ok.failed());
    }

    #[test]
    fn csv_quotes_fields() {
        let mut r = Report::new(json!({}));
        let mut t = Table::new(&["a", "value"]);
        t.push(vec!["(1,0)".into(), "2".into()]);
        r.table = Some(t);
        assert_eq!(String::from_utf8(render(&r, Format::Csv)).unwrap(), "a,value\n\"(1,0)\",2\n");
    }
}
