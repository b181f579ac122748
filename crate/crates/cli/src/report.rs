//! Structured command output rendered as text, JSON or CSV.
//!
//! Every number goes through [`fmt_num`], so the text and JSON forms carry the
//! same digits.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{json, Map, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Twelve significant digits; fixed notation for exponents in `-5..12`,
/// scientific otherwise, trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round trip");
        let fixed = format!("{:.*}", (11 - exp) as usize, rounded);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(k) => k.to_string(),
            Value::Num(x) => fmt_num(*x),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(k) => json!(k),
            Value::Num(x) if x.is_finite() => {
                serde_json::Value::Number(Number::from_str(&fmt_num(*x)).expect("decimal literal"))
            }
            Value::Num(_) => serde_json::Value::Null,
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(k: usize) -> Self {
        Value::Int(k as i64)
    }
}

impl From<u64> for Value {
    fn from(k: u64) -> Self {
        // Seeds are emitted as text so JSON readers don't round them.
        Value::Text(k.to_string())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, Value)>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), fields: Vec::new(), tables: Vec::new(), checks: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        self
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let v = v.render();
            if v.contains('\n') {
                let _ = writeln!(out, "{k}:");
                for line in v.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            } else {
                let _ = writeln!(out, "{k:<width$}  {v}");
            }
        }
        for t in &self.tables {
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Value::render).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap_or(0))
                .collect();
            let _ = writeln!(out, "\n[{}]", t.name);
            let header: Vec<String> = t.columns.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", header.join("  "));
            for r in &cells {
                let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                let _ = writeln!(out, "{}", line.join("  "));
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                let _ = writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("command".into(), json!(self.command));
        for (k, v) in &self.fields {
            root.insert(k.clone(), v.to_json());
        }
        if !self.tables.is_empty() {
            let mut tables = Map::new();
            for t in &self.tables {
                let rows: Vec<serde_json::Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, serde_json::Value> =
                            t.columns.iter().cloned().zip(r.iter().map(Value::to_json)).collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                tables.insert(t.name.clone(), serde_json::Value::Array(rows));
            }
            root.insert("tables".into(), serde_json::Value::Object(tables));
        }
        if !self.checks.is_empty() {
            let checks: Vec<serde_json::Value> = self
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "status": if c.pass { "PASS" } else { "FAIL" }, "detail": c.detail}))
                .collect();
            root.insert("checks".into(), serde_json::Value::Array(checks));
            root.insert("ok".into(), json!(self.ok()));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(root)).expect("serializable");
        s.push('\n');
        s
    }

    /// Tables as CSV blocks (each preceded by `# name` when there are several);
    /// fields and checks become tables of their own.
    pub fn to_csv(&self) -> String {
        let mut tables = self.tables.clone();
        if tables.is_empty() && !self.fields.is_empty() {
            let mut t = Table::new("fields", &["key", "value"]);
            for (k, v) in &self.fields {
                t.push(vec![Value::Text(k.clone()), v.clone()]);
            }
            tables.push(t);
        }
        if !self.checks.is_empty() {
            let mut t = Table::new("checks", &["name", "status", "detail"]);
            for c in &self.checks {
                t.push(vec![
                    c.name.as_str().into(),
                    if c.pass { "PASS" } else { "FAIL" }.into(),
                    c.detail.as_str().into(),
                ]);
            }
            tables.push(t);
        }
        let labelled = tables.len() > 1;
        let mut out = String::new();
        for (i, t) in tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if labelled {
                let _ = writeln!(out, "# {}", t.name);
            }
            let _ = writeln!(out, "{}", t.columns.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
            for r in &t.rows {
                let _ = writeln!(out, "{}", r.iter().map(|v| csv_cell(&v.render())).collect::<Vec<_>>().join(","));
            }
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(123456.7890123456), "123456.789012");
        assert_eq!(fmt_num(1.0e-7), "1e-7");
        assert_eq!(fmt_num(1.2345e-6 / 3.0), "4.115e-7");
        assert_eq!(fmt_num(2.0e15), "2e15");
        assert_eq!(fmt_num(9.999999999999999), "10");
        assert_eq!(fmt_num(0.00012), "0.00012");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.field("ratio", 2.0f64 / 3.0).field("count", 3usize).field("name", "x,y");
        let mut t = Table::new("points", &["m", "error"]);
        t.push(vec![8usize.into(), 0.1f64.into()]);
        t.push(vec![16usize.into(), (1.0f64 / 7.0).into()]);
        r.tables.push(t);
        r.check("small", true, "fine");
        r
    }

    #[test]
    fn json_and_text_share_digits() {
        let r = sample();
        let text = r.to_text();
        let json = r.to_json();
        for digits in ["0.666666666667", "0.142857142857"] {
            assert!(text.contains(digits), "{text}");
            assert!(json.contains(digits), "{json}");
        }
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["tables"]["points"][1]["m"], 16);
        assert_eq!(parsed["ok"], true);
    }

    #[test]
    fn csv_quotes_and_labels() {
        let csv = sample().to_csv();
        assert!(csv.starts_with("# points\nm,error\n8,0.1\n"));
        assert!(csv.contains("# checks\nname,status,detail\nsmall,PASS,fine\n"));
        let mut r = Report::new("fields");
        r.field("name", "x,y");
        assert_eq!(r.to_csv(), "key,value\nname,\"x,y\"\n");
    }

    #[test]
    fn failing_check_flips_ok() {
        let mut r = sample();
        assert!(r.ok());
        r.check("big", false, "nope");
        assert!(!r.ok());
        assert!(r.to_text().contains("FAIL big: nope"));
    }
}
