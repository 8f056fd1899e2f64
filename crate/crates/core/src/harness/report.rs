use serde::Serialize;
use serde_json::{Map, Value};

/// A pass/fail outcome against a declared tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Value,
    pub tolerance: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed,
            value: num(value),
            tolerance: num(tolerance),
        }
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Flat numeric series emitted as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config_echo: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub table: Table,
    pub duration_seconds: f64,
    pub version: String,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Everything except timing and version: identical runs give identical bytes.
    pub fn payload(&self) -> Value {
        let mut m = Map::new();
        m.insert("experiment".into(), Value::from(self.experiment.clone()));
        m.insert("config".into(), self.config_echo.clone());
        m.insert("results".into(), self.results.clone());
        m.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("checks serialize"),
        );
        Value::Object(m)
    }

    pub fn to_value(&self) -> Value {
        let mut v = self.payload();
        let m = v.as_object_mut().expect("payload is an object");
        m.insert("all_passed".into(), Value::from(self.all_passed()));
        let mut run = Map::new();
        run.insert("duration_seconds".into(), Value::from(self.duration_seconds));
        run.insert("version".into(), Value::from(self.version.clone()));
        m.insert("run".into(), Value::Object(run));
        v
    }
}

/// JSON value of a float; non-finite values become `"inf"`, `"-inf"` or `"not-comparable"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("not-comparable")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// A float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "not-comparable".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected json or csv)")),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_report(r: &ExperimentReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.to_value()).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut out = r.table.columns.join(",");
            out.push('\n');
            for row in &r.table.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Int(i) => i.to_string(),
                        Cell::Float(x) => format_float(*x),
                        Cell::Text(t) => csv_field(t),
                    })
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(table: Table) -> ExperimentReport {
        ExperimentReport {
            experiment: "stein".into(),
            config_echo: Value::Null,
            results: serde_json::json!({ "d": num(f64::INFINITY) }),
            checks: vec![],
            table,
            duration_seconds: 0.5,
            version: "x".into(),
        }
    }

    #[test]
    fn csv_header_only_when_empty() {
        let r = report(Table::new(&["n", "log_beta_n", "rate_n"]));
        assert_eq!(write_report(&r, Format::Csv), b"n,log_beta_n,rate_n\n");
    }

    #[test]
    fn csv_rows_use_17_digits() {
        let mut t = Table::new(&["n", "log_beta_n", "rate_n"]);
        t.push(vec![10.into(), (-1.0f64 / 3.0).into(), f64::NEG_INFINITY.into()]);
        let s = String::from_utf8(write_report(&report(t), Format::Csv)).unwrap();
        let row = s.lines().nth(1).unwrap();
        assert_eq!(row, "10,-3.3333333333333331e-1,-inf");
        let back: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, -1.0 / 3.0);
    }

    #[test]
    fn json_infinity_is_a_string() {
        let s = String::from_utf8(write_report(&report(Table::default()), Format::Json)).unwrap();
        assert!(s.contains("\"d\": \"inf\""));
        assert_eq!(num(1.5), Value::from(1.5));
    }
}
