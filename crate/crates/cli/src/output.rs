//! CSV tables and JSON reports. Every file starts with the resolved configuration.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        // Adding zero turns -0 into 0.
        format!("{:.16e}", x + 0.0)
    } else {
        format!("{x}")
    }
}

/// A header row and real-valued records.
#[derive(Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

fn config_comment(cfg: &RunConfig) -> String {
    let body: Vec<String> = cfg.pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# fhl {} {}\n", cfg.version, body.join(" "))
}

pub fn write_table(cfg: &RunConfig, table: &Table, sink: &mut dyn Write) -> Result<(), CliError> {
    sink.write_all(config_comment(cfg).as_bytes())?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| fmt_real(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table_to(cfg: &RunConfig, table: &Table, path: &Path) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_table(cfg, table, &mut file)
}

/// JSON report: `config`, `verdict`, `norms`, `history`, `timings`, plus `findings` and
/// `values` with the details behind the verdict.
#[derive(Debug, Default)]
pub struct Report {
    pub verdict: String,
    pub norms: Map<String, Value>,
    pub values: Map<String, Value>,
    pub findings: Vec<Value>,
    pub history: Vec<Value>,
    pub seconds: f64,
}

impl Report {
    pub fn norm(&mut self, name: impl Into<String>, v: f64) {
        self.norms.insert(name.into(), real(v));
    }

    pub fn value(&mut self, name: impl Into<String>, v: f64) {
        self.values.insert(name.into(), real(v));
    }

    pub fn history_of<T: Serialize>(&mut self, items: &[T]) -> Result<(), CliError> {
        for it in items {
            self.history.push(serde_json::to_value(it)?);
        }
        Ok(())
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Result<String, CliError> {
        let mut root = Map::new();
        root.insert("config".into(), serde_json::to_value(cfg)?);
        root.insert("verdict".into(), Value::String(self.verdict.clone()));
        root.insert("norms".into(), Value::Object(self.norms.clone()));
        root.insert("values".into(), Value::Object(self.values.clone()));
        root.insert("findings".into(), Value::Array(self.findings.clone()));
        root.insert("history".into(), Value::Array(self.history.clone()));
        let timings = if cfg.timings {
            let mut t = Map::new();
            t.insert("seconds".into(), real(self.seconds));
            Value::Object(t)
        } else {
            Value::Null
        };
        root.insert("timings".into(), timings);
        Ok(serde_json::to_string_pretty(&Value::Object(root))? + "\n")
    }
}

/// JSON has no infinities; they are written as strings.
pub fn real(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(format!("{v}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_real(1.0), "1.0000000000000000e0");
        assert_eq!(real(f64::INFINITY), Value::String("inf".into()));
    }
}
