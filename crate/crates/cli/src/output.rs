//! Table rendering: CSV with a frozen header, or one JSON object.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use conical_ab::model::SystemParams;
use conical_ab::spectrum::ExtensionParameter;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("format must be csv or json, got {other:?}")),
        }
    }
}

/// Shortest round-trip decimal; scientific outside [1e-5, 1e16).
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), fmt_f64)
}

pub fn fmt_lambda(l: Option<ExtensionParameter>) -> String {
    match l {
        None => "none".to_string(),
        Some(ExtensionParameter::Infinite) => "inf".to_string(),
        Some(ExtensionParameter::Finite(v)) => fmt_f64(v),
    }
}

/// A row type with a fixed CSV schema.
pub trait Row: Serialize {
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// Everything a command emits: rows plus run metadata.
pub struct Table<'a, R: Row> {
    pub command: &'static str,
    pub params: Option<&'a SystemParams>,
    /// Key/value notes; CSV writes them as leading `# key: value` lines.
    pub meta: Vec<(&'static str, Value)>,
    pub rows: &'a [R],
}

impl<R: Row> Table<'_, R> {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut head = String::new();
        for (k, v) in &self.meta {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(head, "# {k}: {text}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(R::COLUMNS).map_err(io)?;
        for row in self.rows {
            w.write_record(row.cells()).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        let body = String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(head + &body)
    }

    fn json(&self) -> Result<String, CliError> {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command));
        if let Some(p) = self.params {
            obj.insert("params".into(), to_value(p)?);
        }
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        obj.insert("meta".into(), Value::Object(meta));
        obj.insert("columns".into(), to_value(R::COLUMNS)?);
        obj.insert("rows".into(), to_value(self.rows)?);
        to_json_string(&Value::Object(obj))
    }
}

pub fn to_value<T: Serialize + ?Sized>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_json_string<T: Serialize + ?Sized>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(-24.5), "-24.5");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(-3.5e20), "-3.5e20");
        for v in [1.0 / 3.0, 2.2e-300, 123456.789, -7.25e-6] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sentinels() {
        assert_eq!(fmt_opt(None), "none");
        assert_eq!(fmt_lambda(Some(ExtensionParameter::Infinite)), "inf");
        assert_eq!(fmt_lambda(None), "none");
        assert_eq!(fmt_lambda(Some(ExtensionParameter::Finite(-0.5))), "-0.5");
    }
}
