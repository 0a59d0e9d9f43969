//! Deterministic output: every float is rounded to 12 significant digits
//! before serialization, orderings are fixed, and identical configs produce
//! byte-identical files.

use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

/// Format a float like C's %.12g: 12 significant digits, positional when the
/// exponent is moderate, scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let trimmed = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if trimmed == "-0" {
            "0".to_string()
        } else {
            trimmed
        }
    } else {
        let s = format!("{x:.11e}");
        // trim zeros in the mantissa: 1.20000000000e-5 -> 1.2e-5
        match s.split_once('e') {
            Some((mant, exp)) => {
                let m = mant.trim_end_matches('0').trim_end_matches('.');
                format!("{m}e{exp}")
            }
            None => s,
        }
    }
}

/// Round to 12 significant digits (the value fmt_sig would print).
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    fmt_sig(x).parse().unwrap_or(x)
}

/// JSON number carrying the rounded value; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        json!(x.to_string())
    }
}

/// A column description: name plus the tag of the formula that produced it.
#[derive(Clone)]
pub struct Column {
    pub name: &'static str,
    pub formula: &'static str,
}

pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn columns_json(&self) -> Value {
        Value::Array(
            self.columns
                .iter()
                .map(|c| json!({"name": c.name, "formula": c.formula}))
                .collect(),
        )
    }
}

/// A named scalar output with its formula tag.
pub struct Scalar {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: Value,
}

pub fn scalar(name: &'static str, formula: &'static str, x: f64) -> Scalar {
    Scalar {
        name,
        formula,
        value: num(x),
    }
}

pub fn scalar_value(name: &'static str, formula: &'static str, value: Value) -> Scalar {
    Scalar {
        name,
        formula,
        value,
    }
}

pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Vec<Scalar>,
    pub table: Option<Table>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut root = serde_json::Map::new();
        root.insert("schema".into(), json!(1));
        root.insert("command".into(), json!(self.command));
        root.insert("inputs".into(), self.inputs.clone());
        if !self.outputs.is_empty() {
            let outs: Vec<Value> = self
                .outputs
                .iter()
                .map(|s| json!({"name": s.name, "value": s.value, "formula": s.formula}))
                .collect();
            root.insert("outputs".into(), Value::Array(outs));
        }
        if let Some(t) = &self.table {
            root.insert("columns".into(), t.columns_json());
            root.insert("rows".into(), Value::Array(t.rows.iter().cloned().map(Value::Array).collect()));
        }
        Value::Object(root)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# schema: 1\n");
        out.push_str(&format!("# command: {}\n", self.command));
        if let Value::Object(map) = &self.inputs {
            for (k, v) in map {
                out.push_str(&format!("# input {k}: {}\n", csv_plain(v)));
            }
        }
        for s in &self.outputs {
            out.push_str(&format!(
                "# output {}: {} ({})\n",
                s.name,
                csv_plain(&s.value),
                s.formula
            ));
        }
        if let Some(t) = &self.table {
            for c in &t.columns {
                out.push_str(&format!("# formula {}: {}\n", c.name, c.formula));
            }
            let header: Vec<&str> = t.columns.iter().map(|c| c.name).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn write(&self, format: OutputFormat, out: Option<&Path>) -> std::io::Result<()> {
        let body = match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())?;
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.to_csv(),
        };
        match out {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().write_all(body.as_bytes()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

fn csv_plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_i64() || n.is_u64() {
                    n.to_string()
                } else {
                    fmt_sig(f)
                }
            } else {
                n.to_string()
            }
        }
        Value::Array(items) => items
            .iter()
            .map(csv_plain)
            .collect::<Vec<_>>()
            .join(","),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    let plain = csv_plain(v);
    if plain.contains(',') || plain.contains('"') {
        format!("\"{}\"", plain.replace('"', "\"\""))
    } else {
        plain
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-3.5544611121305256), "-3.55446111213");
        assert_eq!(fmt_sig(0.8125), "0.8125");
        assert_eq!(fmt_sig(1.0e-7), "1e-7");
        assert_eq!(fmt_sig(1024.0), "1024");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [-3.5544611121305256, 0.18872187554086717, 1e300, -2.3e-9] {
            let r = round_sig(x);
            assert_eq!(r, round_sig(r));
        }
    }
}
