use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rows of plot-ready data. Cells are JSON scalars.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

pub enum Payload {
    Object(Value),
    Table(Table),
}

pub struct Emitter {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Emitter {
    pub fn emit(&self, config: &Value, payload: Payload) -> Result<(), CliError> {
        let format = self.format.unwrap_or(match payload {
            Payload::Object(_) => Format::Json,
            Payload::Table(_) => Format::Csv,
        });
        let text = match format {
            Format::Json => render_json(config, payload),
            Format::Csv => render_csv(config, payload),
        };
        match &self.out {
            Some(path) => {
                fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                if !self.quiet {
                    eprintln!("wrote {}", path.display());
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        Ok(())
    }
}

fn render_json(config: &Value, payload: Payload) -> String {
    let mut top = Map::new();
    top.insert("config".into(), config.clone());
    match payload {
        Payload::Object(Value::Object(fields)) => top.extend(fields),
        Payload::Object(other) => {
            top.insert("result".into(), other);
        }
        Payload::Table(t) => {
            let rows = t
                .rows
                .into_iter()
                .map(|r| Value::Object(t.header.iter().map(|h| h.to_string()).zip(r).collect()))
                .collect();
            top.insert("columns".into(), t.header.iter().map(|h| Value::from(*h)).collect());
            top.insert("rows".into(), Value::Array(rows));
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn render_csv(config: &Value, payload: Payload) -> String {
    let mut s = String::new();
    let mut echo = Vec::new();
    flatten("", config, &mut echo);
    for (k, v) in echo {
        s.push_str(&format!("# {k}={v}\n"));
    }
    let table = match payload {
        Payload::Table(t) => t,
        Payload::Object(v) => {
            let mut pairs = Vec::new();
            flatten("", &v, &mut pairs);
            Table {
                header: vec!["field", "value"],
                rows: pairs
                    .into_iter()
                    .map(|(k, v)| vec![Value::from(k), Value::from(v)])
                    .collect(),
            }
        }
    };
    s.push_str(&table.header.join(","));
    s.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(&scalar(c))).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => fmt_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Twelve significant digits, shortest form, `.` as decimal separator.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let s = format!("{rounded:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(fmt_float(5.0 / 9.0), "0.555555555556");
        assert_eq!(fmt_float(3.0), "3");
        assert_eq!(fmt_float(-0.25), "-0.25");
        assert_eq!(fmt_float(1.0e-20 / 3.0), "3.33333333333e-21");
    }

    #[test]
    fn object_as_csv_is_field_value_pairs() {
        let csv = render_csv(
            &json!({"seed": 1}),
            Payload::Object(json!({"a": [0.5, true], "b": "x,y"})),
        );
        assert_eq!(csv, "# seed=1\nfield,value\na.0,0.5\na.1,true\nb,\"x,y\"\n");
    }

    #[test]
    fn table_as_json_keeps_column_order() {
        let t = Table {
            header: vec!["z", "a"],
            rows: vec![vec![json!(1.0), json!(2.0)]],
        };
        let s = render_json(&json!({}), Payload::Table(t));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["columns"], json!(["z", "a"]));
        assert_eq!(v["rows"][0]["a"], json!(2.0));
    }
}
