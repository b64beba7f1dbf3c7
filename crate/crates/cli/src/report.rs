//! Report rendering. JSON keeps full precision; text rounds reals to 6 decimals.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text(&mut out, &value, 0);
            out
        }
    }
}

/// Writes to `out`, or stdout when absent.
pub fn emit<T: Serialize>(report: &T, format: Format, out: Option<&Path>) -> Result<(), String> {
    let body = render(report, format);
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) if n.is_f64() => Some(format!("{:.6}", n.as_f64().unwrap())),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// A flat array of scalars prints on one line.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(|x| inline(x).or_else(|| scalar(x))).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => scalar(v),
    }
}

fn text(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                match inline(val) {
                    Some(s) => writeln!(out, "{pad}{key}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{key}:").unwrap();
                        text(out, val, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        text(out, item, depth + 1);
                    }
                }
            }
        }
        _ => writeln!(out, "{pad}{}", scalar(v).unwrap()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_rounds_and_nests() {
        let v = json!({"value": 1.0 / 3.0, "iterations": 4, "player": {"sets": [[0], [1]], "probs": [0.5, 0.5]}});
        let s = render(&v, Format::Text);
        assert!(s.contains("value: 0.333333\n"));
        assert!(s.contains("iterations: 4\n"));
        assert!(s.contains("  sets: [[0], [1]]\n"));
        assert!(render(&v, Format::Json).contains("0.3333333333333333"));
    }
}
