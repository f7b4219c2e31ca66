use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
    Csv,
}

/// Renders a report. CSV and text are flattenings of the JSON value, so every
/// number in the JSON output appears in the other formats as well.
pub fn render(value: &Value, format: Format, headline: Option<&str>) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in flatten(value) {
                let _ = writeln!(s, "{},{}", csv_field(&k), csv_field(&v));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(h) = headline {
                let _ = writeln!(s, "{h}");
            }
            for (k, v) in flatten(value) {
                let _ = writeln!(s, "{k}: {v}");
            }
            s
        }
    }
}

/// Leaf values keyed by dotted paths, in document order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                walk(v, join(k), out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                walk(v, join(&i.to_string()), out);
            }
        }
        Value::Object(_) => out.push((path, "{}".into())),
        Value::Array(_) => out.push((path, "[]".into())),
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_paths() {
        let v = json!({"a": 1, "b": {"c": [2, 3]}, "d": null, "e": []});
        let f = flatten(&v);
        assert_eq!(
            f,
            vec![
                ("a".into(), "1".into()),
                ("b.c.0".into(), "2".into()),
                ("b.c.1".into(), "3".into()),
                ("d".into(), "null".into()),
                ("e".into(), "[]".into()),
            ]
        );
    }

    #[test]
    fn csv_quotes() {
        let v = json!({"f": "x^3, y"});
        assert_eq!(render(&v, Format::Csv, None), "key,value\nf,\"x^3, y\"\n");
    }
}
