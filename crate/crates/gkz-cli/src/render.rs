//! JSON conversion helpers and the aligned-table renderer.

use gkz::scalar::fmt_rational;
use gkz::semigroup::Parameter;
use gkz::{BigInt, Rational};
use serde_json::{json, Map, Value};

/// Integers outside the `i64` range are emitted as strings.
pub fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

pub fn rat(v: &Rational) -> Value {
    json!(fmt_rational(v))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

/// 0-based library indices to the 1-based indices shown to users.
pub fn face(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|k| json!(k + 1)).collect())
}

pub fn parameter(p: &Parameter) -> Value {
    match p {
        Parameter::Explicit(v) => rats(v),
        Parameter::Stratum { b, face: f } => json!({"stratum": {"b": ints(b), "face": face(f)}}),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{:<w$}", c, w = *w))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header)];
    out.push(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}

fn uniform_objects(items: &[Value]) -> Option<Vec<String>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<String> = first.keys().cloned().collect();
    for it in items {
        let o = it.as_object()?;
        if o.keys().cloned().collect::<Vec<_>>() != keys {
            return None;
        }
    }
    Some(keys)
}

fn render_value(title: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Array(items) if !items.is_empty() => {
            if let Some(keys) = uniform_objects(items) {
                let rows: Vec<Vec<String>> = items
                    .iter()
                    .map(|it| keys.iter().map(|k| cell(&it[k.as_str()])).collect())
                    .collect();
                out.push(format!("{}:", title));
                out.push(aligned(&keys, &rows));
            } else {
                out.push(format!("{}: {}", title, cell(v)));
            }
        }
        Value::Object(m) => render_object(title, m, out),
        other => out.push(format!("{}: {}", title, cell(other))),
    }
}

fn render_object(title: &str, m: &Map<String, Value>, out: &mut Vec<String>) {
    let scalar = |v: &Value| !matches!(v, Value::Object(_)) && !v.as_array().is_some_and(|a| uniform_objects(a).is_some());
    let simple: Vec<Vec<String>> =
        m.iter().filter(|(_, v)| scalar(v)).map(|(k, v)| vec![k.clone(), cell(v)]).collect();
    if !simple.is_empty() {
        if !title.is_empty() {
            out.push(format!("{}:", title));
        }
        out.push(aligned(&["field".to_string(), "value".to_string()], &simple));
    }
    for (k, v) in m.iter().filter(|(_, v)| !scalar(v)) {
        let t = if title.is_empty() { k.clone() } else { format!("{}.{}", title, k) };
        render_value(&t, v, out);
    }
}

/// Human-readable rendering of a report.
pub fn table(report: &Value) -> String {
    let mut out = Vec::new();
    out.push(format!("command: {}", cell(&report["command"])));
    render_value("result", &report["result"], &mut out);
    if let Some(w) = report["warnings"].as_array() {
        for x in w {
            out.push(format!("warning: {}", cell(x)));
        }
    }
    out.join("\n") + "\n"
}
