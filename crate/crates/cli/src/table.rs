//! Plain-text rendering of a JSON report.
//!
//! Scalars print as `key: value`. Arrays of objects print as aligned tables
//! whose columns are the union of the objects' scalar keys. Nested objects
//! print as indented sections.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde_json::Value;

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    section(&mut out, report, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(if items.is_empty() {
                "none".into()
            } else {
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join(", ")
            })
        }
        _ => None,
    }
}

fn section(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let Value::Object(map) = v else {
        let _ = writeln!(out, "{pad}{}", scalar(v).unwrap_or_default());
        return;
    };
    for (key, value) in map {
        if let Some(s) = scalar(value) {
            let _ = writeln!(out, "{pad}{key}: {s}");
        }
    }
    for (key, value) in map {
        match value {
            Value::Object(_) => {
                let _ = writeln!(out, "{pad}{key}:");
                section(out, value, depth + 1);
            }
            Value::Array(rows) if scalar(value).is_none() => {
                let _ = writeln!(out, "{pad}{key}:");
                rows_table(out, rows, depth + 1);
            }
            _ => {}
        }
    }
}

fn rows_table(out: &mut String, rows: &[Value], depth: usize) {
    let pad = "  ".repeat(depth);
    // pass/fail columns read best first
    let mut columns: Vec<String> = rows
        .iter()
        .filter_map(Value::as_object)
        .flat_map(|o| {
            o.iter()
                .filter(|(_, v)| scalar(v).is_some())
                .map(|(k, _)| k.clone())
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if let Some(i) = columns.iter().position(|c| c == "pass") {
        let c = columns.remove(i);
        columns.insert(0, c);
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            columns
                .iter()
                .map(|c| r.get(c).and_then(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{pad}{}", line(&columns));
    for row in &cells {
        let _ = writeln!(out, "{pad}{}", line(row));
    }
    for (i, row) in rows.iter().enumerate() {
        if let Value::Object(map) = row {
            for (key, value) in map {
                if scalar(value).is_none() {
                    let _ = writeln!(out, "{pad}[{i}] {key}:");
                    section(out, value, depth + 1);
                }
            }
        }
    }
}
