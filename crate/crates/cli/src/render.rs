//! Plain-text rendering of report payloads.

use std::io::{self, Write};

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// One aligned `key  value` line per top-level field.
pub fn text<W: Write>(out: &mut W, cmd: &str, payload: &Value) -> io::Result<()> {
    writeln!(out, "{cmd}")?;
    let Value::Object(map) = payload else {
        return writeln!(out, "  {}", scalar(payload));
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in map {
        writeln!(out, "  {k:<width$}  {}", scalar(v))?;
    }
    Ok(())
}

const SWEEP_COLUMNS: [&str; 9] = ["case", "p", "a", "b", "naive", "sum+1", "identity", "singular", "hasse"];

/// Per-case table followed by the summary.
pub fn sweep_table<W: Write>(out: &mut W, summary: &Value, cases: &[Value]) -> io::Result<()> {
    let rows: Vec<[String; 9]> = cases
        .iter()
        .map(|c| {
            let r = &c["report"];
            [
                scalar(&c["index"]),
                scalar(&r["curve"]["p"]),
                scalar(&r["curve"]["a"]),
                scalar(&r["curve"]["b"]),
                scalar(&r["naive_count"]),
                scalar(&r["slice_sum_plus_one"]),
                scalar(&r["identity_holds"]),
                scalar(&r["singular"]),
                scalar(&r["hasse_ok"]),
            ]
        })
        .collect();
    let mut widths = SWEEP_COLUMNS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&SWEEP_COLUMNS.map(String::from)))?;
    for row in &rows {
        writeln!(out, "{}", line(row))?;
    }
    writeln!(out)?;
    text(out, "summary", summary)
}
