use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use dualrail::output::{fmt_num, with_schema};
use serde_json::{json, Map, Value};

use crate::args::{Format, Global};

/// One table cell.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(x) => x.to_string(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => human_num(*x),
            Cell::Int(x) => x.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Num(x) => json!(x),
            Cell::Int(x) => json!(x),
        }
    }
}

pub fn human_num(x: f64) -> String {
    let short = format!("{x}");
    if short.len() <= 9 {
        short
    } else if (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.7}")
    } else {
        format!("{x:.4e}")
    }
}

/// Writes `text` to `--out` or standard output.
pub fn write(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| dualrail::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn wall(g: &Global, started: Instant) -> Option<f64> {
    g.timing.then(|| started.elapsed().as_secs_f64())
}

/// A flat result: parameters plus named scalars.
pub fn record(g: &Global, kind: &str, params: Value, fields: &[(&str, Cell)], started: Instant) -> Result<()> {
    let wall = wall(g, started);
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = String::new();
            if let Value::Object(m) = &params {
                let p: Vec<String> = m.iter().map(|(k, v)| format!("{k}={v}")).collect();
                s.push_str(&format!("# {kind}: {}\n", p.join(" ")));
            }
            let w = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in fields {
                s.push_str(&format!("{k:<w$}  {}\n", v.human()));
            }
            if let Some(t) = wall {
                s.push_str(&format!("{:<w$}  {t:.3}\n", "wall_time_s"));
            }
            s
        }
        Format::Csv => {
            let mut names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let mut vals: Vec<String> = fields.iter().map(|(_, v)| v.csv()).collect();
            if let Some(t) = wall {
                names.push("wall_time_s");
                vals.push(fmt_num(t));
            }
            format!("{}\n{}\n", names.join(","), vals.join(","))
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("parameters".into(), params);
            let mut r = Map::new();
            for (k, v) in fields {
                r.insert((*k).into(), v.json());
            }
            m.insert("result".into(), Value::Object(r));
            if let Some(t) = wall {
                m.insert("wall_time_s".into(), json!(t));
            }
            pretty(&with_schema(kind, Value::Object(m)))?
        }
    };
    write(g, &text)
}

/// A table with a header row. CSV is the default for tables unless
/// `default_format` says otherwise.
pub fn table(
    g: &Global,
    kind: &str,
    params: Value,
    header: &[&str],
    rows: &[Vec<Cell>],
    default_format: Format,
    started: Instant,
) -> Result<()> {
    let wall = wall(g, started);
    let text = match g.format.unwrap_or(default_format) {
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain([header[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |r: &[String]| {
                let padded: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut s = line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
            for r in &cells {
                s.push_str(&line(r));
            }
            if let Some(t) = wall {
                s.push_str(&format!("# wall_time_s {t:.3}\n"));
            }
            s
        }
        Format::Json => {
            let data: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> = header.iter().zip(r).map(|(h, c)| ((*h).to_string(), c.json())).collect();
                    Value::Object(m)
                })
                .collect();
            let mut m = Map::new();
            m.insert("parameters".into(), params);
            m.insert("columns".into(), json!(header));
            m.insert("rows".into(), Value::Array(data));
            if let Some(t) = wall {
                m.insert("wall_time_s".into(), json!(t));
            }
            pretty(&with_schema(kind, Value::Object(m)))?
        }
    };
    write(g, &text)
}

pub fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}
