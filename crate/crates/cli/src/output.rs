//! Deterministic CSV and JSON rendering.

use serde_json::{Map, Number, Value};

use crate::config::{Axis, Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

/// Result table; every command produces one.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// 12 significant digits, lowercase exponent, no locale.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.11e}", if x == 0.0 { 0.0 } else { x })
    }
}

fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format_number(x).parse().unwrap_or(x);
    Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => json_number(*x),
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.clone()),
    }
}

fn cell_csv(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_number(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.iter().map(cell_csv).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn axis_json(a: &Axis) -> Value {
    match *a {
        Axis::Value(v) => json_number(v),
        Axis::Grid { min, max, steps } => {
            let mut m = Map::new();
            m.insert("max".into(), json_number(max));
            m.insert("min".into(), json_number(min));
            m.insert("steps".into(), Value::from(steps));
            Value::Object(m)
        }
    }
}

fn params_json(cfg: &RunConfig) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::from(cfg.command.name()));
    m.insert("theta".into(), axis_json(&cfg.theta));
    m.insert("phi".into(), axis_json(&cfg.phi));
    m.insert("g".into(), axis_json(&cfg.g));
    m.insert("kappa".into(), axis_json(&cfg.kappa));
    m.insert("branch".into(), Value::from(cfg.branch));
    m.insert("loop_points".into(), Value::from(cfg.loop_points));
    m.insert("ode_steps".into(), Value::from(cfg.ode_steps));
    m.insert("duration".into(), json_number(cfg.duration));
    m.insert("seed".into(), Value::from(cfg.seed));
    m.insert("tol".into(), json_number(cfg.tol));
    m.insert("epsilon".into(), json_number(cfg.epsilon));
    m.insert("threshold".into(), json_number(cfg.threshold));
    m.insert("kappa_max".into(), json_number(cfg.kappa_max));
    Value::Object(m)
}

pub fn render_json(cfg: &RunConfig, table: &Table) -> String {
    let results: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let m: Map<String, Value> =
                table.columns.iter().zip(row).map(|(k, c)| (k.to_string(), cell_json(c))).collect();
            Value::Object(m)
        })
        .collect();
    let mut top = Map::new();
    top.insert("params".into(), params_json(cfg));
    top.insert("results".into(), Value::Array(results));
    top.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn render(cfg: &RunConfig, table: &Table) -> String {
    match cfg.format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(cfg, table),
    }
}
