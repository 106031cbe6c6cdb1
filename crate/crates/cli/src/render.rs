use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// What a subcommand produces: a JSON body, an optional hand-made CSV and a
/// short human summary.
pub struct Artifact {
    pub body: Value,
    pub csv: Option<String>,
    pub pretty: String,
    pub formulas: Vec<&'static str>,
}

pub fn int(n: &num_bigint::BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rat(r: &BigRational) -> Value {
    json!([int(r.numer()), int(r.denom())])
}

/// `n/d`, or a rounded decimal when the denominator is large.
pub fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if r.denom().bits() > 20 {
        format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn provenance(cfg: &RunConfig, command: &str, formulas: &[&str]) -> Value {
    json!({
        "tool": "hms",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "mode": cfg.mode_name(),
        "zeta_policy": cfg.zeta_name(),
        "strict_n": cfg.strict_n,
        "precision_bits": cfg.precision,
        "formulas": formulas,
    })
}

fn cell(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.len() == 2 && a.iter().all(|x| x.is_number() || x.is_string()) => {
            let t = |x: &Value| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
            if t(&a[1]) == "1" {
                Some(t(&a[0]))
            } else {
                Some(format!("{}/{}", t(&a[0]), t(&a[1])))
            }
        }
        _ => None,
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Scalar fields of an object (or of each object in an array) as CSV.
pub fn flatten_csv(v: &Value) -> String {
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Array(a) => a.iter().filter_map(Value::as_object).collect(),
        Value::Object(o) => vec![o],
        _ => vec![],
    };
    let Some(first) = rows.first() else { return String::new() };
    let keys: Vec<&String> = first.iter().filter(|(_, x)| cell(x).is_some()).map(|(k, _)| k).collect();
    let mut out = keys.iter().map(|k| quote(k)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = keys.iter().map(|k| quote(&r.get(*k).and_then(cell).unwrap_or_default())).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn emit(cfg: &RunConfig, command: &str, a: Artifact) -> String {
    match cfg.format {
        Format::Json => {
            let mut body = a.body;
            if let Value::Object(o) = &mut body {
                o.insert("provenance".into(), provenance(cfg, command, &a.formulas));
            }
            let mut s = serde_json::to_string(&body).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Csv => a.csv.unwrap_or_else(|| flatten_csv(&a.body)),
        Format::Pretty => {
            let mut s = a.pretty;
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}
