use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;
const SIGNIFICANT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `x` rounded to 12 significant digits.
pub fn round(x: f64) -> f64 {
    round_to(x, SIGNIFICANT)
}

pub fn round_to(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

pub fn num(x: f64) -> String {
    round(x).to_string()
}

fn round_all(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round(x))) {
                *n = x;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_all),
        Value::Object(o) => o.values_mut().for_each(round_all),
        _ => {}
    }
}

/// Top-level document: schema version and command first, then the body's
/// fields in their own order.
pub fn document(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    match body {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("data".into(), other);
        }
    }
    Value::Object(m)
}

/// Adds `pass_at_override` next to every check.
pub fn override_tolerance(doc: &mut Value, t: f64) {
    fn walk(v: &mut Value, t: f64) {
        match v {
            Value::Object(o) => {
                if let Some(d) = o.get("deviation").and_then(Value::as_f64) {
                    if o.contains_key("tolerance") {
                        o.insert("pass_at_override".into(), json!(d <= t));
                    }
                }
                o.values_mut().for_each(|x| walk(x, t));
            }
            Value::Array(a) => a.iter_mut().for_each(|x| walk(x, t)),
            _ => {}
        }
    }
    walk(doc, t);
    doc["tolerance_override"] = json!(t);
}

/// Sampled outcome frequencies for comparison with the exact probabilities.
pub fn monte_carlo(probs: &[(String, f64)], seed: u64, shots: usize) -> Value {
    let weights: Vec<f64> = probs.iter().map(|(_, p)| p.max(0.0)).collect();
    let Ok(dist) = WeightedIndex::new(&weights) else {
        return json!({ "seed": seed, "shots": 0, "outcomes": [] });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(&mut rng)] += 1;
    }
    let rows: Vec<Value> = probs
        .iter()
        .zip(&counts)
        .map(|((k, p), c)| json!({ "outcome": k, "probability": p, "frequency": *c as f64 / shots as f64 }))
        .collect();
    json!({ "seed": seed, "shots": shots, "outcomes": rows })
}

pub struct Emitter {
    format: Format,
    out: Option<PathBuf>,
}

type Table = (Vec<String>, Vec<Vec<String>>);

impl Emitter {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Emitter { format, out }
    }

    pub fn emit(&self, doc: &Value, table: impl FnOnce() -> Result<Table>) -> Result<()> {
        let bytes = match self.format {
            Format::Json => {
                let mut v = doc.clone();
                round_all(&mut v);
                let mut s = serde_json::to_string_pretty(&v)?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let (header, rows) = table()?;
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&header)?;
                for r in rows {
                    w.write_record(&r)?;
                }
                w.into_inner().context("flushing csv")?
            }
        };
        match &self.out {
            Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes)?;
                Ok(out.flush()?)
            }
        }
    }
}
