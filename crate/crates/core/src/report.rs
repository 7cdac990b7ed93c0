//! Deterministic JSON and CSV output.
//!
//! Floats are always written with 17 significant digits in exponent form
//! (`{:.16e}`), so identical inputs give byte-identical files. Non-finite
//! floats become `null` in JSON and `nan`/`inf` in CSV.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pairing::PairingReport;
use crate::triple::SpectrumLine;

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Pretty JSON with keys in declaration order and fixed float formatting.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Structural(format!("serialization: {e}")))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    out.push_str(&format_float(x));
                } else {
                    out.push_str("null");
                }
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // flat arrays of scalars stay on one line
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Columns `eigenvalue,multiplicity,l,sign`, rows sorted by `|eigenvalue|`
/// and then by eigenvalue.
pub fn spectrum_csv(lines: &[SpectrumLine]) -> String {
    let mut rows = lines.to_vec();
    rows.sort_by(|a, b| {
        a.eigenvalue.abs().total_cmp(&b.eigenvalue.abs()).then(a.eigenvalue.total_cmp(&b.eigenvalue))
    });
    let mut out = String::from("eigenvalue,multiplicity,l,sign\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", format_float(r.eigenvalue), r.multiplicity, r.l, r.sign);
    }
    out
}

/// Columns `l,contribution,partial_sum,error` with `error = partial_sum − target`.
pub fn convergence_csv(report: &PairingReport) -> String {
    let mut out = String::from("l,contribution,partial_sum,error\n");
    for ((l, c), s) in report.sectors.iter().zip(&report.contributions).zip(&report.partial_sums) {
        let _ = writeln!(out, "{},{},{},{}", l, format_float(*c), format_float(*s), format_float(s - report.target));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        zeta: f64,
        alpha: u32,
        list: Vec<f64>,
        name: &'static str,
        nothing: Option<f64>,
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(2.0), "2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn json_keeps_field_order() {
        let s = Sample { zeta: 1.5, alpha: 3, list: vec![1.0, f64::INFINITY], name: "a\"b", nothing: None };
        let json = to_json(&s).unwrap();
        let want = "{\n  \"zeta\": 1.5000000000000000e0,\n  \"alpha\": 3,\n  \"list\": [1.0000000000000000e0, null],\n  \"name\": \"a\\\"b\",\n  \"nothing\": null\n}\n";
        assert_eq!(json, want);
        let parsed: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["zeta"], 1.5);
    }
}
