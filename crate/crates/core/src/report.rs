// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic machine-readable run reports.
//!
//! Reports are built as [`serde_json::Value`] trees, whose maps keep keys
//! sorted, and every float is rounded to [`SIGNIFICANT_DIGITS`] before
//! printing, so identical inputs give byte-identical output.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Serializes a complex number as `{"re": …, "im": …}`.
pub fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Serializes a slice of complex numbers as a list of `{"re", "im"}` pairs.
pub fn serialize_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct C<'a>(#[serde(serialize_with = "serialize_complex")] &'a Complex64);
    s.collect_seq(v.iter().map(C))
}

/// Rounds `x` to `digits` significant digits. Non-finite values and zero pass
/// through; negative zero becomes zero.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    let y: f64 = text.parse().expect("formatted float parses");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// Fixed-width rendering with 12 significant digits, for tables.
pub fn format_sig(x: f64) -> String {
    let y = round_significant(x, SIGNIFICANT_DIGITS);
    if y == 0.0 {
        return "0".to_string();
    }
    let magnitude = y.abs().log10().floor() as i32;
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&magnitude) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
        let s = format!("{y:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, y);
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

/// Rounds every number in `value` in place.
pub fn canonicalize(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64 number");
                if let Some(r) =
                    serde_json::Number::from_f64(round_significant(x, SIGNIFICANT_DIGITS))
                {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// A single named pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `value < tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            passed: value < tolerance,
            value,
            tolerance,
        }
    }

    /// Exact check; `value` is 1 on a mismatch and 0 otherwise.
    pub fn flag(name: impl Into<String>, passed: bool) -> Check {
        Check {
            name: name.into(),
            passed,
            value: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
        }
    }
}

/// Result of one CLI command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input: Value,
    pub output: Value,
    pub checks: Vec<Check>,
    pub metrics: Map<String, Value>,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> RunReport {
        RunReport {
            command,
            input: Value::Null,
            output: Value::Null,
            checks: Vec::new(),
            metrics: Map::new(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn with_input<T: Serialize>(mut self, input: &T) -> RunReport {
        self.input = to_value(input);
        self
    }

    pub fn with_output<T: Serialize>(mut self, output: &T) -> RunReport {
        self.output = to_value(output);
        self
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn metric<T: Serialize>(&mut self, name: &str, value: T) {
        self.metrics.insert(name.to_string(), to_value(&value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), to_value(&self.command));
        root.insert("input".into(), self.input.clone());
        root.insert("output".into(), self.output.clone());
        root.insert("checks".into(), to_value(&self.checks));
        root.insert("metrics".into(), Value::Object(self.metrics.clone()));
        root.insert("passed".into(), Value::Bool(self.passed()));
        root.insert(
            "tool_version".into(),
            Value::String(self.tool_version.clone()),
        );
        let mut value = Value::Object(root);
        canonicalize(&mut value);
        value
    }

    /// Pretty JSON with sorted keys and rounded floats.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(0.1 + 0.2, 12), 0.3);
        assert_eq!(round_significant(-0.0, 12), 0.0);
        assert_eq!(round_significant(1.0 - 1e-15, 12), 1.0);
        assert_eq!(round_significant(123456789012345.0, 12), 123456789012000.0);
        assert!(round_significant(f64::NAN, 12).is_nan());
    }

    #[test]
    fn table_format() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.25), "0.25");
        assert_eq!(format_sig(0.0535), "0.0535");
        assert_eq!(format_sig(1e-17), "1e-17");
        assert_eq!(format_sig(4.440892098500626e-16), "4.4408920985e-16");
        assert_eq!(format_sig(0.0), "0");
    }

    #[test]
    fn keys_are_sorted_and_output_is_stable() {
        let mut r = RunReport::new(vec!["solve".into(), "v1".into()]);
        r.metric("zeta", 0.1 + 0.2);
        r.metric("alpha", 1);
        r.check(Check::below("err", 1e-17, 1e-10));
        let a = r.to_json();
        assert_eq!(a, r.clone().to_json());
        assert!(a.find("\"alpha\"").unwrap() < a.find("\"zeta\"").unwrap());
        assert!(a.contains("0.3"));
        assert!(!a.contains("0.30000000000000004"));
        assert!(r.passed());
    }

    #[test]
    fn complex_serialization() {
        #[derive(Serialize)]
        struct W {
            #[serde(serialize_with = "serialize_complex")]
            z: Complex64,
        }
        let v = to_value(&W {
            z: Complex64::new(1.0, -2.0),
        });
        assert_eq!(v["z"]["re"], 1.0);
        assert_eq!(v["z"]["im"], -2.0);
    }
}
