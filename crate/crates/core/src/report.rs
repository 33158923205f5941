use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;
use serde_json::Value;

/// Largest residual observed by a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Residual {
    /// Every compared coefficient was exactly zero.
    ExactZero,
    Abs(f64),
}

impl Residual {
    pub fn as_f64(self) -> f64 {
        match self {
            Residual::ExactZero => 0.0,
            Residual::Abs(v) => v,
        }
    }

    pub fn is_exact_zero(self) -> bool {
        matches!(self, Residual::ExactZero)
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("exact-zero"),
            // NaN has no JSON encoding; report it as a string so the line stays parseable.
            Residual::Abs(v) if !v.is_finite() => s.serialize_str(&v.to_string()),
            Residual::Abs(v) => s.serialize_f64(*v),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::ExactZero => f.write_str("exact-zero"),
            Residual::Abs(v) => f.write_str(&crate::format::fmt_g12(*v)),
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub max_abs_residual: Residual,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// Numeric check: passes iff the residual is finite and at most `tol`.
    pub fn numeric(suite: &str, residual: f64, tol: f64, started: Instant) -> Self {
        let mut report = Self {
            suite: suite.to_owned(),
            params: BTreeMap::new(),
            max_abs_residual: Residual::Abs(residual),
            pass: residual.is_finite() && residual <= tol,
            runtime_ms: elapsed_ms(started),
        };
        report.params.insert("tol".into(), Value::from(tol));
        report
    }

    /// Exact check: passes iff every compared coefficient vanished.
    ///
    /// `max_abs_coeff` is the largest absolute coefficient left over, used
    /// only when the check fails.
    pub fn exact(suite: &str, all_zero: bool, max_abs_coeff: f64, started: Instant) -> Self {
        Self {
            suite: suite.to_owned(),
            params: BTreeMap::new(),
            max_abs_residual: if all_zero {
                Residual::ExactZero
            } else {
                Residual::Abs(max_abs_coeff)
            },
            pass: all_zero,
            runtime_ms: elapsed_ms(started),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} max_abs_residual={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.max_abs_residual
        )?;
        for (k, v) in &self.params {
            write!(f, " {k}=")?;
            write_value(f, v)?;
        }
        write!(f, " runtime_ms={}", self.runtime_ms)
    }
}

/// JSON rendering with non-integer numbers at 12 significant digits.
fn write_value(f: &mut fmt::Formatter<'_>, v: &Value) -> fmt::Result {
    match v {
        Value::Number(n) if n.is_f64() => f.write_str(&crate::format::fmt_g12(n.as_f64().unwrap_or(f64::NAN))),
        Value::Array(items) => {
            f.write_str("[")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write_value(f, item)?;
            }
            f.write_str("]")
        }
        Value::Object(map) => {
            f.write_str("{")?;
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{k:?}:")?;
                write_value(f, item)?;
            }
            f.write_str("}")
        }
        other => write!(f, "{other}"),
    }
}

fn elapsed_ms(started: Instant) -> u64 {
    started.elapsed().as_millis() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_matches_tolerance() {
        let t = Instant::now();
        assert!(VerificationReport::numeric("a", 1e-11, 1e-10, t).pass);
        assert!(!VerificationReport::numeric("a", 2e-10, 1e-10, t).pass);
        assert!(!VerificationReport::numeric("a", f64::NAN, 1e-10, t).pass);
        assert!(VerificationReport::exact("b", true, 0.0, t).pass);
        assert!(!VerificationReport::exact("b", false, 3.0, t).pass);
    }

    #[test]
    fn json_fields() {
        let r = VerificationReport::exact("eq1-exact", true, 0.0, Instant::now())
            .with_param("order", 10);
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["suite"], "eq1-exact");
        assert_eq!(v["max_abs_residual"], "exact-zero");
        assert_eq!(v["pass"], true);
        assert_eq!(v["params"]["order"], 10);
        assert!(v["runtime_ms"].is_u64());
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 5);
    }
}
