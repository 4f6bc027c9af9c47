use std::collections::BTreeMap;
use std::fmt::Write as _;

use hypvol::expect::ExpectationResult;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One line of machine-readable output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub value: f64,
    pub abs_err_est: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Command-specific fields (representation, pole flags, z-scores).
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl OutputRecord {
    pub fn new(command: &str, params: BTreeMap<String, Value>, value: f64, abs_err_est: f64, method: &str) -> Self {
        Self {
            command: command.into(),
            params,
            value,
            abs_err_est,
            exact: None,
            method: method.into(),
            seed: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn from_expectation(command: &str, params: BTreeMap<String, Value>, r: &ExpectationResult) -> Self {
        let mut rec = Self::new(command, params, r.value, r.abs_err_est, r.method);
        rec.exact = r.exact.as_ref().map(ToString::to_string);
        rec.extra.insert("representation".into(), r.representation.as_str().into());
        rec.extra.insert("pole_path".into(), r.pole_path.into());
        if r.near_pole {
            rec.extra.insert("near_pole".into(), true.into());
        }
        rec
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records contain only finite numbers")
    }
}

pub const CSV_HEADER: &str = "param,value,abs_err_est,exact";

/// Shortest round-trip rendering, the same digits the JSON output uses.
fn num(x: f64) -> String {
    Value::from(x).to_string()
}

/// Rows `param,value,abs_err_est,exact` with the header, LF line endings.
pub fn to_csv(rows: &[(u64, OutputRecord)]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (p, r) in rows {
        let _ = writeln!(out, "{p},{},{},{}", num(r.value), num(r.abs_err_est), r.exact.as_deref().unwrap_or(""));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut params = BTreeMap::new();
        params.insert("n".to_string(), Value::from(8));
        let mut r = OutputRecord::new("hypvolume", params, 4.420_778_3, 1e-15, "exact-harmonic");
        r.exact = Some("197/140*pi".into());
        r.extra.insert("pole_path".into(), false.into());
        let s = r.to_json();
        let back: OutputRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), s);
    }
}
