//! Run manifests: what was computed, with which limits, and a digest of the
//! result so reruns can be compared.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: &'static str,
    pub threads: usize,
    pub budget: String,
    pub wall_time_ms: u128,
    /// sha256 of the compact JSON of the result.
    pub output_digest: String,
    /// Facts about the run that do not affect the result, such as cache use.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub notes: Value,
}

pub fn digest(result: &Value) -> String {
    let bytes = serde_json::to_vec(result).expect("json values serialize");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: Value,
        threads: usize,
        budget: u128,
        started: Instant,
        result: &Value,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION"),
            threads,
            budget: budget.to_string(),
            wall_time_ms: started.elapsed().as_millis(),
            output_digest: digest(result),
            notes: Value::Null,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let v = serde_json::json!({"a": [1, 2], "b": "x"});
        assert_eq!(digest(&v), digest(&v.clone()));
        assert_eq!(digest(&v).len(), 64);
        assert_ne!(
            digest(&v),
            digest(&serde_json::json!({"a": [2, 1], "b": "x"}))
        );
    }
}
