use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::numkernel::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub payload: Value,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub files: Vec<String>,
}

impl Report {
    pub fn new(command: &str, verdict: &str, tol: &Tolerances, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            verdict: verdict.to_string(),
            payload: Value::Null,
            residuals: BTreeMap::new(),
            tolerances: *tol,
            seed,
            files: Vec::new(),
        }
    }

    pub fn with_payload(mut self, payload: impl Serialize) -> Self {
        self.payload = serde_json::to_value(payload).unwrap_or(Value::Null);
        self
    }

    pub fn residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("command: {}\nverdict: {}\n", self.command, self.verdict);
        if !self.payload.is_null() {
            s += &format!("payload: {}\n", self.payload);
        }
        for (k, v) in &self.residuals {
            s += &format!("residual {k}: {v:.3e}\n");
        }
        let t = &self.tolerances;
        s += &format!(
            "tolerances: rank {:e}, cluster {:e}, cert {:e}, gap {:e}\n",
            t.rank_tol, t.cluster_tol, t.cert_tol, t.gap_min
        );
        if let Some(seed) = self.seed {
            s += &format!("seed: {seed}\n");
        }
        for f in &self.files {
            s += &format!("wrote {f}\n");
        }
        s
    }
}
