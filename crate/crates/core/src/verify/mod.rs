//! Conformance harness.
//!
//! Each check compares what a lemma, proposition or theorem predicts against
//! what exact computation observes, and returns a [`ConformanceRecord`] with a
//! three-valued [`Verdict`]. Inputs that fail a result's hypotheses get
//! [`Verdict::HypothesisNotMet`] and never count as failures.

mod generate;
mod instance;
mod lemmas;
mod sweep;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use generate::gen_dominant_poly;
pub use instance::{base_case_probe, cross_validate_instance, verify_theorem_instance, BoundStep, QClaim};
pub use lemmas::{check_diff_bounds, check_shift_lemma, check_symmetric_multiplier, DiffInequality};
pub use sweep::{
    enumerate_specs, read_spec_list, run_sweep, sweep_family, write_csv, write_jsonl, InstanceRecord, Oracle,
    SweepConfig, SweepReport, SweepSummary, VerdictCounts,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Conform,
    Nonconform,
    HypothesisNotMet,
}

impl Verdict {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Conform
        } else {
            Verdict::Nonconform
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Conform => "conform",
            Verdict::Nonconform => "nonconform",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformanceRecord {
    pub check_name: String,
    pub inputs: Value,
    pub predicted: Value,
    pub observed: Value,
    pub verdict: Verdict,
    pub seed: Option<u64>,
}

impl ConformanceRecord {
    fn new(check_name: &str, inputs: Value, predicted: Value, observed: Value, verdict: Verdict) -> Self {
        ConformanceRecord {
            check_name: check_name.to_string(),
            inputs,
            predicted,
            observed,
            verdict,
            seed: None,
        }
    }

    fn hypothesis_not_met(check_name: &str, inputs: Value, reason: String, observed: Value) -> Self {
        let predicted = serde_json::json!({ "hypothesis_failure": reason });
        Self::new(check_name, inputs, predicted, observed, Verdict::HypothesisNotMet)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn is_nonconform(&self) -> bool {
        self.verdict == Verdict::Nonconform
    }

    /// Deserializes `observed[key]`.
    pub fn observed_as<T: serde::de::DeserializeOwned>(&self, key: &str) -> Option<T> {
        self.observed
            .get(key)
            .and_then(|v| serde_json::from_value(v.clone()).ok())
    }

    pub fn predicted_as<T: serde::de::DeserializeOwned>(&self, key: &str) -> Option<T> {
        self.predicted
            .get(key)
            .and_then(|v| serde_json::from_value(v.clone()).ok())
    }
}
