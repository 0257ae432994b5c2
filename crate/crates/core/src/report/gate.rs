use serde::{Deserialize, Serialize};

use crate::analysis::{ComparisonVerdict, Verdict};
use crate::error::{Error, Result};

pub const EXIT_GATE_VIOLATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GatePolicy {
    /// Fail only on a significant slowdown.
    FailOnSlower,
    /// Fail unless the candidate is significantly faster.
    FailOnNotFaster,
}

impl GatePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            GatePolicy::FailOnSlower => "fail_on_slower",
            GatePolicy::FailOnNotFaster => "fail_on_not_faster",
        }
    }

    pub fn allows(self, verdict: Verdict) -> bool {
        match self {
            GatePolicy::FailOnSlower => verdict != Verdict::Slower,
            GatePolicy::FailOnNotFaster => verdict == Verdict::Faster,
        }
    }
}

impl std::str::FromStr for GatePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "fail_on_slower" => Ok(GatePolicy::FailOnSlower),
            "fail_on_not_faster" => Ok(GatePolicy::FailOnNotFaster),
            other => Err(Error::Config(format!("unknown gate policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub gate: GatePolicy,
    pub pass: bool,
    pub verdict: Verdict,
    pub baseline: String,
    pub candidate: String,
    pub speedup: f64,
    pub p_value: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOutcome {
    pub record: GateRecord,
    pub exit_code: i32,
    /// One-line JSON rendering of `record`.
    pub line: String,
}

pub fn regression_gate(verdict: &ComparisonVerdict, policy: GatePolicy) -> GateOutcome {
    let pass = policy.allows(verdict.verdict);
    let record = GateRecord {
        gate: policy,
        pass,
        verdict: verdict.verdict,
        baseline: verdict.baseline_id.clone(),
        candidate: verdict.candidate_id.clone(),
        speedup: verdict.speedup,
        p_value: verdict.mean_test.p_value,
        alpha: verdict.mean_test.alpha,
    };
    let line = serde_json::to_string(&record).unwrap_or_else(|_| format!("{{\"pass\":{pass}}}"));
    GateOutcome {
        record,
        exit_code: if pass { 0 } else { EXIT_GATE_VIOLATION },
        line,
    }
}
