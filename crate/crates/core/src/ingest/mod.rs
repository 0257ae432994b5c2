//! Timing-series and bandwidth ingestion plus the trim/sample protocol.
//!
//! Comparisons always use the first `n` steps after warmup in both runs:
//! mean step time drifts systematically over a run, so two runs are only
//! comparable over the same step window.

mod bandwidth;
mod csv;
mod log;

pub use bandwidth::{parse_bandwidth_csv, BandwidthRecord, BANDWIDTH_HEADER};
pub use csv::{parse_step_csv, STEP_HEADER};
pub use log::{parse_step_log, StepPattern};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::RunConfig;

/// Initialization steps excluded before sampling.
pub const DEFAULT_WARMUP: u64 = 2;
/// Steps kept per run after warmup.
pub const DEFAULT_SAMPLE_SIZE: usize = 35;
/// Below this sample size a warning is attached to the series.
pub const NORMALITY_SAMPLE_SIZE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub index: u64,
    pub seconds: f64,
}

/// Ordered per-step wall-clock durations of one application run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSeries {
    pub run_id: String,
    pub source: String,
    steps: Vec<Step>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(default)]
    pub trimmed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TimingSeries {
    /// Build a series, checking that indices strictly increase and that every
    /// duration is finite and positive.
    pub fn new(run_id: impl Into<String>, source: impl Into<String>, steps: Vec<Step>) -> Result<Self> {
        validate_steps(&steps)?;
        Ok(TimingSeries {
            run_id: run_id.into(),
            source: source.into(),
            steps,
            config: None,
            trimmed: false,
            sample_size_used: None,
            warnings: Vec::new(),
        })
    }

    /// Series with consecutive indices starting at `first_index`.
    pub fn from_durations(
        run_id: impl Into<String>,
        first_index: u64,
        durations: &[f64],
    ) -> Result<Self> {
        let run_id = run_id.into();
        let steps = durations
            .iter()
            .zip(first_index..)
            .map(|(&seconds, index)| Step { index, seconds })
            .collect();
        TimingSeries::new(run_id.clone(), run_id, steps)
    }

    pub fn with_config(mut self, config: RunConfig) -> Self {
        self.config = Some(config);
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.seconds).collect()
    }

    pub fn indices(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.index).collect()
    }

    /// Multiply every duration by `factor` (unit conversion).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        for s in &mut out.steps {
            s.seconds *= factor;
        }
        validate_steps(&out.steps)?;
        Ok(out)
    }

    /// Re-check invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        validate_steps(&self.steps)?;
        if self.trimmed && self.steps.is_empty() {
            return Err(Error::Structural("trimmed series has no steps".into()));
        }
        Ok(())
    }

    /// Drop every step with index below `warmup`.
    pub fn trim_warmup(&self, warmup: u64) -> Result<Self> {
        if self.steps.is_empty() {
            return Err(Error::InsufficientData {
                needed: 1,
                available: 0,
            });
        }
        let steps: Vec<Step> = self
            .steps
            .iter()
            .filter(|s| s.index >= warmup)
            .copied()
            .collect();
        if steps.is_empty() {
            return Err(Error::EmptyResult { warmup });
        }
        Ok(TimingSeries {
            steps,
            trimmed: true,
            ..self.clone()
        })
    }

    /// Keep the first `n` steps.
    pub fn sample_first_n(&self, n: usize) -> Result<Self> {
        if n == 0 || self.steps.len() < n {
            return Err(Error::InsufficientData {
                needed: n.max(1),
                available: self.steps.len(),
            });
        }
        let mut out = TimingSeries {
            steps: self.steps[..n].to_vec(),
            sample_size_used: Some(n),
            ..self.clone()
        };
        if n < NORMALITY_SAMPLE_SIZE {
            out.warnings.push(format!(
                "sample size {n} is below {NORMALITY_SAMPLE_SIZE}; normal-theory tests may be unreliable"
            ));
        }
        Ok(out)
    }

    /// Canonical `step,seconds` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 * (self.steps.len() + 1));
        out.push_str(STEP_HEADER);
        out.push('\n');
        for s in &self.steps {
            out.push_str(&format!("{},{}\n", s.index, s.seconds));
        }
        out
    }
}

fn validate_steps(steps: &[Step]) -> Result<()> {
    for (i, s) in steps.iter().enumerate() {
        if !s.seconds.is_finite() || s.seconds <= 0.0 {
            return Err(Error::Validation(format!(
                "step {} has nonpositive or non-finite duration {}",
                s.index, s.seconds
            )));
        }
        if i > 0 && steps[i - 1].index >= s.index {
            return Err(Error::Structural(format!(
                "step index {} follows {}; indices must strictly increase",
                s.index,
                steps[i - 1].index
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(len: u64) -> TimingSeries {
        let d: Vec<f64> = (0..len).map(|i| 100.0 + i as f64).collect();
        TimingSeries::from_durations("r", 0, &d).unwrap()
    }

    #[test]
    fn trim_then_sample_gives_window_two_to_thirty_six() {
        let s = run(37).trim_warmup(DEFAULT_WARMUP).unwrap();
        assert_eq!(s.len(), 35);
        assert_eq!(s.steps()[0].index, 2);
        assert!(s.trimmed);
        let w = s.sample_first_n(35).unwrap();
        assert_eq!(w.indices(), (2..37).collect::<Vec<_>>());
        assert_eq!(w.sample_size_used, Some(35));
        assert!(w.warnings.is_empty());
    }

    #[test]
    fn long_run_keeps_first_window() {
        let w = run(202).trim_warmup(2).unwrap().sample_first_n(35).unwrap();
        assert_eq!(w.indices(), (2..37).collect::<Vec<_>>());
    }

    #[test]
    fn zero_warmup_keeps_steps() {
        let s = run(5);
        assert_eq!(s.trim_warmup(0).unwrap().steps(), s.steps());
    }

    #[test]
    fn trimming_everything_is_an_error() {
        assert!(matches!(run(2).trim_warmup(2), Err(Error::EmptyResult { warmup: 2 })));
    }

    #[test]
    fn sample_of_full_length_is_identity() {
        let s = run(12);
        assert_eq!(s.sample_first_n(12).unwrap().steps(), s.steps());
    }

    #[test]
    fn short_series_reports_availability() {
        match run(10).sample_first_n(35) {
            Err(Error::InsufficientData { needed, available }) => {
                assert_eq!((needed, available), (35, 10));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_samples_carry_a_warning() {
        let w = run(40).sample_first_n(10).unwrap();
        assert_eq!(w.warnings.len(), 1);
    }

    #[test]
    fn invariants_enforced_on_construction() {
        let bad = vec![
            Step { index: 3, seconds: 1.0 },
            Step { index: 3, seconds: 1.0 },
        ];
        assert!(matches!(TimingSeries::new("x", "x", bad), Err(Error::Structural(_))));
        let bad = vec![Step { index: 0, seconds: 0.0 }];
        assert!(matches!(TimingSeries::new("x", "x", bad), Err(Error::Validation(_))));
    }
}
