use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{TimingSeries, DEFAULT_SAMPLE_SIZE, DEFAULT_WARMUP};
use crate::stats::{f_test, summarize, t_test, FTestResult, SampleSummary, Sidedness, TTestResult, TestVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Faster,
    Slower,
    Indistinguishable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Faster => "faster",
            Verdict::Slower => "slower",
            Verdict::Indistinguishable => "indistinguishable",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub alpha: f64,
    pub variant: TestVariant,
    pub sidedness: Sidedness,
    /// Sample window length.
    pub n: usize,
    /// Applied to series that are not already trimmed.
    pub warmup: u64,
    pub ci_level: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            alpha: crate::DEFAULT_ALPHA,
            variant: TestVariant::Pooled,
            sidedness: Sidedness::TwoSided,
            n: DEFAULT_SAMPLE_SIZE,
            warmup: DEFAULT_WARMUP,
            ci_level: 0.95,
        }
    }
}

/// Step window shared by both samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub first_step: u64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub baseline_id: String,
    pub candidate_id: String,
    pub baseline_summary: SampleSummary,
    pub candidate_summary: SampleSummary,
    /// Baseline mean over candidate mean; above 1 means the candidate is faster.
    pub speedup: f64,
    /// Baseline tested against candidate.
    pub mean_test: TTestResult,
    /// Candidate variance over baseline variance. Absent when both samples
    /// are constant.
    pub variance_test: Option<FTestResult>,
    pub window: Window,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn windowed(series: &TimingSeries, opts: &CompareOptions) -> Result<TimingSeries> {
    let trimmed = if series.trimmed {
        series.clone()
    } else {
        series.trim_warmup(opts.warmup)?
    };
    trimmed.sample_first_n(opts.n)
}

fn check_alignment(baseline: &TimingSeries, candidate: &TimingSeries) -> Result<()> {
    let mismatches: Vec<String> = baseline
        .steps()
        .iter()
        .zip(candidate.steps())
        .filter(|(b, c)| b.index != c.index)
        .map(|(b, c)| format!("{} vs {}", b.index, c.index))
        .collect();
    if mismatches.is_empty() {
        return Ok(());
    }
    let shown: Vec<&str> = mismatches.iter().take(5).map(String::as_str).collect();
    Err(Error::Alignment(format!(
        "{} position(s) mismatch (baseline vs candidate index: {}{})",
        mismatches.len(),
        shown.join(", "),
        if mismatches.len() > shown.len() { ", ..." } else { "" }
    )))
}

/// Compare two runs over the same step window.
pub fn compare_runs(
    baseline: &TimingSeries,
    candidate: &TimingSeries,
    opts: &CompareOptions,
) -> Result<ComparisonVerdict> {
    let base = windowed(baseline, opts)?;
    let cand = windowed(candidate, opts)?;
    check_alignment(&base, &cand)?;

    let b = base.durations();
    let c = cand.durations();
    let baseline_summary = summarize(&b, opts.ci_level)?;
    let candidate_summary = summarize(&c, opts.ci_level)?;
    let speedup = baseline_summary.mean / candidate_summary.mean;

    let mean_test = t_test(&b, &c, opts.variant, opts.sidedness, opts.alpha)?;
    let variance_test = match f_test(&c, &b, Sidedness::TwoSided, opts.alpha) {
        Ok(r) => Some(r),
        Err(Error::DegenerateVariance) => None,
        Err(e) => return Err(e),
    };

    let verdict = if mean_test.significant && speedup > 1.0 {
        Verdict::Faster
    } else if mean_test.significant && speedup < 1.0 {
        Verdict::Slower
    } else {
        Verdict::Indistinguishable
    };

    let mut warnings = base.warnings.clone();
    for w in &cand.warnings {
        if !warnings.contains(w) {
            warnings.push(w.clone());
        }
    }

    Ok(ComparisonVerdict {
        baseline_id: baseline.run_id.clone(),
        candidate_id: candidate.run_id.clone(),
        baseline_summary,
        candidate_summary,
        speedup,
        mean_test,
        variance_test,
        window: Window {
            first_step: base.steps()[0].index,
            n: base.len(),
        },
        verdict,
        warnings,
    })
}
