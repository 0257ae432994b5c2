use serde::{Deserialize, Serialize};

use super::distributions::student_t_quantile;
use super::mean_and_variance;
use crate::error::{Error, Result};

/// Descriptive statistics of one sample with a two-sided t interval on the
/// mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    /// Sample variance, divisor n − 1.
    pub variance: f64,
    pub std: f64,
    /// `std / mean`; absent when the mean is zero.
    pub cv: Option<f64>,
    pub ci_level: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl SampleSummary {
    pub fn ci_half_width(&self) -> f64 {
        0.5 * (self.ci_hi - self.ci_lo)
    }
}

/// Summarize a sample of non-negative durations.
pub fn summarize(sample: &[f64], ci_level: f64) -> Result<SampleSummary> {
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Error::Validation(format!(
            "confidence level must lie in (0, 1), got {ci_level}"
        )));
    }
    let (mean, variance) = mean_and_variance(sample)?;
    if let Some((i, v)) = sample.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::Validation(format!(
            "observation {i} is negative ({v})"
        )));
    }
    let n = sample.len();
    let std = variance.sqrt();
    let cv = (mean != 0.0).then(|| std / mean);
    let half = if std == 0.0 {
        0.0
    } else {
        let q = student_t_quantile(0.5 * (1.0 + ci_level), (n - 1) as f64)?;
        q * std / (n as f64).sqrt()
    };
    Ok(SampleSummary {
        n,
        mean,
        variance,
        std,
        cv,
        ci_level,
        ci_lo: mean - half,
        ci_hi: mean + half,
    })
}
