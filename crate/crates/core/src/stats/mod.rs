//! Statistical engine: summaries, distribution functions, two-sample tests
//! and Monte-Carlo power estimation.

pub mod distributions;
pub mod hypothesis;
pub mod power;
pub mod special;
pub mod summary;

pub use distributions::{f_cdf, f_sf, student_t_cdf, student_t_quantile, student_t_sf};
pub use hypothesis::{
    f_test, paired_t_test, t_test, FTestResult, Sidedness, TTestResult, TestVariant,
};
pub use power::{
    power_estimate, power_estimate_with, Execution, NoiseModel, NoiseShape, PowerConfig,
    PowerEstimate,
};
pub use special::regularized_incomplete_beta;
pub use summary::{summarize, SampleSummary};

use crate::error::{Error, Result};

/// Mean and sample variance (divisor n − 1) by two passes.
pub(crate) fn mean_and_variance(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: sample.len(),
        });
    }
    if let Some((i, v)) = sample.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Validation(format!(
            "observation {i} is not finite ({v})"
        )));
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let ss: f64 = sample.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((mean, ss / (n - 1.0)))
}
