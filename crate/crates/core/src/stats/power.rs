//! Monte-Carlo power and size estimation for the two-sample t-test.
//!
//! Every trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so the rejection count does not depend on how trials are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use super::hypothesis::{t_test, Sidedness, TestVariant};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseShape {
    /// Normal, with nonpositive draws resampled.
    #[default]
    Normal,
    /// Right-skewed lognormal with the requested mean and std.
    Lognormal,
}

impl std::str::FromStr for NoiseShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(NoiseShape::Normal),
            "lognormal" => Ok(NoiseShape::Lognormal),
            other => Err(Error::Config(format!("unknown noise shape `{other}`"))),
        }
    }
}

/// Positive-valued noise with a given mean and standard deviation.
#[derive(Debug, Clone, Copy)]
pub enum NoiseModel {
    Normal(Normal<f64>),
    Lognormal(LogNormal<f64>),
    /// Zero spread.
    Constant(f64),
}

impl NoiseModel {
    pub fn new(shape: NoiseShape, mean: f64, std: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::Validation(format!(
                "noise mean must be positive, got {mean}"
            )));
        }
        if !(std >= 0.0 && std.is_finite()) {
            return Err(Error::Validation(format!(
                "noise std must be non-negative, got {std}"
            )));
        }
        if std == 0.0 {
            return Ok(NoiseModel::Constant(mean));
        }
        let bad = |e: &dyn std::fmt::Display| Error::Validation(format!("noise model: {e}"));
        Ok(match shape {
            NoiseShape::Normal => NoiseModel::Normal(Normal::new(mean, std).map_err(|e| bad(&e))?),
            NoiseShape::Lognormal => NoiseModel::Lognormal(
                LogNormal::from_mean_cv(mean, std / mean).map_err(|e| bad(&e))?,
            ),
        })
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseModel::Normal(d) => loop {
                let v = d.sample(rng);
                if v > 0.0 {
                    break v;
                }
            },
            NoiseModel::Lognormal(d) => d.sample(rng),
            NoiseModel::Constant(v) => *v,
        }
    }
}

/// How trials are scheduled. Results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing; falls back to sequential without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    /// Candidate mean is `mean · (1 − effect_fraction)`.
    pub effect_fraction: f64,
    /// Both groups have std `cv · mean` (baseline mean).
    pub cv: f64,
    pub n_per_group: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseShape,
    #[serde(default)]
    pub variant: TestVariant,
}

impl PowerConfig {
    pub fn new(effect_fraction: f64, cv: f64, n_per_group: usize, alpha: f64) -> Self {
        PowerConfig {
            effect_fraction,
            cv,
            n_per_group,
            alpha,
            trials: 2000,
            seed: 0,
            noise: NoiseShape::Normal,
            variant: TestVariant::Pooled,
        }
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn noise(mut self, noise: NoiseShape) -> Self {
        self.noise = noise;
        self
    }

    pub fn variant(mut self, variant: TestVariant) -> Self {
        self.variant = variant;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.cv > 0.0 && self.cv.is_finite()) {
            return Err(Error::Validation(format!("cv must be positive, got {}", self.cv)));
        }
        if self.n_per_group < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                available: self.n_per_group,
            });
        }
        if self.trials < 100 {
            return Err(Error::Validation(format!(
                "at least 100 trials are required, got {}",
                self.trials
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Validation(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.effect_fraction < 1.0 && self.effect_fraction.is_finite()) {
            return Err(Error::Validation(format!(
                "effect fraction must be below 1, got {}",
                self.effect_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    /// Fraction of trials rejecting the null at `alpha`.
    pub power: f64,
    pub rejections: usize,
    pub trials: usize,
    /// Binomial standard error of `power`.
    pub standard_error: f64,
}

pub fn power_estimate(config: &PowerConfig) -> Result<PowerEstimate> {
    power_estimate_with(config, Execution::default())
}

pub fn power_estimate_with(config: &PowerConfig, execution: Execution) -> Result<PowerEstimate> {
    config.validate()?;
    let baseline = NoiseModel::new(config.noise, 1.0, config.cv)?;
    let candidate = NoiseModel::new(config.noise, 1.0 - config.effect_fraction, config.cv)?;
    let run = |trial: usize| trial_rejects(config, &baseline, &candidate, trial);

    let rejections = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..config.trials)
                .into_par_iter()
                .map(run)
                .try_fold(|| 0usize, |acc, r| r.map(|hit| acc + hit as usize))
                .try_reduce(|| 0, |a, b| Ok(a + b))?
        }
        _ => (0..config.trials).try_fold(0usize, |acc, t| run(t).map(|hit| acc + hit as usize))?,
    };

    let trials = config.trials;
    let power = rejections as f64 / trials as f64;
    Ok(PowerEstimate {
        power,
        rejections,
        trials,
        standard_error: (power * (1.0 - power) / trials as f64).sqrt(),
    })
}

fn trial_rejects(
    config: &PowerConfig,
    baseline: &NoiseModel,
    candidate: &NoiseModel,
    trial: usize,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let n = config.n_per_group;
    let a: Vec<f64> = (0..n).map(|_| baseline.sample(&mut rng)).collect();
    let b: Vec<f64> = (0..n).map(|_| candidate.sample(&mut rng)).collect();
    let r = t_test(&a, &b, config.variant, Sidedness::TwoSided, config.alpha)?;
    Ok(r.significant)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree_exactly() {
        let cfg = PowerConfig::new(0.04, 0.10, 35, 0.05).trials(500).seed(11);
        let s = power_estimate_with(&cfg, Execution::Sequential).unwrap();
        let p = power_estimate_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn same_seed_is_reproducible() {
        let cfg = PowerConfig::new(0.02, 0.10, 35, 0.05).trials(300).seed(99);
        assert_eq!(power_estimate(&cfg).unwrap(), power_estimate(&cfg).unwrap());
    }

    #[test]
    fn lognormal_noise_has_requested_moments() {
        let m = NoiseModel::new(NoiseShape::Lognormal, 250.0, 25.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..200_000).map(|_| m.sample(&mut rng)).collect();
        let (mean, var) = crate::stats::mean_and_variance(&xs).unwrap();
        assert!((mean - 250.0).abs() < 0.5, "{mean}");
        assert!((var.sqrt() - 25.0).abs() < 0.5, "{}", var.sqrt());
        assert!(xs.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn normal_noise_never_returns_nonpositive() {
        let m = NoiseModel::new(NoiseShape::Normal, 1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!((0..10_000).all(|_| m.sample(&mut rng) > 0.0));
    }

    #[test]
    fn rejects_invalid_configs() {
        let base = PowerConfig::new(0.0, 0.10, 35, 0.05);
        assert!(power_estimate(&base.clone().trials(99)).is_err());
        let mut c = base.clone();
        c.cv = 0.0;
        assert!(power_estimate(&c).is_err());
        let mut c = base.clone();
        c.n_per_group = 1;
        assert!(matches!(power_estimate(&c), Err(Error::InsufficientData { .. })));
    }
}
