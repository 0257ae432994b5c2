use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Step, TimingSeries};
use crate::stats::{NoiseModel, NoiseShape};

pub const DEFAULT_WARMUP_FACTOR: f64 = 1.3;

/// Seeded stand-in for an application run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Baseline mean step time, seconds.
    pub mean: f64,
    /// Step-time std as a fraction of `mean`.
    pub cv: f64,
    pub n_steps: usize,
    pub warmup_steps: usize,
    /// Multiplier applied to warmup steps.
    pub warmup_factor: f64,
    /// Steps have mean `mean · (1 − effect_fraction)`.
    pub effect_fraction: f64,
    pub seed: u64,
    pub noise_shape: NoiseShape,
}

impl SyntheticSpec {
    pub fn new(mean: f64, cv: f64, n_steps: usize, seed: u64) -> Self {
        SyntheticSpec {
            mean,
            cv,
            n_steps,
            warmup_steps: 2,
            warmup_factor: DEFAULT_WARMUP_FACTOR,
            effect_fraction: 0.0,
            seed,
            noise_shape: NoiseShape::Normal,
        }
    }

    pub fn effect(mut self, effect_fraction: f64) -> Self {
        self.effect_fraction = effect_fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean > 0.0 && self.mean.is_finite()) {
            return Err(Error::Validation(format!("mean must be positive, got {}", self.mean)));
        }
        if !(self.cv > 0.0 && self.cv.is_finite()) {
            return Err(Error::Validation(format!("cv must be positive, got {}", self.cv)));
        }
        if self.n_steps < self.warmup_steps + 2 {
            return Err(Error::Validation(format!(
                "{} steps leave fewer than 2 after {} warmup steps",
                self.n_steps, self.warmup_steps
            )));
        }
        if !(self.warmup_factor > 0.0 && self.warmup_factor.is_finite()) {
            return Err(Error::Validation(format!(
                "warmup factor must be positive, got {}",
                self.warmup_factor
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

/// Draw a series with step indices `0..n_steps`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<TimingSeries> {
    spec.validate()?;
    let model = NoiseModel::new(
        spec.noise_shape,
        spec.mean * (1.0 - spec.effect_fraction),
        spec.cv * spec.mean,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let steps = (0..spec.n_steps)
        .map(|i| {
            let mut seconds = model.sample(&mut rng);
            if i < spec.warmup_steps {
                seconds *= spec.warmup_factor;
            }
            Step {
                index: i as u64,
                seconds,
            }
        })
        .collect();
    let id = format!("synthetic-seed{}-effect{}", spec.seed, spec.effect_fraction);
    TimingSeries::new(id.clone(), id, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::summarize;

    #[test]
    fn ten_percent_noise_lands_in_chi_square_band() {
        let s = generate_synthetic(&SyntheticSpec::new(250.0, 0.10, 37, 7)).unwrap();
        assert_eq!(s.len(), 37);
        let post = s.trim_warmup(2).unwrap().durations();
        let cv = summarize(&post, 0.95).unwrap().cv.unwrap();
        assert!((0.06..=0.14).contains(&cv), "cv={cv}");
    }

    #[test]
    fn identical_seeds_identical_series() {
        let a = generate_synthetic(&SyntheticSpec::new(250.0, 0.10, 50, 3)).unwrap();
        let b = generate_synthetic(&SyntheticSpec::new(250.0, 0.10, 50, 3)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn vanishing_noise() {
        let s = generate_synthetic(&SyntheticSpec::new(250.0, 1e-9, 20, 1)).unwrap();
        for step in &s.steps()[2..] {
            assert!((step.seconds / 250.0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn warmup_steps_are_inflated() {
        let s = generate_synthetic(&SyntheticSpec::new(100.0, 1e-9, 10, 1)).unwrap();
        assert!((s.steps()[0].seconds - 130.0).abs() < 1e-4);
        assert!((s.steps()[1].seconds - 130.0).abs() < 1e-4);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_synthetic(&SyntheticSpec::new(0.0, 0.1, 10, 1)).is_err());
        assert!(generate_synthetic(&SyntheticSpec::new(1.0, 0.0, 10, 1)).is_err());
        assert!(generate_synthetic(&SyntheticSpec::new(1.0, 0.1, 3, 1)).is_err());
    }
}
