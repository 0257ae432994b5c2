use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default efficiency threshold for "scales well".
pub const DEFAULT_EFFICIENCY_THRESHOLD: f64 = 0.70;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub resources: u32,
    pub seconds: f64,
    pub speedup: f64,
    pub efficiency: f64,
    /// Ideal speedup `N / N_base`.
    pub ideal: f64,
    pub meets_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    /// Sorted by resource count.
    pub points: Vec<ScalingPoint>,
    pub baseline_index: usize,
    pub threshold: f64,
    /// Largest resource count whose efficiency reaches the threshold.
    pub largest_efficient: Option<u32>,
}

impl ScalingSeries {
    pub fn baseline(&self) -> &ScalingPoint {
        &self.points[self.baseline_index]
    }
}

/// Strong-scaling speedup and efficiency relative to `baseline` resources.
pub fn scaling_analysis(points: &[(u32, f64)], baseline: u32, threshold: f64) -> Result<ScalingSeries> {
    if points.len() < 2 {
        return Err(Error::Structural(format!(
            "scaling needs at least 2 points, got {}",
            points.len()
        )));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Validation(format!("efficiency threshold must be positive, got {threshold}")));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.0);
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Structural(format!("duplicate resource count {}", w[0].0)));
        }
    }
    for &(n, t) in &sorted {
        if n == 0 {
            return Err(Error::Validation("resource counts must be at least 1".into()));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Validation(format!("time at N={n} must be positive, got {t}")));
        }
    }
    let baseline_index = sorted
        .iter()
        .position(|p| p.0 == baseline)
        .ok_or_else(|| Error::Lookup(format!("baseline N={baseline} is not among the points")))?;
    let t_base = sorted[baseline_index].1;
    let n_base = f64::from(baseline);

    let points: Vec<ScalingPoint> = sorted
        .iter()
        .enumerate()
        .map(|(i, &(n, t))| {
            let (speedup, efficiency) = if i == baseline_index {
                (1.0, 1.0)
            } else {
                let s = t_base / t;
                (s, s * n_base / f64::from(n))
            };
            ScalingPoint {
                resources: n,
                seconds: t,
                speedup,
                efficiency,
                ideal: f64::from(n) / n_base,
                meets_threshold: efficiency >= threshold,
            }
        })
        .collect();
    let largest_efficient = points
        .iter()
        .filter(|p| p.meets_threshold)
        .map(|p| p.resources)
        .max();
    Ok(ScalingSeries {
        points,
        baseline_index,
        threshold,
        largest_efficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_nodes_at_seventy_percent() {
        let s = scaling_analysis(&[(1, 100.0), (10, 14.0)], 1, DEFAULT_EFFICIENCY_THRESHOLD).unwrap();
        let p = s.points[1];
        assert!((p.speedup - 100.0 / 14.0).abs() < 1e-12);
        assert!((p.efficiency - 0.714_285_714_285_714_3).abs() < 1e-12);
        assert_eq!(s.largest_efficient, Some(10));
    }

    #[test]
    fn ideal_doubling() {
        let s = scaling_analysis(&[(2, 50.0), (1, 100.0)], 1, 0.7).unwrap();
        assert_eq!(s.points[0].resources, 1);
        assert_eq!(s.points[1].speedup, 2.0);
        assert_eq!(s.points[1].efficiency, 1.0);
        assert_eq!(s.points[1].ideal, 2.0);
    }

    #[test]
    fn baseline_need_not_be_smallest() {
        let s = scaling_analysis(&[(1, 100.0), (2, 60.0), (4, 30.0)], 2, 0.7).unwrap();
        assert_eq!(s.baseline().resources, 2);
        assert_eq!(s.baseline().efficiency, 1.0);
        assert!((s.points[2].efficiency - 1.0).abs() < 1e-12);
        assert!((s.points[0].ideal - 0.5).abs() < 1e-12);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(scaling_analysis(&[(1, 1.0)], 1, 0.7), Err(Error::Structural(_))));
        assert!(matches!(
            scaling_analysis(&[(1, 1.0), (1, 2.0)], 1, 0.7),
            Err(Error::Structural(_))
        ));
        assert!(matches!(scaling_analysis(&[(1, 1.0), (2, 2.0)], 3, 0.7), Err(Error::Lookup(_))));
    }
}
