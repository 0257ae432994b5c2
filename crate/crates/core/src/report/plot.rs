//! Tab-separated plot data. Numbers use the shortest round-trip form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::ScalingSeries;
use crate::error::{Error, Result};
use crate::stats::SampleSummary;

pub const MIN_BOX_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    TimestepBox,
    ScalingCurve,
    ThreadScaling,
}

impl std::str::FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "timestep_box" | "box" => Ok(PlotKind::TimestepBox),
            "scaling_curve" | "scaling" => Ok(PlotKind::ScalingCurve),
            "thread_scaling" | "threads" => Ok(PlotKind::ThreadScaling),
            other => Err(Error::Config(format!("unknown plot kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveNumberSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Values beyond 1.5 IQR from the quartiles, ascending.
    pub outliers: Vec<f64>,
}

/// Quantile of sorted data with linear interpolation between order
/// statistics: position `p · (n − 1)`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn five_number_summary(values: &[f64]) -> Result<FiveNumberSummary> {
    if values.len() < MIN_BOX_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_BOX_POINTS,
            available: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("box summary input contains a non-finite value".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    Ok(FiveNumberSummary {
        n: sorted.len(),
        min: sorted[0],
        q1,
        median: quantile_sorted(&sorted, 0.5),
        q3,
        max: sorted[sorted.len() - 1],
        outliers: sorted
            .iter()
            .copied()
            .filter(|&v| v < lo_fence || v > hi_fence)
            .collect(),
    })
}

fn join_numbers(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// One row per group: `group n min q1 median q3 max outliers`.
pub fn timestep_box(groups: &[(String, Vec<f64>)]) -> Result<String> {
    let mut out = String::from("group\tn\tmin\tq1\tmedian\tq3\tmax\toutliers\n");
    for (name, values) in groups {
        let s = five_number_summary(values)?;
        let _ = writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.n,
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            join_numbers(&s.outliers)
        );
    }
    Ok(out)
}

/// `N T S E ideal`, one row per point.
pub fn scaling_curve(series: &ScalingSeries) -> String {
    let mut out = String::from("N\tT\tS\tE\tideal\n");
    for p in &series.points {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            p.resources, p.seconds, p.speedup, p.efficiency, p.ideal
        );
    }
    out
}

/// Mean step time and interval per thread count.
pub fn thread_scaling(points: &[(u32, SampleSummary)]) -> Result<String> {
    let mut sorted: Vec<&(u32, SampleSummary)> = points.iter().collect();
    sorted.sort_by_key(|p| p.0);
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Structural("duplicate thread count in thread-scaling data".into()));
    }
    let mut out = String::from("threads\tn\tmean\tstd\tci_lo\tci_hi\tcv\n");
    for (threads, s) in sorted {
        let cv = s.cv.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{threads}\t{}\t{}\t{}\t{}\t{}\t{cv}",
            s.n, s.mean, s.std, s.ci_lo, s.ci_hi
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::scaling_analysis;

    #[test]
    fn quartiles_of_one_to_thirty_five() {
        let v: Vec<f64> = (1..=35).map(f64::from).collect();
        let s = five_number_summary(&v).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (9.5, 18.0, 26.5));
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn constant_group() {
        let s = five_number_summary(&[5.0; 5]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (5.0, 5.0, 5.0, 5.0, 5.0));
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn outliers_and_too_few_points() {
        let s = five_number_summary(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(s.outliers, vec![100.0]);
        assert!(matches!(
            five_number_summary(&[1.0, 2.0, 3.0, 4.0]),
            Err(Error::InsufficientData { needed: 5, available: 4 })
        ));
    }

    #[test]
    fn scaling_curve_rows() {
        let s = scaling_analysis(&[(1, 100.0), (2, 50.0)], 1, 0.7).unwrap();
        assert_eq!(scaling_curve(&s), "N\tT\tS\tE\tideal\n1\t100\t1\t1\t1\n2\t50\t2\t1\t2\n");
    }

    #[test]
    fn box_tsv() {
        let text = timestep_box(&[("run".into(), vec![1.0, 2.0, 3.0, 4.0, 100.0])]).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "run\t5\t1\t2\t3\t4\t100\t100");
    }
}
