//! Two-sample t-tests and the variance-ratio F-test.

use serde::{Deserialize, Serialize};

use super::distributions::{f_cdf, f_sf, student_t_cdf, student_t_sf, student_t_two_sided};
use super::mean_and_variance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestVariant {
    /// Student's test with pooled variance, dof n₁ + n₂ − 2.
    #[default]
    Pooled,
    /// Unequal variances, Welch-Satterthwaite dof.
    Welch,
    /// One-sample test on step-wise differences; samples must be aligned.
    Paired,
}

impl std::str::FromStr for TestVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" | "student" => Ok(TestVariant::Pooled),
            "welch" => Ok(TestVariant::Welch),
            "paired" => Ok(TestVariant::Paired),
            other => Err(Error::Config(format!("unknown t-test variant `{other}`"))),
        }
    }
}

/// Alternative hypothesis, always phrased as "first sample relative to the
/// second".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    #[default]
    TwoSided,
    Less,
    Greater,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_stat: f64,
    pub dof: f64,
    pub p_value: f64,
    pub variant: TestVariant,
    pub sidedness: Sidedness,
    pub alpha: f64,
    pub significant: bool,
    /// Both samples constant with different values: the statistic is
    /// infinite and the p-value is decided by direction alone.
    pub perfect_separation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FTestResult {
    /// `var(a) / var(b)`.
    pub f_stat: f64,
    pub dof_num: f64,
    pub dof_den: f64,
    pub p_value: f64,
    pub sidedness: Sidedness,
    pub alpha: f64,
    pub significant: bool,
    /// Exactly one of the variances is zero.
    pub degenerate: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

fn p_from_t(t: f64, dof: f64, sidedness: Sidedness) -> Result<f64> {
    let p = match sidedness {
        Sidedness::TwoSided => student_t_two_sided(t, dof)?,
        Sidedness::Less => student_t_cdf(t, dof)?,
        Sidedness::Greater => student_t_sf(t, dof)?,
    };
    Ok(p.clamp(0.0, 1.0))
}

/// p-value when the standard error is zero: `diff` is the mean difference.
fn degenerate_p(diff: f64, sidedness: Sidedness) -> (f64, f64, bool) {
    if diff == 0.0 {
        let p = match sidedness {
            Sidedness::TwoSided => 1.0,
            _ => 0.5,
        };
        return (0.0, p, false);
    }
    let t = diff.signum() * f64::INFINITY;
    let p = match sidedness {
        Sidedness::TwoSided => 0.0,
        Sidedness::Less if diff < 0.0 => 0.0,
        Sidedness::Greater if diff > 0.0 => 0.0,
        _ => 1.0,
    };
    (t, p, true)
}

/// Two-sample t-test of `a` against `b`.
pub fn t_test(
    a: &[f64],
    b: &[f64],
    variant: TestVariant,
    sidedness: Sidedness,
    alpha: f64,
) -> Result<TTestResult> {
    if variant == TestVariant::Paired {
        return paired_t_test(a, b, sidedness, alpha);
    }
    check_alpha(alpha)?;
    let (mean_a, var_a) = mean_and_variance(a)?;
    let (mean_b, var_b) = mean_and_variance(b)?;
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let diff = mean_a - mean_b;

    let (se, dof) = match variant {
        TestVariant::Pooled => {
            let dof = na + nb - 2.0;
            let pooled = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / dof;
            ((pooled * (1.0 / na + 1.0 / nb)).sqrt(), dof)
        }
        TestVariant::Welch => {
            let qa = var_a / na;
            let qb = var_b / nb;
            let se2 = qa + qb;
            let denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
            let dof = if denom > 0.0 {
                se2 * se2 / denom
            } else {
                na + nb - 2.0
            };
            (se2.sqrt(), dof)
        }
        TestVariant::Paired => unreachable!(),
    };

    let (t_stat, p_value, perfect_separation) = if se == 0.0 {
        degenerate_p(diff, sidedness)
    } else {
        let t = diff / se;
        (t, p_from_t(t, dof, sidedness)?, false)
    };

    Ok(TTestResult {
        t_stat,
        dof,
        p_value,
        variant,
        sidedness,
        alpha,
        significant: p_value < alpha,
        perfect_separation,
    })
}

/// Paired t-test on `a[i] - b[i]`, dof n − 1.
pub fn paired_t_test(
    a: &[f64],
    b: &[f64],
    sidedness: Sidedness,
    alpha: f64,
) -> Result<TTestResult> {
    check_alpha(alpha)?;
    if a.len() != b.len() {
        return Err(Error::Alignment(format!(
            "paired samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (mean, var) = mean_and_variance(&diffs)?;
    let n = diffs.len() as f64;
    let dof = n - 1.0;
    let se = (var / n).sqrt();
    let (t_stat, p_value, perfect_separation) = if se == 0.0 {
        degenerate_p(mean, sidedness)
    } else {
        let t = mean / se;
        (t, p_from_t(t, dof, sidedness)?, false)
    };
    Ok(TTestResult {
        t_stat,
        dof,
        p_value,
        variant: TestVariant::Paired,
        sidedness,
        alpha,
        significant: p_value < alpha,
        perfect_separation,
    })
}

/// F-test on the variance ratio `var(a) / var(b)`.
///
/// The orientation is fixed: samples are never reordered so that the
/// larger variance lands on top.
pub fn f_test(a: &[f64], b: &[f64], sidedness: Sidedness, alpha: f64) -> Result<FTestResult> {
    check_alpha(alpha)?;
    let (_, var_a) = mean_and_variance(a)?;
    let (_, var_b) = mean_and_variance(b)?;
    let dof_num = (a.len() - 1) as f64;
    let dof_den = (b.len() - 1) as f64;

    if var_a == 0.0 && var_b == 0.0 {
        return Err(Error::DegenerateVariance);
    }

    let (f_stat, p_value, degenerate) = if var_b == 0.0 || var_a == 0.0 {
        let f = if var_b == 0.0 { f64::INFINITY } else { 0.0 };
        let p = match sidedness {
            Sidedness::TwoSided => 0.0,
            Sidedness::Greater if var_b == 0.0 => 0.0,
            Sidedness::Less if var_a == 0.0 => 0.0,
            _ => 1.0,
        };
        (f, p, true)
    } else {
        let f = var_a / var_b;
        let p = match sidedness {
            Sidedness::TwoSided => {
                let lower = f_cdf(f, dof_num, dof_den)?;
                let upper = f_sf(f, dof_num, dof_den)?;
                (2.0 * lower.min(upper)).min(1.0)
            }
            Sidedness::Less => f_cdf(f, dof_num, dof_den)?,
            Sidedness::Greater => f_sf(f, dof_num, dof_den)?,
        };
        (f, p.clamp(0.0, 1.0), false)
    };

    Ok(FTestResult {
        f_stat,
        dof_num,
        dof_den,
        p_value,
        sidedness,
        alpha,
        significant: p_value < alpha,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: Sidedness = Sidedness::TwoSided;

    #[test]
    fn equal_means_give_unit_p() {
        let r = t_test(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0], TestVariant::Pooled, TWO, 0.05).unwrap();
        assert_eq!(r.t_stat, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.significant);
        assert_eq!(r.dof, 4.0);
    }

    #[test]
    fn shifted_five_point_samples() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        let r = t_test(&a, &b, TestVariant::Pooled, TWO, 0.05).unwrap();
        assert!((r.t_stat + 1.0).abs() < 1e-14);
        assert_eq!(r.dof, 8.0);
        // Integration of the Student density at dof 8.
        assert!((r.p_value - 0.346_593_507_087_334_2).abs() < 1e-12, "{}", r.p_value);
        assert!(!r.significant);

        // Equal variances make Welch coincide with the pooled test.
        let w = t_test(&a, &b, TestVariant::Welch, TWO, 0.05).unwrap();
        assert!((w.dof - 8.0).abs() < 1e-12);
        assert!((w.p_value - r.p_value).abs() < 1e-12);
    }

    #[test]
    fn one_sided_tails() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        let less = t_test(&a, &b, TestVariant::Pooled, Sidedness::Less, 0.05).unwrap();
        let greater = t_test(&a, &b, TestVariant::Pooled, Sidedness::Greater, 0.05).unwrap();
        assert!((less.p_value - 0.173_296_753_543_667_1).abs() < 1e-12);
        assert!((less.p_value + greater.p_value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn welch_dof_for_unequal_variances() {
        let a = [10.0, 12.0, 14.0, 16.0];
        let b = [1.0, 1.5, 2.0];
        let r = t_test(&a, &b, TestVariant::Welch, TWO, 0.05).unwrap();
        let qa: f64 = (20.0 / 3.0) / 4.0;
        let qb: f64 = 0.25 / 3.0;
        let dof = (qa + qb).powi(2) / (qa * qa / 3.0 + qb * qb / 2.0);
        assert!((r.dof - dof).abs() < 1e-12);
        assert!((r.t_stat - 11.5 / (qa + qb).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_samples() {
        let same = t_test(&[3.0; 4], &[3.0; 5], TestVariant::Pooled, TWO, 0.05).unwrap();
        assert_eq!((same.t_stat, same.p_value), (0.0, 1.0));
        assert!(!same.perfect_separation);

        let apart = t_test(&[3.0; 4], &[4.0; 5], TestVariant::Welch, TWO, 0.05).unwrap();
        assert_eq!(apart.p_value, 0.0);
        assert!(apart.perfect_separation && apart.significant);
        assert_eq!(apart.t_stat, f64::NEG_INFINITY);

        let wrong_way = t_test(&[3.0; 4], &[4.0; 5], TestVariant::Pooled, Sidedness::Greater, 0.05)
            .unwrap();
        assert_eq!(wrong_way.p_value, 1.0);
    }

    #[test]
    fn too_small_samples() {
        assert!(matches!(
            t_test(&[1.0], &[1.0, 2.0], TestVariant::Pooled, TWO, 0.05),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            f_test(&[1.0, 2.0], &[1.0], TWO, 0.05),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn paired_test_uses_differences() {
        let a = [10.0, 11.0, 12.5, 9.0];
        let b = [9.0, 10.5, 11.0, 8.5];
        let r = t_test(&a, &b, TestVariant::Paired, TWO, 0.05).unwrap();
        assert_eq!(r.dof, 3.0);
        let d = [1.0, 0.5, 1.5, 0.5];
        let m = 0.875;
        let v: f64 = d.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 3.0;
        assert!((r.t_stat - m / (v / 4.0).sqrt()).abs() < 1e-12);
        assert!(matches!(
            paired_t_test(&a, &b[..3], TWO, 0.05),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn permutation_has_unit_variance_ratio() {
        let a = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0];
        let b = [9.0, 5.0, 1.0, 4.0, 1.0, 3.0];
        let r = f_test(&a, &b, TWO, 0.05).unwrap();
        assert!((r.f_stat - 1.0).abs() < 1e-14);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_ratio_four_at_nine_nine() {
        // ±1 and ±2 alternating: var = 10/9 and 40/9 for n = 10.
        let b: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let a: Vec<f64> = b.iter().map(|v| 2.0 * v).collect();
        let r = f_test(&a, &b, TWO, 0.05).unwrap();
        assert!((r.f_stat - 4.0).abs() < 1e-14);
        assert_eq!((r.dof_num, r.dof_den), (9.0, 9.0));
        // Integration of the F(9, 9) density.
        assert!((r.p_value - 0.051_003_260_706_950_8).abs() < 1e-12, "{}", r.p_value);
        assert!(!r.significant);
    }

    #[test]
    fn f_test_degenerate_cases() {
        assert!(matches!(
            f_test(&[2.0; 3], &[5.0; 4], TWO, 0.05),
            Err(Error::DegenerateVariance)
        ));
        let r = f_test(&[1.0, 2.0, 3.0], &[5.0; 4], TWO, 0.05).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(r.f_stat, f64::INFINITY);
    }

    #[test]
    fn alpha_must_be_open_interval() {
        assert!(matches!(
            t_test(&[1.0, 2.0], &[1.0, 2.0], TestVariant::Pooled, TWO, 0.0),
            Err(Error::Validation(_))
        ));
    }
}
