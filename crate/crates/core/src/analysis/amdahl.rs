use serde::{Deserialize, Serialize};

use super::scaling::ScalingSeries;
use crate::error::{Error, Result};

const GRID_POINTS: usize = 1001;
const GOLDEN_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmdahlFit {
    pub parallel_fraction: f64,
    /// Root-mean-square speedup residual.
    pub residual: f64,
    /// `1 / (1 − f)`; absent for a fully parallel fit.
    pub max_speedup: Option<f64>,
}

/// Modelled speedup at `ratio = N_base / N`.
pub fn amdahl_speedup(parallel_fraction: f64, ratio: f64) -> f64 {
    1.0 / ((1.0 - parallel_fraction) + parallel_fraction * ratio)
}

fn sse(f: f64, data: &[(f64, f64)]) -> f64 {
    data.iter()
        .map(|&(ratio, s)| {
            let r = amdahl_speedup(f, ratio) - s;
            r * r
        })
        .sum()
}

fn golden_section(lo: f64, hi: f64, data: &[(f64, f64)]) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sse(c, data), sse(d, data));
    for _ in 0..GOLDEN_ITERATIONS {
        if (b - a).abs() < 1e-15 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse(c, data);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse(d, data);
        }
    }
    (a + b) / 2.0
}

/// Least-squares fit of the parallel fraction to observed speedups.
///
/// The baseline point is fixed by construction (its modelled speedup is 1
/// for every `f`). A coarse grid over `[0, 1]` picks the basin and a
/// golden-section search refines inside the neighbouring grid cells; the
/// endpoints are always candidates so exact 0 and 1 fits are returned as
/// such.
pub fn amdahl_fit(series: &ScalingSeries) -> Result<AmdahlFit> {
    if series.points.len() < 2 {
        return Err(Error::Structural("Amdahl fit needs at least 2 points".into()));
    }
    let n_base = f64::from(series.baseline().resources);
    let data: Vec<(f64, f64)> = series
        .points
        .iter()
        .map(|p| (n_base / f64::from(p.resources), p.speedup))
        .collect();

    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let best = (0..GRID_POINTS)
        .map(|i| (i, sse(i as f64 * step, &data)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = best.saturating_sub(1) as f64 * step;
    let hi = ((best + 1).min(GRID_POINTS - 1)) as f64 * step;
    let refined = golden_section(lo, hi, &data).clamp(0.0, 1.0);

    let f = [refined, 0.0, 1.0, best as f64 * step]
        .into_iter()
        .min_by(|x, y| sse(*x, &data).total_cmp(&sse(*y, &data)))
        .unwrap_or(refined);
    let residual = (sse(f, &data) / data.len() as f64).sqrt();
    Ok(AmdahlFit {
        parallel_fraction: f,
        residual,
        max_speedup: (f < 1.0).then(|| 1.0 / (1.0 - f)),
    })
}
