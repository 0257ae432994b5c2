//! Reference implementations that share no code with the library: plain
//! tanh-sinh quadrature for the distribution functions and a separate
//! Monte-Carlo power simulation on a different generator.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

/// Values produced by these oracles, frozen so library tests do not pay for
/// re-deriving them.
pub mod frozen {
    /// t quantile at 0.975, dof 3.
    pub const T_975_DOF3: f64 = 3.182_446_305_284_263;
    /// t quantile at 0.975, dof 68.
    pub const T_975_DOF68: f64 = 1.995_468_931_429_843_5;
    /// Student t CDF at t = 1, dof 8.
    pub const T_CDF_1_DOF8: f64 = 0.826_703_246_456_332_9;
    /// F CDF at x = 4, dof (9, 9).
    pub const F_CDF_4_9_9: f64 = 0.974_498_369_646_524_6;
    /// Two-sided pooled p for t = -1 at dof 8.
    pub const POOLED_P_T1_DOF8: f64 = 0.346_593_507_087_334_2;
    /// Two-sided F-test p at f = 4, dof (9, 9).
    pub const F_TWO_SIDED_P_4_9_9: f64 = 0.051_003_260_706_950_8;
    /// Pooled t-test power, effect 0.04, cv 0.10, n 35, alpha 0.05.
    pub const POWER_E004_CV010: f64 = 0.3794;
    /// Same at cv 0.02.
    pub const POWER_E004_CV002: f64 = 1.0;
}

/// Integrand sees the abscissa plus its distances to both interval ends, so
/// endpoint singularities are evaluated without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    let half = width / 2.0;
    let eval = |u: f64| {
        let s = PI / 2.0 * u.sinh();
        let c = PI / 2.0 * u.cosh();
        let from_lo = width / (1.0 + (-2.0 * s).exp());
        let to_hi = width / (1.0 + (2.0 * s).exp());
        let w = half * c / (s.cosh() * s.cosh());
        if from_lo <= 0.0 || to_hi <= 0.0 || !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let v = f(lo + from_lo, from_lo, to_hi) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let u_max = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= u_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h /= 2.0;
        let mut k = 1;
        while (k as f64) * h <= u_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= 1e-15 * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Complete beta function by quadrature.
pub fn beta(a: f64, b: f64) -> f64 {
    tanh_sinh(|_, l, r| l.powf(a - 1.0) * r.powf(b - 1.0), 0.0, 1.0)
}

/// I_x(a, b) by direct integration of the beta density.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    // ∫_0^x t^(a-1) (1-t)^(b-1); 1 - t = (1 - x) + (x - t).
    let part = tanh_sinh(|_, l, r| l.powf(a - 1.0) * ((1.0 - x) + r).powf(b - 1.0), 0.0, x);
    part / beta(a, b)
}

/// Student t density.
pub fn t_density(t: f64, dof: f64) -> f64 {
    let norm = 1.0 / (dof.sqrt() * beta(dof / 2.0, 0.5));
    norm * (1.0 + t * t / dof).powf(-(dof + 1.0) / 2.0)
}

/// P(T ≤ t) by integration of the density from 0.
pub fn t_cdf(t: f64, dof: f64) -> f64 {
    let norm = 1.0 / (dof.sqrt() * beta(dof / 2.0, 0.5));
    let mass = tanh_sinh(|u, _, _| (1.0 + u * u / dof).powf(-(dof + 1.0) / 2.0), 0.0, t.abs()) * norm;
    if t >= 0.0 {
        0.5 + mass
    } else {
        0.5 - mass
    }
}

/// Quantile by bisection on [`t_cdf`].
pub fn t_quantile(p: f64, dof: f64) -> f64 {
    let (mut lo, mut hi) = (-1e3, 1e3);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if t_cdf(mid, dof) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

/// F CDF by integration of the F density.
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let norm = (d1 / d2).powf(d1 / 2.0) / beta(d1 / 2.0, d2 / 2.0);
    norm * tanh_sinh(
        |u, l, _| l.powf(d1 / 2.0 - 1.0) * (1.0 + d1 * u / d2).powf(-(d1 + d2) / 2.0),
        0.0,
        x,
    )
}

/// Pooled two-sample t statistic, written out longhand.
pub fn pooled_t(a: &[f64], b: &[f64]) -> f64 {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let ss = |v: &[f64], m: f64| v.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
    let (ma, mb) = (mean(a), mean(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sp2 = (ss(a, ma) + ss(b, mb)) / (na + nb - 2.0);
    (ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt()
}

/// Rejection rate of the two-sided pooled test with groups N(1, cv) and
/// N(1 − effect, cv), using a fixed critical value.
pub fn mc_power(effect: f64, cv: f64, n: usize, t_crit: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let base = Normal::new(1.0, cv).unwrap();
    let cand = Normal::new(1.0 - effect, cv).unwrap();
    let draw = |d: &Normal<f64>, rng: &mut StdRng| loop {
        let v = d.sample(rng);
        if v > 0.0 {
            break v;
        }
    };
    let mut rejections = 0;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for _ in 0..trials {
        for x in a.iter_mut() {
            *x = draw(&base, &mut rng);
        }
        for x in b.iter_mut() {
            *x = draw(&cand, &mut rng);
        }
        if pooled_t(&a, &b).abs() > t_crit {
            rejections += 1;
        }
    }
    rejections as f64 / trials as f64
}

/// Quartile by brute-force order statistics: position p·(n−1), linear
/// interpolation between neighbours.
pub fn brute_quantile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let pos = p * (v.len() as f64 - 1.0);
    let i = pos as usize;
    if i + 1 >= v.len() {
        return v[v.len() - 1];
    }
    v[i] * (1.0 - (pos - i as f64)) + v[i + 1] * (pos - i as f64)
}
