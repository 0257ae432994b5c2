//! Run comparisons, strong-scaling series, Amdahl fits and bandwidth reports.

mod amdahl;
mod bandwidth;
mod compare;
mod scaling;

pub use amdahl::{amdahl_fit, amdahl_speedup, AmdahlFit};
pub use bandwidth::{bandwidth_report, BandwidthReport, SettingRatio, SettingStats};
pub use compare::{compare_runs, CompareOptions, ComparisonVerdict, Verdict, Window};
pub use scaling::{scaling_analysis, ScalingPoint, ScalingSeries, DEFAULT_EFFICIENCY_THRESHOLD};
