//! Statistical comparison of noisy per-step application timings.
//!
//! The crate is split along the workflow:
//!
//! * [`stats`]: descriptive statistics, t and F distributions, two-sample
//!   tests and Monte-Carlo power estimation.
//! * [`ingest`]: step-timing and bandwidth parsers plus the warmup-trim /
//!   fixed-window sampling protocol.
//! * [`experiment`]: placement configurations, sweep expansion, launcher
//!   command lines, sequential execution and synthetic workloads.
//! * [`analysis`]: run-vs-run verdicts, strong-scaling series, Amdahl fits
//!   and bandwidth/runtime reports.
//! * [`report`]: table rendering, plot data and the CI regression gate.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod ingest;
pub mod report;
pub mod stats;

pub use error::{Error, Result};

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.05;
