//! Placement configurations, sweep planning, launch commands, sequential
//! execution and synthetic workloads.

mod config;
mod executor;
mod launch;
mod plan_file;
mod sweep;
mod synthetic;

pub use config::{derive_threads, Distribution, Hardware, RunConfig, ThreadPolicy};
pub use executor::{
    execute_plan, plan_launches, read_results_index, ExecutionMode, ExecutionObserver, NoopObserver,
    RunArtifact,
};
pub use launch::{build_launch_command, extra_flags, split_command, CommandTemplate, LaunchSpec, THREADS_ENV};
pub use plan_file::{load_plan, parse_plan};
pub use sweep::{expand_configs, expand_sweep, SweepAxes, SweepPlan};
pub use synthetic::{generate_synthetic, SyntheticSpec, DEFAULT_WARMUP_FACTOR};
