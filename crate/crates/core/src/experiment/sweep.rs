use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::{derive_threads, Distribution, Hardware, RunConfig, ThreadPolicy};
use super::launch::CommandTemplate;
use crate::error::{Error, Result};

/// Axes of a placement sweep. `total_ranks` counts ranks over all nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxes {
    pub nodes: Vec<u32>,
    pub total_ranks: Vec<u32>,
    pub distributions: Vec<Distribution>,
    #[serde(default)]
    pub threads: ThreadPolicy,
    #[serde(default)]
    pub cores_per_socket_bind: Option<u32>,
    #[serde(default)]
    pub allow_oversubscribe: bool,
}

impl SweepAxes {
    pub fn new(nodes: &[u32], total_ranks: &[u32], distributions: &[Distribution]) -> Self {
        SweepAxes {
            nodes: nodes.to_vec(),
            total_ranks: total_ranks.to_vec(),
            distributions: distributions.to_vec(),
            threads: ThreadPolicy::Fill,
            cores_per_socket_bind: None,
            allow_oversubscribe: false,
        }
    }

    pub fn threads(mut self, policy: ThreadPolicy) -> Self {
        self.threads = policy;
        self
    }

    pub fn bind(mut self, cores_per_socket: u32) -> Self {
        self.cores_per_socket_bind = Some(cores_per_socket);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub configs: Vec<RunConfig>,
    pub repetitions: u32,
    pub command: CommandTemplate,
    pub workdir: PathBuf,
    pub results_index: PathBuf,
}

impl SweepPlan {
    pub fn new(configs: Vec<RunConfig>, repetitions: u32, command: CommandTemplate) -> Result<Self> {
        let plan = SweepPlan {
            configs,
            repetitions,
            command,
            workdir: PathBuf::from("runs"),
            results_index: PathBuf::from("runs/index.jsonl"),
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_workdir(mut self, workdir: impl Into<PathBuf>) -> Self {
        let workdir = workdir.into();
        self.results_index = workdir.join("index.jsonl");
        self.workdir = workdir;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.configs.is_empty() {
            return Err(Error::Planning {
                rejected: vec!["plan has no configurations".into()],
            });
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        for c in &self.configs {
            c.validate()?;
        }
        self.command.validate()
    }
}

fn sorted_unique<T: Ord + Copy>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Cartesian product of the axes, filtered by feasibility on `hardware`.
///
/// Output is ordered by (nodes, total ranks, distribution) with duplicates
/// removed. Infeasible combinations are dropped; if nothing survives the
/// error lists every rejection.
pub fn expand_sweep(
    axes: &SweepAxes,
    hardware: &Hardware,
    repetitions: u32,
    command: CommandTemplate,
) -> Result<SweepPlan> {
    SweepPlan::new(expand_configs(axes, hardware)?, repetitions, command)
}

pub fn expand_configs(axes: &SweepAxes, hardware: &Hardware) -> Result<Vec<RunConfig>> {
    hardware.validate()?;
    if axes.nodes.is_empty() || axes.total_ranks.is_empty() || axes.distributions.is_empty() {
        return Err(Error::Config("every sweep axis needs at least one value".into()));
    }
    let mut configs = Vec::new();
    let mut rejected = Vec::new();
    for &nodes in &sorted_unique(&axes.nodes) {
        for &total in &sorted_unique(&axes.total_ranks) {
            let combo = format!("nodes={nodes} ranks={total}");
            if nodes == 0 || total % nodes != 0 || total < nodes {
                rejected.push(format!("{combo}: ranks do not divide evenly over nodes"));
                continue;
            }
            let ranks_per_node = total / nodes;
            let threads = match derive_threads(
                hardware.cores_per_node,
                ranks_per_node,
                axes.threads,
                axes.allow_oversubscribe,
            ) {
                Ok(t) => t,
                Err(e) => {
                    rejected.push(format!("{combo}: {e}"));
                    continue;
                }
            };
            for &dist in &sorted_unique(&axes.distributions) {
                let mut cfg = RunConfig {
                    nodes,
                    ranks_per_node,
                    threads_per_rank: threads,
                    distribution: dist,
                    cores_per_socket_bind: axes.cores_per_socket_bind,
                    cores_per_node: hardware.cores_per_node,
                    sockets_per_node: hardware.sockets_per_node,
                    label: String::new(),
                    hardware_tag: hardware.tag.clone(),
                    allow_oversubscribe: axes.allow_oversubscribe,
                    app: None,
                };
                cfg.label = cfg.default_label();
                match cfg.validate() {
                    Ok(()) => configs.push(cfg),
                    Err(e) => rejected.push(format!("{combo} {dist}: {e}")),
                }
            }
        }
    }
    if configs.is_empty() {
        return Err(Error::Planning { rejected });
    }
    Ok(configs)
}
