//! TOML sweep plan files.
//!
//! ```toml
//! repetitions = 1            # optional, default 1
//! workdir = "runs"           # optional, relative to the plan file
//! results_index = "runs/index.jsonl"
//!
//! [hardware]
//! cores_per_node = 36
//! sockets_per_node = 2
//! tag = "broadwell36"
//!
//! [launch]
//! template = "srun -N {nodes} -n {total_ranks} {extra_flags} {app}"
//! app = "./cp2k.psmp -i md.inp"
//!
//! [axes]                     # cartesian sweep
//! nodes = [10]
//! total_ranks = [20, 40, 60]
//! distributions = ["default", "round_robin", "block"]
//! threads = "fill"           # or an integer
//! cores_per_socket_bind = 1  # optional
//! allow_oversubscribe = false
//!
//! [[config]]                 # explicit configurations, appended after the axes
//! nodes = 1
//! total_ranks = 2
//! threads = 18               # optional, fill policy otherwise
//! distribution = "block"     # optional
//! app = "./other"            # optional per-run application command
//! label = "baseline"         # optional
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::config::{derive_threads, Distribution, Hardware, RunConfig, ThreadPolicy};
use super::launch::CommandTemplate;
use super::sweep::{expand_configs, SweepAxes, SweepPlan};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    #[serde(default = "one")]
    repetitions: u32,
    workdir: Option<PathBuf>,
    results_index: Option<PathBuf>,
    hardware: Hardware,
    #[serde(default)]
    launch: LaunchSection,
    axes: Option<AxesSection>,
    #[serde(default)]
    config: Vec<ConfigSection>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaunchSection {
    template: Option<String>,
    app: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ThreadsValue {
    Count(u32),
    Name(String),
}

impl ThreadsValue {
    fn policy(&self) -> Result<ThreadPolicy> {
        match self {
            ThreadsValue::Count(k) => Ok(ThreadPolicy::Explicit(*k)),
            ThreadsValue::Name(s) if s.eq_ignore_ascii_case("fill") => Ok(ThreadPolicy::Fill),
            ThreadsValue::Name(s) => Err(Error::Config(format!(
                "threads must be \"fill\" or an integer, got `{s}`"
            ))),
        }
    }
}

fn policy_of(v: &Option<ThreadsValue>) -> Result<ThreadPolicy> {
    v.as_ref().map_or(Ok(ThreadPolicy::Fill), ThreadsValue::policy)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxesSection {
    nodes: Vec<u32>,
    total_ranks: Vec<u32>,
    #[serde(default)]
    distributions: Vec<String>,
    threads: Option<ThreadsValue>,
    cores_per_socket_bind: Option<u32>,
    #[serde(default)]
    allow_oversubscribe: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigSection {
    nodes: u32,
    total_ranks: u32,
    threads: Option<ThreadsValue>,
    distribution: Option<String>,
    cores_per_socket_bind: Option<u32>,
    #[serde(default)]
    allow_oversubscribe: bool,
    app: Option<String>,
    label: Option<String>,
}

impl ConfigSection {
    fn build(&self, hw: &Hardware) -> Result<RunConfig> {
        if self.nodes == 0 || !self.total_ranks.is_multiple_of(self.nodes) || self.total_ranks < self.nodes {
            return Err(Error::Feasibility(format!(
                "{} ranks do not divide evenly over {} nodes",
                self.total_ranks, self.nodes
            )));
        }
        let rpn = self.total_ranks / self.nodes;
        let threads = derive_threads(hw.cores_per_node, rpn, policy_of(&self.threads)?, self.allow_oversubscribe)?;
        let distribution = match &self.distribution {
            Some(d) => d.parse()?,
            None => Distribution::Default,
        };
        let mut cfg = RunConfig {
            nodes: self.nodes,
            ranks_per_node: rpn,
            threads_per_rank: threads,
            distribution,
            cores_per_socket_bind: self.cores_per_socket_bind,
            cores_per_node: hw.cores_per_node,
            sockets_per_node: hw.sockets_per_node,
            label: String::new(),
            hardware_tag: hw.tag.clone(),
            allow_oversubscribe: self.allow_oversubscribe,
            app: self.app.clone(),
        };
        cfg.label = self.label.clone().unwrap_or_else(|| cfg.default_label());
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse plan text. Relative paths resolve against `base_dir`.
pub fn parse_plan(text: &str, base_dir: &Path) -> Result<SweepPlan> {
    let file: PlanFile = toml::from_str(text).map_err(|e| Error::Config(format!("plan file: {e}")))?;
    file.hardware.validate()?;

    let mut configs = Vec::new();
    if let Some(axes) = &file.axes {
        let distributions = if axes.distributions.is_empty() {
            vec![Distribution::Default]
        } else {
            axes.distributions
                .iter()
                .map(|d| d.parse())
                .collect::<Result<Vec<_>>>()?
        };
        let sweep = SweepAxes {
            nodes: axes.nodes.clone(),
            total_ranks: axes.total_ranks.clone(),
            distributions,
            threads: policy_of(&axes.threads)?,
            cores_per_socket_bind: axes.cores_per_socket_bind,
            allow_oversubscribe: axes.allow_oversubscribe,
        };
        configs.extend(expand_configs(&sweep, &file.hardware)?);
    }
    for c in &file.config {
        configs.push(c.build(&file.hardware)?);
    }

    let defaults = CommandTemplate::default();
    let command = CommandTemplate::new(
        file.launch.template.unwrap_or(defaults.template),
        file.launch.app.unwrap_or(defaults.app),
    )?;
    let workdir = base_dir.join(file.workdir.unwrap_or_else(|| PathBuf::from("runs")));
    let results_index = match file.results_index {
        Some(p) => base_dir.join(p),
        None => workdir.join("index.jsonl"),
    };
    let mut plan = SweepPlan::new(configs, file.repetitions, command)?;
    plan.workdir = workdir;
    plan.results_index = results_index;
    Ok(plan)
}

pub fn load_plan(path: &Path) -> Result<SweepPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_plan(&text, base)
}
