use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order in which successive ranks are assigned to nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Only the rank count per node is given; placement is left to the
    /// launcher and OS.
    #[default]
    Default,
    /// Successive ranks on successive nodes.
    RoundRobin,
    /// Successive ranks packed on the same node.
    Block,
}

impl Distribution {
    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Default => "default",
            Distribution::RoundRobin => "round_robin",
            Distribution::Block => "block",
        }
    }

    /// Launcher token for this distribution, if any.
    pub fn launcher_flag(self) -> Option<&'static str> {
        match self {
            Distribution::Default => None,
            Distribution::RoundRobin => Some("--distribution=cyclic"),
            Distribution::Block => Some("--distribution=block"),
        }
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "default" => Ok(Distribution::Default),
            "round_robin" | "round-robin" | "roundrobin" | "cyclic" => Ok(Distribution::RoundRobin),
            "block" => Ok(Distribution::Block),
            other => Err(Error::Config(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Node shape of the machine a plan targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hardware {
    pub cores_per_node: u32,
    pub sockets_per_node: u32,
    #[serde(default)]
    pub tag: String,
}

impl Hardware {
    pub fn new(cores_per_node: u32, sockets_per_node: u32, tag: impl Into<String>) -> Result<Self> {
        let hw = Hardware {
            cores_per_node,
            sockets_per_node,
            tag: tag.into(),
        };
        hw.validate()?;
        Ok(hw)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores_per_node == 0 || self.sockets_per_node == 0 {
            return Err(Error::Config("hardware needs at least one core and one socket".into()));
        }
        if !self.cores_per_node.is_multiple_of(self.sockets_per_node) {
            return Err(Error::Config(format!(
                "{} cores do not divide evenly over {} sockets",
                self.cores_per_node, self.sockets_per_node
            )));
        }
        Ok(())
    }

    pub fn cores_per_socket(&self) -> u32 {
        self.cores_per_node / self.sockets_per_node
    }
}

/// How the OpenMP thread count per rank is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreadPolicy {
    /// One thread per core: `floor(cores_per_node / ranks_per_node)`.
    #[default]
    Fill,
    Explicit(u32),
}

/// Threads per rank for a node with `cores_per_node` cores hosting
/// `ranks_per_node` ranks.
pub fn derive_threads(
    cores_per_node: u32,
    ranks_per_node: u32,
    policy: ThreadPolicy,
    allow_oversubscribe: bool,
) -> Result<u32> {
    if ranks_per_node == 0 {
        return Err(Error::Feasibility("at least one rank per node is required".into()));
    }
    if ranks_per_node > cores_per_node && !allow_oversubscribe {
        return Err(Error::Feasibility(format!(
            "{ranks_per_node} ranks per node exceed {cores_per_node} cores"
        )));
    }
    match policy {
        ThreadPolicy::Fill => Ok((cores_per_node / ranks_per_node).max(1)),
        ThreadPolicy::Explicit(0) => Err(Error::Feasibility("thread count must be at least 1".into())),
        ThreadPolicy::Explicit(k) => {
            let used = u64::from(k) * u64::from(ranks_per_node);
            if used > u64::from(cores_per_node) && !allow_oversubscribe {
                return Err(Error::Feasibility(format!(
                    "{ranks_per_node} ranks × {k} threads = {used} exceeds {cores_per_node} cores"
                )));
            }
            Ok(k)
        }
    }
}

/// Placement and affinity knobs of one run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunConfig {
    pub nodes: u32,
    pub ranks_per_node: u32,
    pub threads_per_rank: u32,
    pub distribution: Distribution,
    /// Ranks bound to each socket (`--cores-per-socket=k`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cores_per_socket_bind: Option<u32>,
    pub cores_per_node: u32,
    pub sockets_per_node: u32,
    pub label: String,
    #[serde(default)]
    pub hardware_tag: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_oversubscribe: bool,
    /// Application command for this run only, replacing the plan's `app`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app: Option<String>,
}

impl RunConfig {
    /// Build and validate a configuration; the label is generated.
    pub fn new(
        hardware: &Hardware,
        nodes: u32,
        ranks_per_node: u32,
        threads_per_rank: u32,
        distribution: Distribution,
        cores_per_socket_bind: Option<u32>,
    ) -> Result<Self> {
        let mut cfg = RunConfig {
            nodes,
            ranks_per_node,
            threads_per_rank,
            distribution,
            cores_per_socket_bind,
            cores_per_node: hardware.cores_per_node,
            sockets_per_node: hardware.sockets_per_node,
            label: String::new(),
            hardware_tag: hardware.tag.clone(),
            allow_oversubscribe: false,
            app: None,
        };
        cfg.label = cfg.default_label();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn total_ranks(&self) -> u64 {
        u64::from(self.nodes) * u64::from(self.ranks_per_node)
    }

    pub fn default_label(&self) -> String {
        let mut label = format!(
            "{}n-{}r-{}t-{}",
            self.nodes,
            self.total_ranks(),
            self.threads_per_rank,
            self.distribution
        );
        if let Some(k) = self.cores_per_socket_bind {
            label.push_str(&format!("-cps{k}"));
        }
        label
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.ranks_per_node == 0 || self.threads_per_rank == 0 {
            return Err(Error::Feasibility(format!(
                "{}: nodes, ranks and threads must all be at least 1",
                self.label
            )));
        }
        if self.cores_per_node == 0 || self.sockets_per_node == 0 {
            return Err(Error::Config("hardware needs at least one core and one socket".into()));
        }
        let used = u64::from(self.ranks_per_node) * u64::from(self.threads_per_rank);
        if used > u64::from(self.cores_per_node) && !self.allow_oversubscribe {
            return Err(Error::Feasibility(format!(
                "{}: {} ranks × {} threads = {used} exceeds {} cores per node",
                self.label, self.ranks_per_node, self.threads_per_rank, self.cores_per_node
            )));
        }
        if let Some(k) = self.cores_per_socket_bind {
            let per_socket = self.cores_per_node / self.sockets_per_node;
            if k == 0 || k > per_socket {
                return Err(Error::Feasibility(format!(
                    "{}: --cores-per-socket={k} outside 1..={per_socket}",
                    self.label
                )));
            }
            if u64::from(self.ranks_per_node) > u64::from(self.sockets_per_node) * u64::from(k) {
                return Err(Error::Feasibility(format!(
                    "{}: {} ranks per node cannot be bound with {k} per socket on {} sockets",
                    self.label, self.ranks_per_node, self.sockets_per_node
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_policy_matches_table_rows() {
        assert_eq!(derive_threads(36, 2, ThreadPolicy::Fill, false).unwrap(), 18);
        assert_eq!(derive_threads(36, 4, ThreadPolicy::Fill, false).unwrap(), 9);
        assert_eq!(derive_threads(36, 18, ThreadPolicy::Fill, false).unwrap(), 2);
        assert_eq!(derive_threads(36, 6, ThreadPolicy::Fill, false).unwrap(), 6);
    }

    #[test]
    fn explicit_policy_checks_feasibility() {
        assert_eq!(derive_threads(36, 18, ThreadPolicy::Explicit(1), false).unwrap(), 1);
        assert!(matches!(
            derive_threads(36, 2, ThreadPolicy::Explicit(19), false),
            Err(Error::Feasibility(_))
        ));
        assert_eq!(derive_threads(36, 2, ThreadPolicy::Explicit(19), true).unwrap(), 19);
    }

    #[test]
    fn too_many_ranks() {
        assert!(derive_threads(36, 37, ThreadPolicy::Fill, false).is_err());
    }

    #[test]
    fn binding_feasibility() {
        let hw = Hardware::new(36, 2, "bdw").unwrap();
        assert!(RunConfig::new(&hw, 10, 2, 18, Distribution::Default, Some(1)).is_ok());
        assert!(matches!(
            RunConfig::new(&hw, 10, 4, 9, Distribution::Default, Some(1)),
            Err(Error::Feasibility(_))
        ));
        assert!(RunConfig::new(&hw, 10, 4, 9, Distribution::Default, Some(2)).is_ok());
        assert!(RunConfig::new(&hw, 1, 2, 18, Distribution::Block, Some(19)).is_err());
    }

    #[test]
    fn oversubscription_rejected_without_override() {
        let hw = Hardware::new(36, 2, "bdw").unwrap();
        assert!(RunConfig::new(&hw, 1, 2, 19, Distribution::Default, None).is_err());
    }

    #[test]
    fn labels() {
        let hw = Hardware::new(36, 2, "bdw").unwrap();
        let c = RunConfig::new(&hw, 10, 4, 9, Distribution::Block, None).unwrap();
        assert_eq!(c.label, "10n-40r-9t-block");
        assert_eq!(c.total_ranks(), 40);
    }

    #[test]
    fn distribution_names() {
        assert_eq!("cyclic".parse::<Distribution>().unwrap(), Distribution::RoundRobin);
        assert_eq!("round-robin".parse::<Distribution>().unwrap(), Distribution::RoundRobin);
        assert!("scatter".parse::<Distribution>().is_err());
    }
}
