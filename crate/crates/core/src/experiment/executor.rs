//! Plan execution. Runs never overlap: each child is waited for before the
//! next one starts, so timings are not perturbed by concurrent work.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::launch::{build_launch_command, LaunchSpec};
use super::sweep::SweepPlan;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    DryRun,
    Run,
}

/// One entry of the results index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub index: usize,
    pub repetition: u32,
    pub config: RunConfig,
    pub argv: Vec<String>,
    pub env: Vec<(String, String)>,
    pub log_path: PathBuf,
    /// `None` for dry runs, spawn failures and signal deaths.
    pub exit_status: Option<i32>,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub started_unix: f64,
    pub finished_unix: f64,
}

/// Hooks around each run.
pub trait ExecutionObserver {
    fn on_start(&mut self, _index: usize, _spec: &LaunchSpec) {}
    fn on_finish(&mut self, _artifact: &RunArtifact) {}
}

pub struct NoopObserver;

impl ExecutionObserver for NoopObserver {}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn log_name(index: usize, label: &str, repetition: u32, repetitions: u32) -> String {
    if repetitions > 1 {
        format!("{index:03}-{label}-rep{repetition}.log")
    } else {
        format!("{index:03}-{label}.log")
    }
}

/// Resolved launches in plan order (config-major, repetition-minor).
pub fn plan_launches(plan: &SweepPlan) -> Result<Vec<(usize, u32, &RunConfig, LaunchSpec)>> {
    plan.validate()?;
    let mut out = Vec::new();
    let mut index = 0;
    for config in &plan.configs {
        for rep in 0..plan.repetitions {
            let mut spec = build_launch_command(config, &plan.command)?;
            spec.expected_log = plan
                .workdir
                .join(log_name(index, &config.label, rep, plan.repetitions));
            out.push((index, rep, config, spec));
            index += 1;
        }
    }
    Ok(out)
}

/// Execute or dry-run a plan.
///
/// Dry runs write one command line per run to `out` and spawn nothing. In
/// run mode each child's stdout goes to its log file (stderr next to it with
/// an `.err` suffix) and one JSON line per run is appended to the results
/// index. A failing child is recorded and the plan continues; failing to
/// write the index aborts.
pub fn execute_plan(
    plan: &SweepPlan,
    mode: ExecutionMode,
    observer: &mut dyn ExecutionObserver,
    out: &mut dyn Write,
) -> Result<Vec<RunArtifact>> {
    let launches = plan_launches(plan)?;
    let mut artifacts = Vec::with_capacity(launches.len());

    if mode == ExecutionMode::DryRun {
        for (index, rep, config, spec) in launches {
            writeln!(out, "{}", spec.display_line()).map_err(|e| Error::io("<stdout>", e))?;
            let t = now_unix();
            artifacts.push(RunArtifact {
                index,
                repetition: rep,
                config: config.clone(),
                argv: spec.argv,
                env: spec.env,
                log_path: spec.expected_log,
                exit_status: None,
                success: true,
                error: None,
                started_unix: t,
                finished_unix: t,
            });
        }
        return Ok(artifacts);
    }

    fs::create_dir_all(&plan.workdir).map_err(|e| Error::io(&plan.workdir, e))?;
    if let Some(parent) = plan.results_index.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut index_file =
        File::create(&plan.results_index).map_err(|e| Error::io(&plan.results_index, e))?;

    for (index, rep, config, spec) in launches {
        observer.on_start(index, &spec);
        let started = now_unix();
        let outcome = run_one(&spec);
        let finished = now_unix();
        let (exit_status, error) = match outcome {
            Ok(code) => (code, None),
            Err(e) => (None, Some(e)),
        };
        let artifact = RunArtifact {
            index,
            repetition: rep,
            config: config.clone(),
            argv: spec.argv,
            env: spec.env,
            log_path: spec.expected_log,
            success: error.is_none() && exit_status == Some(0),
            exit_status,
            error,
            started_unix: started,
            finished_unix: finished,
        };
        observer.on_finish(&artifact);
        let line = serde_json::to_string(&artifact)
            .map_err(|e| Error::Structural(format!("cannot serialize run record: {e}")))?;
        writeln!(index_file, "{line}")
            .and_then(|_| index_file.flush())
            .map_err(|e| Error::io(&plan.results_index, e))?;
        writeln!(out, "{} {} {}", index, if artifact.success { "ok" } else { "FAILED" }, artifact.log_path.display())
            .map_err(|e| Error::io("<stdout>", e))?;
        artifacts.push(artifact);
    }
    Ok(artifacts)
}

fn err_path(log: &Path) -> PathBuf {
    let mut p = log.as_os_str().to_owned();
    p.push(".err");
    PathBuf::from(p)
}

/// Spawn and wait. `Ok(None)` when the child died from a signal.
fn run_one(spec: &LaunchSpec) -> std::result::Result<Option<i32>, String> {
    let log = File::create(&spec.expected_log)
        .map_err(|e| format!("cannot create {}: {e}", spec.expected_log.display()))?;
    let err_log = File::create(err_path(&spec.expected_log)).map_err(|e| e.to_string())?;
    let (program, args) = spec.argv.split_first().ok_or("empty command")?;
    let status = Command::new(program)
        .args(args)
        .envs(spec.env.iter().map(|(k, v)| (k, v)))
        .stdin(Stdio::null())
        .stdout(log)
        .stderr(err_log)
        .status()
        .map_err(|e| format!("cannot start `{program}`: {e}"))?;
    Ok(status.code())
}

/// Read a results index written by [`execute_plan`].
pub fn read_results_index(path: &Path) -> Result<Vec<RunArtifact>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
