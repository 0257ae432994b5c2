//! Launcher command construction.
//!
//! A template is a whitespace-separated command line. Required placeholders:
//!
//! | placeholder      | expands to                                          |
//! |------------------|-----------------------------------------------------|
//! | `{nodes}`        | node count                                          |
//! | `{total_ranks}`  | nodes × ranks per node                              |
//! | `{extra_flags}`  | zero or more placement tokens (standalone token)    |
//! | `{app}`          | the application command, split into tokens (standalone) |
//!
//! Optional placeholders, usable in the template and inside the application
//! command: `{ranks_per_node}`, `{threads}`, `{distribution}`, `{label}`.
//! Literal braces are written `{{` and `}}`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "OMP_NUM_THREADS";

const REQUIRED: [&str; 4] = ["{nodes}", "{total_ranks}", "{extra_flags}", "{app}"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandTemplate {
    pub template: String,
    pub app: String,
}

impl Default for CommandTemplate {
    fn default() -> Self {
        CommandTemplate {
            template: "srun -N {nodes} -n {total_ranks} {extra_flags} {app}".into(),
            app: "./app".into(),
        }
    }
}

impl CommandTemplate {
    pub fn new(template: impl Into<String>, app: impl Into<String>) -> Result<Self> {
        let t = CommandTemplate {
            template: template.into(),
            app: app.into(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for p in REQUIRED {
            if !self.template.contains(p) {
                return Err(Error::Template(format!("template lacks placeholder {p}")));
            }
        }
        let tokens = split_command(&self.template)?;
        for standalone in ["{extra_flags}", "{app}"] {
            if tokens.iter().any(|t| t.contains(standalone) && t != standalone) {
                return Err(Error::Template(format!(
                    "{standalone} must be a separate token"
                )));
            }
        }
        if split_command(&self.app)?.is_empty() {
            return Err(Error::Template("application command is empty".into()));
        }
        Ok(())
    }
}

/// A fully resolved command for one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunchSpec {
    pub argv: Vec<String>,
    pub env: Vec<(String, String)>,
    pub expected_log: PathBuf,
}

impl LaunchSpec {
    /// Shell-style rendering, e.g. for dry runs.
    pub fn display_line(&self) -> String {
        let mut parts: Vec<String> = self
            .env
            .iter()
            .map(|(k, v)| format!("{k}={}", quote(v)))
            .collect();
        parts.extend(self.argv.iter().map(|a| quote(a)));
        parts.join(" ")
    }
}

fn quote(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_./=:,+@%{}".contains(c))
    {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// Placement tokens contributed by a configuration.
pub fn extra_flags(config: &RunConfig) -> Vec<String> {
    let mut flags = Vec::new();
    if let Some(flag) = config.distribution.launcher_flag() {
        flags.push(flag.to_string());
    }
    if let Some(k) = config.cores_per_socket_bind {
        flags.push(format!("--cores-per-socket={k}"));
    }
    flags
}

fn substitute(token: &str, config: &RunConfig) -> Result<String> {
    let mut out = String::with_capacity(token.len());
    let mut rest = token;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start].replace("}}", "}"));
        let after = &rest[start..];
        if let Some(tail) = after.strip_prefix("{{") {
            out.push('{');
            rest = tail;
            continue;
        }
        let Some(end) = after.find('}') else {
            return Err(Error::Template(format!("unterminated placeholder in `{token}`")));
        };
        let name = &after[1..end];
        let value = match name {
            "nodes" => config.nodes.to_string(),
            "total_ranks" => config.total_ranks().to_string(),
            "ranks_per_node" => config.ranks_per_node.to_string(),
            "threads" => config.threads_per_rank.to_string(),
            "distribution" => config.distribution.to_string(),
            "label" => config.label.clone(),
            other => {
                return Err(Error::Template(format!("unknown placeholder {{{other}}}")));
            }
        };
        out.push_str(&value);
        rest = &after[end + 1..];
    }
    out.push_str(&rest.replace("}}", "}"));
    Ok(out)
}

/// Resolve `template` for `config`.
pub fn build_launch_command(config: &RunConfig, template: &CommandTemplate) -> Result<LaunchSpec> {
    template.validate()?;
    let app = config.app.as_deref().unwrap_or(&template.app);
    let mut argv = Vec::new();
    for token in split_command(&template.template)? {
        match token.as_str() {
            "{extra_flags}" => argv.extend(extra_flags(config)),
            "{app}" => {
                for t in split_command(app)? {
                    argv.push(substitute(&t, config)?);
                }
            }
            _ => argv.push(substitute(&token, config)?),
        }
    }
    if argv.is_empty() {
        return Err(Error::Template("template produced an empty command".into()));
    }
    Ok(LaunchSpec {
        argv,
        env: vec![(THREADS_ENV.to_string(), config.threads_per_rank.to_string())],
        expected_log: PathBuf::from(format!("{}.log", config.label)),
    })
}

/// Split a command line on whitespace, honouring single and double quotes.
pub fn split_command(line: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_token = false;
    let mut quote: Option<char> = None;
    for c in line.chars() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => current.push(c),
            None if c == '\'' || c == '"' => {
                quote = Some(c);
                in_token = true;
            }
            None if c.is_whitespace() => {
                if in_token {
                    tokens.push(std::mem::take(&mut current));
                    in_token = false;
                }
            }
            None => {
                current.push(c);
                in_token = true;
            }
        }
    }
    if quote.is_some() {
        return Err(Error::Template(format!("unbalanced quote in `{line}`")));
    }
    if in_token {
        tokens.push(current);
    }
    Ok(tokens)
}
