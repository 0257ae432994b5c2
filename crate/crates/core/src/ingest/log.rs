use std::io::BufRead;

use regex::Regex;

use super::csv::{next_line, parse_duration, parse_index, push_step};
use super::{Step, TimingSeries};
use crate::error::{Error, Result};

/// A line pattern with named captures `step` and `seconds`.
///
/// Uses the `regex` crate syntax; for example
/// `STEP (?<step>\d+) TIME (?<seconds>[0-9.]+)`. The pattern is matched
/// anywhere in a line; lines that do not match are skipped.
#[derive(Debug, Clone)]
pub struct StepPattern(Regex);

impl StepPattern {
    pub fn new(pattern: &str) -> Result<Self> {
        let re = Regex::new(pattern)
            .map_err(|e| Error::Config(format!("invalid step pattern: {e}")))?;
        for name in ["step", "seconds"] {
            if !re.capture_names().flatten().any(|n| n == name) {
                return Err(Error::Config(format!(
                    "step pattern lacks the named capture `{name}`"
                )));
            }
        }
        Ok(StepPattern(re))
    }

    pub fn as_str(&self) -> &str {
        self.0.as_str()
    }
}

impl std::str::FromStr for StepPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StepPattern::new(s)
    }
}

/// Extract steps from a free-form log.
pub fn parse_step_log<R: BufRead>(
    mut reader: R,
    pattern: &StepPattern,
    label: &str,
) -> Result<TimingSeries> {
    let mut buf = Vec::new();
    let mut steps = Vec::new();
    let mut line_no = 0;
    loop {
        line_no += 1;
        let line = match next_line(&mut reader, &mut buf, line_no) {
            Ok(Some(line)) => line,
            Ok(None) => break,
            // Binary noise in a log is skipped like any other non-matching line.
            Err(Error::Parse { .. }) => continue,
            Err(e) => return Err(e),
        };
        let Some(caps) = pattern.0.captures(&line) else {
            continue;
        };
        let index = parse_index(&caps["step"], line_no)?;
        let seconds = parse_duration(&caps["seconds"], line_no)?;
        push_step(&mut steps, Step { index, seconds }, line_no)?;
    }
    if steps.is_empty() {
        return Err(Error::EmptyExtraction);
    }
    TimingSeries::new(label, label, steps)
}
