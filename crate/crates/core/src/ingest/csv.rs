use std::io::BufRead;

use super::{Step, TimingSeries};
use crate::error::{Error, Result};

pub const STEP_HEADER: &str = "step,seconds";

/// Read one line as UTF-8 without the trailing LF / CRLF.
pub(crate) fn next_line<R: BufRead>(
    reader: &mut R,
    buf: &mut Vec<u8>,
    line_no: usize,
) -> Result<Option<String>> {
    buf.clear();
    let read = reader
        .read_until(b'\n', buf)
        .map_err(|e| Error::io("<input>", e))?;
    if read == 0 {
        return Ok(None);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
    }
    if buf.last() == Some(&b'\r') {
        buf.pop();
    }
    let text = std::str::from_utf8(buf).map_err(|_| Error::Parse {
        line: line_no,
        message: "invalid UTF-8".into(),
    })?;
    let text = if line_no == 1 {
        text.trim_start_matches('\u{feff}')
    } else {
        text
    };
    Ok(Some(text.to_string()))
}

pub(crate) fn expect_header<R: BufRead>(reader: &mut R, buf: &mut Vec<u8>, header: &str) -> Result<()> {
    match next_line(reader, buf, 1)? {
        Some(h) if h.trim() == header => Ok(()),
        Some(h) => Err(Error::Parse {
            line: 1,
            message: format!("expected header `{header}`, found `{h}`"),
        }),
        None => Err(Error::Parse {
            line: 1,
            message: format!("empty input; expected header `{header}`"),
        }),
    }
}

pub(crate) fn parse_duration(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{field}` is not a number"),
    })?;
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Validation(format!(
            "line {line}: duration must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

pub(crate) fn parse_index(field: &str, line: usize) -> Result<u64> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{field}` is not a non-negative integer step index"),
    })
}

/// Append a step, rejecting duplicate or decreasing indices.
pub(crate) fn push_step(steps: &mut Vec<Step>, step: Step, line: usize) -> Result<()> {
    if let Some(prev) = steps.last() {
        if step.index <= prev.index {
            let what = if step.index == prev.index {
                "duplicate"
            } else {
                "decreasing"
            };
            return Err(Error::Structural(format!(
                "line {line}: {what} step index {} after {}",
                step.index, prev.index
            )));
        }
    }
    steps.push(step);
    Ok(())
}

/// Parse a `step,seconds` CSV. `label` becomes both run id and source.
pub fn parse_step_csv<R: BufRead>(mut reader: R, label: &str) -> Result<TimingSeries> {
    let mut buf = Vec::new();
    expect_header(&mut reader, &mut buf, STEP_HEADER)?;
    let mut steps = Vec::new();
    let mut line_no = 1;
    loop {
        line_no += 1;
        let Some(line) = next_line(&mut reader, &mut buf, line_no)? else {
            break;
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(step), Some(seconds), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 fields, found `{line}`"),
            });
        };
        let index = parse_index(step, line_no)?;
        let seconds = parse_duration(seconds, line_no)?;
        push_step(&mut steps, Step { index, seconds }, line_no)?;
    }
    if steps.is_empty() {
        return Err(Error::EmptyExtraction);
    }
    TimingSeries::new(label, label, steps)
}
