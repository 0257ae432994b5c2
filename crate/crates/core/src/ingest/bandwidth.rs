use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::csv::{expect_header, next_line};
use crate::error::{Error, Result};

pub const BANDWIDTH_HEADER: &str = "setting,bandwidth_mbytes_per_s,total_runtime_s,node_label";

/// One memory-bandwidth measurement with the run's total runtime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthRecord {
    pub setting: String,
    /// MBytes/s.
    pub bandwidth: f64,
    /// Seconds.
    pub total_runtime: f64,
    pub node_label: String,
}

fn positive(field: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what} `{field}` is not a number"),
    })?;
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Validation(format!(
            "line {line}: {what} must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

pub fn parse_bandwidth_csv<R: BufRead>(mut reader: R) -> Result<Vec<BandwidthRecord>> {
    let mut buf = Vec::new();
    expect_header(&mut reader, &mut buf, BANDWIDTH_HEADER)?;
    let mut records = Vec::new();
    let mut line_no = 1;
    loop {
        line_no += 1;
        let Some(line) = next_line(&mut reader, &mut buf, line_no)? else {
            break;
        };
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [setting, bandwidth, runtime, node] = fields[..] else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        };
        let setting = setting.trim();
        if setting.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty setting label".into(),
            });
        }
        records.push(BandwidthRecord {
            setting: setting.to_string(),
            bandwidth: positive(bandwidth, "bandwidth", line_no)?,
            total_runtime: positive(runtime, "total runtime", line_no)?,
            node_label: node.trim().to_string(),
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyExtraction);
    }
    Ok(records)
}
