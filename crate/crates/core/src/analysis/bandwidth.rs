use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::BandwidthRecord;

/// Statistics of one setting on one node type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingStats {
    pub setting: String,
    pub node_label: String,
    pub count: usize,
    pub best_bandwidth: f64,
    pub mean_bandwidth: f64,
    pub best_runtime: f64,
    pub mean_runtime: f64,
    /// Indices into the input records.
    pub records: Vec<usize>,
    pub best_bandwidth_record: usize,
    pub best_runtime_record: usize,
}

impl SettingStats {
    /// `setting@node_label`.
    pub fn key(&self) -> String {
        format!("{}@{}", self.setting, self.node_label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingRatio {
    pub a: String,
    pub b: String,
    /// Best bandwidth of A over best bandwidth of B.
    pub bandwidth_ratio: f64,
    /// Best runtime of B over best runtime of A.
    pub runtime_speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthReport {
    /// In order of first appearance.
    pub settings: Vec<SettingStats>,
    pub ratios: Vec<SettingRatio>,
}

impl BandwidthReport {
    /// Resolve `name` or `name@node`. A bare name must be unambiguous.
    pub fn lookup(&self, name: &str) -> Result<&SettingStats> {
        if let Some(s) = self.settings.iter().find(|s| s.key() == name) {
            return Ok(s);
        }
        let matches: Vec<&SettingStats> = self.settings.iter().filter(|s| s.setting == name).collect();
        match matches.as_slice() {
            [one] => Ok(one),
            [] => Err(Error::Lookup(format!("no bandwidth records for setting `{name}`"))),
            many => Err(Error::Lookup(format!(
                "setting `{name}` is ambiguous; use one of {}",
                many.iter().map(|s| s.key()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

/// Per-setting best/mean figures and cross-setting ratios.
///
/// Best bandwidth and best runtime are selected independently; they need
/// not come from the same record.
pub fn bandwidth_report(records: &[BandwidthRecord], pairs: &[(String, String)]) -> Result<BandwidthReport> {
    let mut settings: Vec<SettingStats> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match settings
            .iter_mut()
            .find(|s| s.setting == r.setting && s.node_label == r.node_label)
        {
            Some(s) => s.records.push(i),
            None => settings.push(SettingStats {
                setting: r.setting.clone(),
                node_label: r.node_label.clone(),
                count: 0,
                best_bandwidth: 0.0,
                mean_bandwidth: 0.0,
                best_runtime: 0.0,
                mean_runtime: 0.0,
                records: vec![i],
                best_bandwidth_record: i,
                best_runtime_record: i,
            }),
        }
    }
    for s in &mut settings {
        s.count = s.records.len();
        let n = s.count as f64;
        s.mean_bandwidth = s.records.iter().map(|&i| records[i].bandwidth).sum::<f64>() / n;
        s.mean_runtime = s.records.iter().map(|&i| records[i].total_runtime).sum::<f64>() / n;
        for &i in &s.records {
            if records[i].bandwidth > records[s.best_bandwidth_record].bandwidth {
                s.best_bandwidth_record = i;
            }
            if records[i].total_runtime < records[s.best_runtime_record].total_runtime {
                s.best_runtime_record = i;
            }
        }
        s.best_bandwidth = records[s.best_bandwidth_record].bandwidth;
        s.best_runtime = records[s.best_runtime_record].total_runtime;
    }

    let mut report = BandwidthReport {
        settings,
        ratios: Vec::new(),
    };
    let mut ratios = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let sa = report.lookup(a)?;
        let sb = report.lookup(b)?;
        ratios.push(SettingRatio {
            a: sa.key(),
            b: sb.key(),
            bandwidth_ratio: sa.best_bandwidth / sb.best_bandwidth,
            runtime_speedup: sb.best_runtime / sa.best_runtime,
        });
    }
    report.ratios = ratios;
    Ok(report)
}
