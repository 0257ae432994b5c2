use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::analysis::BandwidthReport;
use crate::error::{Error, Result};
use crate::ingest::BandwidthRecord;

pub const BANDWIDTH_DECIMALS: usize = 4;
pub const SECONDS_DECIMALS: usize = 2;
pub const DEFAULT_MARKER: &str = "*";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Text(String),
    Number { value: f64, decimals: usize },
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn number(value: f64, decimals: usize) -> Self {
        Cell::Number { value, decimals }
    }

    fn numeric(&self) -> Option<f64> {
        match self {
            Cell::Number { value, .. } => Some(*value),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number { value, decimals } => format!("{value:.decimals$}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// (row, column) of best-value cells.
    #[serde(default)]
    pub best: BTreeSet<(usize, usize)>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            title: None,
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            best: BTreeSet::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn mark_best(&mut self, row: usize, col: usize) {
        self.best.insert((row, col));
    }

    /// Mark the extreme numeric cell of `col` within each run of rows sharing
    /// the text of `group_col`; with `None` the whole column is one group.
    /// Ties mark every tied cell.
    pub fn mark_column_best(&mut self, col: usize, group_col: Option<usize>, extreme: Extreme) {
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let key = group_col
                .and_then(|g| row.get(g))
                .map(Cell::render)
                .unwrap_or_default();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, rows)) => rows.push(i),
                None => groups.push((key, vec![i])),
            }
        }
        for (_, rows) in groups {
            let values: Vec<(usize, f64)> = rows
                .iter()
                .filter_map(|&r| self.rows[r].get(col).and_then(Cell::numeric).map(|v| (r, v)))
                .collect();
            let target = match extreme {
                Extreme::Max => values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max),
                Extreme::Min => values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min),
            };
            for (r, v) in values {
                if v == target {
                    self.best.insert((r, col));
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.header.is_empty() {
            return Err(Error::Structural("table has no columns".into()));
        }
        if self.rows.is_empty() {
            return Err(Error::Structural("table has no rows".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(Error::Structural(format!(
                    "row {} has {} cells, header has {}",
                    i + 1,
                    row.len(),
                    self.header.len()
                )));
            }
        }
        if let Some(&(r, c)) = self
            .best
            .iter()
            .find(|&&(r, c)| r >= self.rows.len() || c >= self.header.len())
        {
            return Err(Error::Structural(format!("best-value marker at ({r}, {c}) is outside the table")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableStyle {
    #[default]
    Markdown,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub style: TableStyle,
    pub marker: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            style: TableStyle::Markdown,
            marker: DEFAULT_MARKER.to_string(),
        }
    }
}

/// Render a table as Markdown or padded plain text.
pub fn render_table(table: &Table, opts: &RenderOptions) -> Result<String> {
    table.validate()?;
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, cell)| {
                    let text = cell.render();
                    if table.best.contains(&(r, c)) {
                        format!("{}{text}", opts.marker)
                    } else {
                        text
                    }
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..table.header.len())
        .map(|c| {
            body.iter()
                .map(|row| row[c].chars().count())
                .chain(std::iter::once(table.header[c].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let numeric_col: Vec<bool> = (0..table.header.len())
        .map(|c| table.rows.iter().all(|row| row[c].numeric().is_some()))
        .collect();
    let pad = |text: &str, c: usize| {
        let fill = widths[c] - text.chars().count();
        if numeric_col[c] {
            format!("{}{text}", " ".repeat(fill))
        } else {
            format!("{text}{}", " ".repeat(fill))
        }
    };

    let mut out = String::new();
    match opts.style {
        TableStyle::Markdown => {
            let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
            out.push_str(&line(table.header.iter().enumerate().map(|(c, h)| pad(h, c)).collect()));
            out.push_str(&line(
                widths
                    .iter()
                    .enumerate()
                    .map(|(c, &w)| {
                        if numeric_col[c] {
                            format!("{}:", "-".repeat(w.max(2) - 1))
                        } else {
                            "-".repeat(w.max(1))
                        }
                    })
                    .collect(),
            ));
            for row in &body {
                out.push_str(&line(row.iter().enumerate().map(|(c, t)| pad(t, c)).collect()));
            }
        }
        TableStyle::Plain => {
            let line = |cells: Vec<String>| format!("{}\n", cells.join("  ").trim_end());
            out.push_str(&line(table.header.iter().enumerate().map(|(c, h)| pad(h, c)).collect()));
            out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect()));
            for row in &body {
                out.push_str(&line(row.iter().enumerate().map(|(c, t)| pad(t, c)).collect()));
            }
        }
    }
    Ok(out)
}

/// One row per record, best bandwidth and best runtime of each setting marked.
pub fn bandwidth_table(records: &[BandwidthRecord], report: &BandwidthReport) -> Table {
    let mut table = Table::new(["Setting", "Node", "Bandwidth (MBytes/s)", "Total Runtime (s)"]);
    let mut row_of = vec![0; records.len()];
    for stats in &report.settings {
        for &i in &stats.records {
            row_of[i] = table.rows.len();
            let r = &records[i];
            table.push_row(vec![
                Cell::text(&r.setting),
                Cell::text(&r.node_label),
                Cell::number(r.bandwidth, BANDWIDTH_DECIMALS),
                Cell::number(r.total_runtime, SECONDS_DECIMALS),
            ]);
        }
        table.mark_best(row_of[stats.best_bandwidth_record], 2);
        table.mark_best(row_of[stats.best_runtime_record], 3);
    }
    table
}

/// Cross-setting ratios.
pub fn ratio_table(report: &BandwidthReport) -> Table {
    let mut table = Table::new(["A", "B", "Bandwidth ratio A/B", "Runtime speedup B/A"]);
    for r in &report.ratios {
        table.push_row(vec![
            Cell::text(&r.a),
            Cell::text(&r.b),
            Cell::number(r.bandwidth_ratio, 4),
            Cell::number(r.runtime_speedup, 4),
        ]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cpu_table() -> Table {
        let mut t = Table::new(["Setting", "Bandwidth", "Runtime"]);
        for (bw, rt) in [(15961.8202, 16464.42), (16228.4178, 16450.08), (15978.3218, 16201.49)] {
            t.push_row(vec![Cell::text("12 ranks 2 threads"), Cell::number(bw, 4), Cell::number(rt, 2)]);
        }
        for (bw, rt) in [(8092.9993, 28883.01), (8054.4494, 29045.81), (8043.7417, 29035.68)] {
            t.push_row(vec![Cell::text("6 ranks 4 threads"), Cell::number(bw, 4), Cell::number(rt, 2)]);
        }
        t.mark_column_best(1, Some(0), Extreme::Max);
        t.mark_column_best(2, Some(0), Extreme::Min);
        t
    }

    #[test]
    fn bold_pattern_of_the_cpu_table() {
        let t = cpu_table();
        let expected: BTreeSet<(usize, usize)> = [(1, 1), (2, 2), (3, 1), (3, 2)].into_iter().collect();
        assert_eq!(t.best, expected);
        let text = render_table(&t, &RenderOptions::default()).unwrap();
        assert!(text.contains("*16228.4178"));
        assert!(text.contains("*16201.49"));
        assert!(!text.contains("*16450.08"));
    }

    #[test]
    fn deterministic_and_plain() {
        let t = cpu_table();
        let opts = RenderOptions {
            style: TableStyle::Plain,
            marker: "!".into(),
        };
        let a = render_table(&t, &opts).unwrap();
        assert_eq!(a, render_table(&t, &opts).unwrap());
        assert!(a.contains("!8092.9993"));
        assert!(!a.contains('|'));
    }

    #[test]
    fn ragged_and_empty() {
        let mut t = Table::new(["a", "b"]);
        assert!(matches!(render_table(&t, &RenderOptions::default()), Err(Error::Structural(_))));
        t.push_row(vec![Cell::text("x")]);
        assert!(matches!(render_table(&t, &RenderOptions::default()), Err(Error::Structural(_))));
    }

    #[test]
    fn out_of_range_marker() {
        let mut t = Table::new(["a"]);
        t.push_row(vec![Cell::number(1.0, 2)]);
        t.mark_best(3, 0);
        assert!(render_table(&t, &RenderOptions::default()).is_err());
    }

    #[test]
    fn single_cell_is_best() {
        let mut t = Table::new(["Runtime"]);
        t.push_row(vec![Cell::number(42.0, 2)]);
        t.mark_column_best(0, None, Extreme::Min);
        let text = render_table(&t, &RenderOptions::default()).unwrap();
        assert!(text.contains("*42.00"), "{text}");
    }
}
