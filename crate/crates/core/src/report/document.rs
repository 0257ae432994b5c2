use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::plot::PlotKind;
use super::table::{render_table, RenderOptions, Table};
use crate::error::{Error, Result};
use crate::ingest::TimingSeries;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: impl Into<String>, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub generated_unix: u64,
    pub inputs: Vec<InputDigest>,
}

impl Metadata {
    pub fn now(inputs: Vec<InputDigest>) -> Self {
        Metadata {
            tool_version: TOOL_VERSION.to_string(),
            generated_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            inputs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Section {
    Table(Table),
    Plot { kind: PlotKind, path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub title: String,
    pub sections: Vec<Section>,
    pub metadata: Metadata,
}

impl ReportDocument {
    pub fn validate(&self) -> Result<()> {
        for s in &self.sections {
            if let Section::Table(t) = s {
                t.validate()?;
            }
        }
        Ok(())
    }

    /// Body text only; metadata is kept out so output is reproducible.
    pub fn render(&self, opts: &RenderOptions) -> Result<String> {
        let mut out = format!("# {}\n", self.title);
        for s in &self.sections {
            out.push('\n');
            match s {
                Section::Table(t) => {
                    if let Some(title) = &t.title {
                        out.push_str(&format!("## {title}\n\n"));
                    }
                    out.push_str(&render_table(t, opts)?);
                }
                Section::Plot { kind, path } => {
                    let kind = serde_json::to_value(kind)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default();
                    out.push_str(&format!("Plot data ({kind}): {}\n", path.display()));
                }
            }
        }
        Ok(out)
    }
}

pub const SERIES_SCHEMA: u32 = 1;

/// Normalized series file written by `ingest`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub schema: u32,
    pub series: TimingSeries,
    pub input: InputDigest,
    pub tool_version: String,
}

impl SeriesDocument {
    pub fn new(series: TimingSeries, input: InputDigest) -> Self {
        SeriesDocument {
            schema: SERIES_SCHEMA,
            series,
            input,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if doc.schema != SERIES_SCHEMA {
            return Err(Error::Config(format!("unsupported series schema {}", doc.schema)));
        }
        doc.series.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series documents always serialize") + "\n"
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
