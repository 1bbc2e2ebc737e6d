//! Run manifests and the report envelope.
//!
//! Every report is written as `{"manifest": ..., "report": ...}`. The
//! manifest's `request` alone determines the report body; timing, worker count
//! and warnings are recorded beside it and never feed into the body.

use std::fs;
use std::path::Path;

use bitchaos::generators::{GeneratorSpec, GlibcExtraction};
use bitchaos::sts::SuiteParams;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::CliError;
use crate::format::{BitFormat, FORMAT_VERSION};
use crate::reproduce::{Protocol, Target};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything that determines a command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase", rename_all_fields = "camelCase")]
pub enum Request {
    Gen {
        generator: GeneratorSpec,
        bits: usize,
        format: BitFormat,
    },
    Nist {
        input: NistInput,
        sequences: usize,
        length: usize,
        alpha: f64,
        floor: f64,
        params: SuiteParams,
    },
    Period {
        word_length: u32,
        trials: usize,
        master_seed: String,
    },
    Reproduce {
        target: Target,
        protocol: Protocol,
        extraction: GlibcExtraction,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", rename_all_fields = "camelCase")]
pub enum NistInput {
    Generator {
        generator: GeneratorSpec,
    },
    /// Files are concatenated in order and cut into consecutive sequences.
    Files {
        paths: Vec<String>,
        format: BitFormat,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub schema_version: u32,
    pub format_version: u32,
    pub tool: String,
    pub request: Request,
    pub seeds: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunManifest {
    pub fn new(request: Request, seeds: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            format_version: FORMAT_VERSION,
            tool: concat!("bitchaos ", env!("CARGO_PKG_VERSION")).to_string(),
            request,
            seeds,
            outputs: Vec::new(),
            jobs: None,
            warnings: Vec::new(),
            timing: None,
        }
    }

    pub fn check_versions(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION || self.format_version != FORMAT_VERSION {
            return Err(CliError::Usage(format!(
                "manifest schema {} / format {} not supported (expected {SCHEMA_VERSION} / {FORMAT_VERSION})",
                self.schema_version, self.format_version
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub manifest: RunManifest,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::json(path, e))
}

/// The report body exactly as it appears in an envelope's JSON text.
pub fn report_text(envelope_json: &str) -> Result<String, serde_json::Error> {
    let raw: Envelope<Box<RawValue>> = serde_json::from_str(envelope_json)?;
    Ok(raw.report.get().to_string())
}

/// A file holding either a full envelope or a bare manifest.
#[derive(Debug, Clone)]
pub struct ManifestSource {
    pub manifest: RunManifest,
    /// Report body text, when the file is an envelope.
    pub report: Option<String>,
}

impl ManifestSource {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        #[derive(Deserialize)]
        struct Probe<'a> {
            #[serde(borrow)]
            manifest: Option<&'a RawValue>,
            #[serde(borrow)]
            report: Option<&'a RawValue>,
        }
        let probe: Probe = serde_json::from_str(text)?;
        Ok(match probe.manifest {
            Some(manifest) => Self {
                manifest: serde_json::from_str(manifest.get())?,
                report: probe.report.map(|r| r.get().to_string()),
            },
            None => Self {
                manifest: serde_json::from_str(text)?,
                report: None,
            },
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::json(path, e))
    }
}
