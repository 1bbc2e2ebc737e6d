//! Optional JSON configuration. Command-line flags override every field.

use std::path::Path;

use bitchaos::generators::GlibcExtraction;
use serde::Deserialize;

use crate::error::CliError;
use crate::format::BitFormat;
use crate::manifest::{read_json, SCHEMA_VERSION};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Config {
    pub schema_version: Option<u32>,
    pub master_seed: Option<String>,
    pub sequences: Option<usize>,
    pub length: Option<usize>,
    pub alpha: Option<f64>,
    pub floor: Option<f64>,
    pub jobs: Option<usize>,
    pub format: Option<BitFormat>,
    pub extraction: Option<GlibcExtraction>,
    pub workdir: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let config: Config = read_json(path)?;
        match config.schema_version {
            Some(v) if v != SCHEMA_VERSION => Err(CliError::Usage(format!(
                "{}: schemaVersion {v} not supported (expected {SCHEMA_VERSION})",
                path.display()
            ))),
            _ => Ok(config),
        }
    }
}
