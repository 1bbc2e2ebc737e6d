//! Seed configuration for the dynamical generator, its JSON file schema, and
//! deterministic derivation from a 64-bit master seed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SplitMix64;
use crate::fxp::{parse_raw, FxError, FxFormat, FxWord};
use crate::maps::chaotic_range;

/// Master seed behind every documented reference configuration.
pub const REFERENCE_MASTER_SEED: u64 = 0x1234_5678_9ABC_DEF0;

pub const DEFAULT_GAMMA_COUNT: usize = 8;
pub const DEFAULT_K_MIN: u32 = 9;
pub const DEFAULT_K_MAX: u32 = 11;

const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeedError {
    #[error(transparent)]
    Format(#[from] FxError),
    #[error("x0: initial state must be nonzero")]
    X0Zero,
    #[error("gammas: at least one parameter is required")]
    NoGammas,
    #[error("gammas[{index}]: {raw:#x} outside the chaotic range [{g_min:#x}, {g_max:#x}]")]
    GammaOutOfRange {
        index: usize,
        raw: u64,
        g_min: u64,
        g_max: u64,
    },
    #[error("kMin/kMax: need 1 <= kMin <= kMax, got [{k_min}, {k_max}]")]
    KRange { k_min: u32, k_max: u32 },
    #[error("partitionSeed: {0} must be in [1, 2^31)")]
    PartitionSeed(u64),
    #[error("lfsr seed: register state must be nonzero")]
    LfsrZero,
    #[error("glibc seed: {0} must be below 2^31")]
    GlibcSeed(u64),
    #[error("{field}: {reason}")]
    Field { field: &'static str, reason: String },
}

/// Full seed of the dynamical generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedConfig {
    pub word_length: u32,
    pub x0: FxWord,
    pub gammas: Vec<FxWord>,
    pub k_min: u32,
    pub k_max: u32,
    pub partition_seed: u32,
}

impl SeedConfig {
    pub fn m(&self) -> usize {
        self.gammas.len()
    }

    pub fn validate(&self) -> Result<(), SeedError> {
        let state = FxFormat::state(self.word_length)?;
        let gamma = FxFormat::gamma(self.word_length)?;
        if self.x0.format() != state {
            return Err(SeedError::Field {
                field: "x0",
                reason: format!("expected {state}, got {}", self.x0.format()),
            });
        }
        if self.x0.is_zero() {
            return Err(SeedError::X0Zero);
        }
        if self.gammas.is_empty() {
            return Err(SeedError::NoGammas);
        }
        let range = chaotic_range(self.word_length)?;
        for (index, g) in self.gammas.iter().enumerate() {
            if g.format() != gamma || !range.contains(g) {
                return Err(SeedError::GammaOutOfRange {
                    index,
                    raw: g.raw(),
                    g_min: range.g_min,
                    g_max: range.g_max,
                });
            }
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(SeedError::KRange {
                k_min: self.k_min,
                k_max: self.k_max,
            });
        }
        if self.partition_seed == 0 || self.partition_seed >= 1 << 31 {
            return Err(SeedError::PartitionSeed(self.partition_seed as u64));
        }
        Ok(())
    }

    pub fn to_file(&self) -> SeedFile {
        SeedFile {
            word_length: Some(self.word_length),
            x0: Some(self.x0.to_hex()),
            gammas: Some(self.gammas.iter().map(FxWord::to_hex).collect()),
            k_min: Some(self.k_min),
            k_max: Some(self.k_max),
            partition_seed: Some(self.partition_seed as u64),
            ..SeedFile::default()
        }
    }
}

/// Expands `master` through splitmix64 into a complete, valid seed.
///
/// Draw order: `x0` (top `n` bits, first nonzero), then one draw per gamma
/// reduced into the chaotic range, then the partition seed (top 31 bits,
/// first nonzero).
pub fn derive_seed(master: u64, n: u32, m: usize, k_min: u32, k_max: u32) -> Result<SeedConfig, SeedError> {
    let state = FxFormat::state(n)?;
    let gamma = FxFormat::gamma(n)?;
    let range = chaotic_range(n)?;
    if m == 0 {
        return Err(SeedError::NoGammas);
    }
    let mut sm = SplitMix64::new(master);
    let x0 = first_nonzero(&mut sm, |d| d >> (64 - n));
    let gammas = (0..m)
        .map(|_| {
            let raw = range.g_min + sm.next_u64() % range.width();
            FxWord::from_raw(raw, gamma)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let partition_seed = first_nonzero(&mut sm, |d| d >> 33) as u32;
    let cfg = SeedConfig {
        word_length: n,
        x0: FxWord::from_raw(x0, state)?,
        gammas,
        k_min,
        k_max,
        partition_seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn first_nonzero(sm: &mut SplitMix64, reduce: impl Fn(u64) -> u64) -> u64 {
    for _ in 0..MAX_REJECTIONS {
        let v = reduce(sm.next_u64());
        if v != 0 {
            return v;
        }
    }
    panic!("splitmix64 produced {MAX_REJECTIONS} zero draws in a row");
}

/// JSON seed file. Either the explicit fields or `masterSeed` (plus optional
/// shape overrides) must be present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SeedFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_length: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<String>,
    /// Number of gammas when deriving from `masterSeed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl SeedFile {
    pub fn resolve(&self) -> Result<SeedConfig, SeedError> {
        let n = self.word_length.unwrap_or(32);
        let k_min = self.k_min.unwrap_or(DEFAULT_K_MIN);
        let k_max = self.k_max.unwrap_or(DEFAULT_K_MAX);
        if let Some(master) = &self.master_seed {
            if self.x0.is_some() || self.gammas.is_some() || self.partition_seed.is_some() {
                return Err(SeedError::Field {
                    field: "masterSeed",
                    reason: "cannot be combined with explicit x0/gammas/partitionSeed".into(),
                });
            }
            let master = parse_raw(master).ok_or_else(|| SeedError::Field {
                field: "masterSeed",
                reason: format!("cannot parse {master:?}"),
            })?;
            return derive_seed(master, n, self.m.unwrap_or(DEFAULT_GAMMA_COUNT), k_min, k_max);
        }
        let state = FxFormat::state(n)?;
        let gamma = FxFormat::gamma(n)?;
        let x0 = self.x0.as_deref().ok_or(SeedError::Field {
            field: "x0",
            reason: "missing".into(),
        })?;
        let x0 = parse_word(x0, state, "x0")?;
        let gammas = self
            .gammas
            .as_ref()
            .ok_or(SeedError::Field {
                field: "gammas",
                reason: "missing".into(),
            })?
            .iter()
            .map(|g| parse_word(g, gamma, "gammas"))
            .collect::<Result<Vec<_>, _>>()?;
        let partition_seed = self.partition_seed.ok_or(SeedError::Field {
            field: "partitionSeed",
            reason: "missing".into(),
        })?;
        if partition_seed == 0 || partition_seed >= 1 << 31 {
            return Err(SeedError::PartitionSeed(partition_seed));
        }
        let cfg = SeedConfig {
            word_length: n,
            x0,
            gammas,
            k_min,
            k_max,
            partition_seed: partition_seed as u32,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_word(text: &str, format: FxFormat, field: &'static str) -> Result<FxWord, SeedError> {
    let raw = parse_raw(text).ok_or_else(|| SeedError::Field {
        field,
        reason: format!("cannot parse {text:?}"),
    })?;
    FxWord::from_raw(raw, format).map_err(|e| SeedError::Field {
        field,
        reason: e.to_string(),
    })
}
