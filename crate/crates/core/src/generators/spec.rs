//! Serializable description of any supported generator together with its
//! seed, and the reference seeds derived from a master seed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    derive_seed, BitSource, DynamicalGenerator, GlibcExtraction, GlibcLcg, Lfsr32, RawLogistic, SeedError, SeedFile,
    SplitMix64, SplitMixBits, DEFAULT_GAMMA_COUNT, DEFAULT_K_MAX, DEFAULT_K_MIN,
};
use crate::fxp::{parse_raw, FxFormat, FxWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Dynamical,
    Logistic32,
    Logistic64,
    Lfsr32,
    Glibc,
    Splitmix,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::Dynamical,
        GeneratorKind::Logistic32,
        GeneratorKind::Logistic64,
        GeneratorKind::Lfsr32,
        GeneratorKind::Glibc,
        GeneratorKind::Splitmix,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Dynamical => "dynamical",
            GeneratorKind::Logistic32 => "logistic32",
            GeneratorKind::Logistic64 => "logistic64",
            GeneratorKind::Lfsr32 => "lfsr32",
            GeneratorKind::Glibc => "glibc",
            GeneratorKind::Splitmix => "splitmix",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown generator {s:?}"))
    }
}

/// A generator and everything needed to reproduce its output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "lowercase",
    rename_all_fields = "camelCase",
    deny_unknown_fields
)]
pub enum GeneratorSpec {
    Dynamical {
        seed: SeedFile,
    },
    Logistic {
        word_length: u32,
        x0: String,
        gamma: String,
    },
    Lfsr32 {
        seed: u32,
    },
    Glibc {
        seed: u32,
        extraction: GlibcExtraction,
    },
    Splitmix {
        seed: String,
    },
}

impl GeneratorSpec {
    /// Reference seed for `kind`, derived from `master`.
    ///
    /// The dynamical generator uses the full derivation (32 bits, 8 gammas,
    /// `k` in [9, 11]); the raw maps use the same derivation with a single
    /// gamma; the LFSR and glibc LCG take the first nonzero 32-bit and 31-bit
    /// splitmix64 draws; the splitmix source is seeded with `master` itself.
    pub fn reference(kind: GeneratorKind, master: u64) -> Result<Self, SeedError> {
        Ok(match kind {
            GeneratorKind::Dynamical => GeneratorSpec::Dynamical {
                seed: derive_seed(master, 32, DEFAULT_GAMMA_COUNT, DEFAULT_K_MIN, DEFAULT_K_MAX)?.to_file(),
            },
            GeneratorKind::Logistic32 | GeneratorKind::Logistic64 => {
                let n = if kind == GeneratorKind::Logistic32 { 32 } else { 64 };
                let cfg = derive_seed(master, n, 1, DEFAULT_K_MIN, DEFAULT_K_MAX)?;
                GeneratorSpec::Logistic {
                    word_length: n,
                    x0: cfg.x0.to_hex(),
                    gamma: cfg.gammas[0].to_hex(),
                }
            }
            GeneratorKind::Lfsr32 => GeneratorSpec::Lfsr32 {
                seed: first_nonzero(master, 32),
            },
            GeneratorKind::Glibc => GeneratorSpec::Glibc {
                seed: first_nonzero(master, 31),
                extraction: GlibcExtraction::default(),
            },
            GeneratorKind::Splitmix => GeneratorSpec::Splitmix {
                seed: format!("{master:#x}"),
            },
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            GeneratorSpec::Dynamical { .. } => GeneratorKind::Dynamical,
            GeneratorSpec::Logistic { word_length: 32, .. } => GeneratorKind::Logistic32,
            GeneratorSpec::Logistic { .. } => GeneratorKind::Logistic64,
            GeneratorSpec::Lfsr32 { .. } => GeneratorKind::Lfsr32,
            GeneratorSpec::Glibc { .. } => GeneratorKind::Glibc,
            GeneratorSpec::Splitmix { .. } => GeneratorKind::Splitmix,
        }
    }

    /// Short human-readable seed description.
    pub fn seed_labels(&self) -> Vec<String> {
        match self {
            GeneratorSpec::Dynamical { seed } => match seed.resolve() {
                Ok(cfg) => {
                    let mut labels = vec![format!("x0={}", cfg.x0.to_hex())];
                    labels.extend(cfg.gammas.iter().map(|g| format!("gamma={}", g.to_hex())));
                    labels.push(format!("k=[{},{}]", cfg.k_min, cfg.k_max));
                    labels.push(format!("partitionSeed={}", cfg.partition_seed));
                    labels
                }
                Err(e) => vec![format!("invalid: {e}")],
            },
            GeneratorSpec::Logistic { x0, gamma, .. } => vec![format!("x0={x0}"), format!("gamma={gamma}")],
            GeneratorSpec::Lfsr32 { seed } => vec![format!("seed={seed:#x}")],
            GeneratorSpec::Glibc { seed, extraction } => {
                vec![format!("seed={seed}"), format!("extraction={}", extraction.name())]
            }
            GeneratorSpec::Splitmix { seed } => vec![format!("seed={seed}")],
        }
    }

    pub fn build(&self) -> Result<Box<dyn BitSource + Send>, SeedError> {
        Ok(match self {
            GeneratorSpec::Dynamical { seed } => Box::new(DynamicalGenerator::new(seed.resolve()?)?),
            GeneratorSpec::Logistic { word_length, x0, gamma } => {
                let x0 = parse_word(x0, FxFormat::state(*word_length)?, "x0")?;
                let gamma = parse_word(gamma, FxFormat::gamma(*word_length)?, "gamma")?;
                Box::new(RawLogistic::new(x0, gamma)?)
            }
            GeneratorSpec::Lfsr32 { seed } => Box::new(Lfsr32::new(*seed)?),
            GeneratorSpec::Glibc { seed, extraction } => Box::new(GlibcLcg::new(*seed, *extraction)?),
            GeneratorSpec::Splitmix { seed } => {
                let seed = parse_raw(seed).ok_or_else(|| SeedError::Field {
                    field: "seed",
                    reason: format!("cannot parse {seed:?}"),
                })?;
                Box::new(SplitMixBits::new(seed))
            }
        })
    }
}

fn parse_word(text: &str, format: FxFormat, field: &'static str) -> Result<FxWord, SeedError> {
    let raw = parse_raw(text).ok_or_else(|| SeedError::Field {
        field,
        reason: format!("cannot parse {text:?}"),
    })?;
    Ok(FxWord::from_raw(raw, format)?)
}

/// Top `bits` bits of the first nonzero splitmix64 draw.
fn first_nonzero(master: u64, bits: u32) -> u32 {
    let mut sm = SplitMix64::new(master);
    loop {
        let v = (sm.next_u64() >> (64 - bits)) as u32;
        if v != 0 {
            return v;
        }
    }
}
