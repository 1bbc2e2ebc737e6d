//! The `1103515245 * s + 12345 mod 2^31` congruential generator, used both
//! as the switching-interval source and as the glibc baseline.

use serde::{Deserialize, Serialize};

use super::{BitSource, SeedError};

pub const LCG_MULTIPLIER: u64 = 1_103_515_245;
pub const LCG_INCREMENT: u64 = 12_345;
pub const LCG_MODULUS: u64 = 1 << 31;

#[inline]
fn lcg_step(state: u32) -> u32 {
    ((LCG_MULTIPLIER * state as u64 + LCG_INCREMENT) % LCG_MODULUS) as u32
}

/// Source of the switching intervals `k_i`.
///
/// The state may pass through zero during the (full, 2^31) period; only the
/// seed is required to be nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionLcg {
    state: u32,
}

impl PartitionLcg {
    pub fn new(seed: u32) -> Result<Self, SeedError> {
        if seed == 0 || seed as u64 >= LCG_MODULUS {
            return Err(SeedError::PartitionSeed(seed as u64));
        }
        Ok(Self { state: seed })
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    /// Advances and returns the new 31-bit state.
    #[inline]
    pub fn next_output(&mut self) -> u32 {
        self.state = lcg_step(self.state);
        self.state
    }
}

/// `k_min + ((output >> 16) mod (k_max - k_min + 1))`.
#[inline]
pub fn draw_k(lcg: &mut PartitionLcg, k_min: u32, k_max: u32) -> u32 {
    debug_assert!(k_min <= k_max);
    let span = k_max - k_min + 1;
    k_min + (lcg.next_output() >> 16) % span
}

/// Which bits of each glibc LCG state are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlibcExtraction {
    /// All 31 state bits, most significant first.
    #[default]
    All31,
    /// Bit 0 only (period 2).
    Lsb,
    /// Bit 30 only.
    Bit30,
}

impl GlibcExtraction {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "all31" => Some(Self::All31),
            "lsb" => Some(Self::Lsb),
            "bit30" => Some(Self::Bit30),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::All31 => "all31",
            Self::Lsb => "lsb",
            Self::Bit30 => "bit30",
        }
    }
}

/// The `TYPE_0` glibc `rand()` recurrence.
#[derive(Debug, Clone)]
pub struct GlibcLcg {
    seed: u32,
    state: u32,
    mode: GlibcExtraction,
    pending: u32,
    left: u32,
}

impl GlibcLcg {
    pub fn new(seed: u32, mode: GlibcExtraction) -> Result<Self, SeedError> {
        if seed as u64 >= LCG_MODULUS {
            return Err(SeedError::GlibcSeed(seed as u64));
        }
        Ok(Self {
            seed,
            state: seed,
            mode,
            pending: 0,
            left: 0,
        })
    }

    pub fn mode(&self) -> GlibcExtraction {
        self.mode
    }

    /// One recurrence step; returns the new state, whose 31 bits are the
    /// output word.
    pub fn next_bits(&mut self) -> u32 {
        self.state = lcg_step(self.state);
        self.state
    }
}

impl BitSource for GlibcLcg {
    #[inline]
    fn next_bit(&mut self) -> bool {
        match self.mode {
            GlibcExtraction::All31 => {
                if self.left == 0 {
                    self.pending = self.next_bits();
                    self.left = 31;
                }
                self.left -= 1;
                (self.pending >> self.left) & 1 == 1
            }
            GlibcExtraction::Lsb => self.next_bits() & 1 == 1,
            GlibcExtraction::Bit30 => (self.next_bits() >> 30) & 1 == 1,
        }
    }

    fn reset(&mut self) {
        self.state = self.seed;
        self.left = 0;
    }
}
