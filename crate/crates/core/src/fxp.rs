//! Unsigned fixed-point words modelled on an integer multiplier datapath.
//!
//! Two Q-formats share one word length `n`:
//!
//! * [`FxRole::State`] is Q0.n and holds the map state in `[0, 1)`.
//! * [`FxRole::Gamma`] is Q2.(n-2) and holds the map parameter in `[0, 4)`.
//!
//! Both multiplies truncate (keep the high half of the exact double-width
//! product). Raw values are at most 64 bits wide, so every intermediate fits
//! in a `u128`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_WORD_LENGTH: u32 = 8;
pub const MAX_WORD_LENGTH: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FxError {
    #[error("word length {0} outside [8, 64]")]
    WordLength(u32),
    #[error("value {value} outside the representable range of {format}")]
    Range { value: f64, format: FxFormat },
    #[error("raw value {raw:#x} does not fit in {format}")]
    RawRange { raw: u128, format: FxFormat },
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FxRole {
    /// Q0.n
    State,
    /// Q2.(n-2)
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FxFormat {
    word_length: u32,
    role: FxRole,
}

impl FxFormat {
    pub fn new(word_length: u32, role: FxRole) -> Result<Self, FxError> {
        if !(MIN_WORD_LENGTH..=MAX_WORD_LENGTH).contains(&word_length) {
            return Err(FxError::WordLength(word_length));
        }
        Ok(Self { word_length, role })
    }

    pub fn state(word_length: u32) -> Result<Self, FxError> {
        Self::new(word_length, FxRole::State)
    }

    pub fn gamma(word_length: u32) -> Result<Self, FxError> {
        Self::new(word_length, FxRole::Gamma)
    }

    pub fn word_length(&self) -> u32 {
        self.word_length
    }

    pub fn role(&self) -> FxRole {
        self.role
    }

    pub fn fraction_bits(&self) -> u32 {
        match self.role {
            FxRole::State => self.word_length,
            FxRole::Gamma => self.word_length - 2,
        }
    }

    /// All-ones mask of `word_length` bits; also the largest raw value.
    pub fn mask(&self) -> u64 {
        word_mask(self.word_length)
    }
}

impl fmt::Display for FxFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            FxRole::State => write!(f, "Q0.{}", self.word_length),
            FxRole::Gamma => write!(f, "Q2.{}", self.word_length - 2),
        }
    }
}

pub(crate) fn word_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxWord {
    raw: u64,
    format: FxFormat,
}

impl FxWord {
    pub fn from_raw(raw: u64, format: FxFormat) -> Result<Self, FxError> {
        if raw > format.mask() {
            return Err(FxError::RawRange {
                raw: raw as u128,
                format,
            });
        }
        Ok(Self { raw, format })
    }

    /// Encodes `v` as `floor(v * 2^fraction_bits)`.
    ///
    /// The conversion is exact with respect to the `f64` value handed in.
    /// Decimal constants that must be exact (such as the chaotic lower bound)
    /// go through [`FxWord::from_ratio`] instead.
    pub fn encode_real(v: f64, format: FxFormat) -> Result<Self, FxError> {
        let limit = match format.role {
            FxRole::State => 1.0,
            FxRole::Gamma => 4.0,
        };
        if !v.is_finite() || !(0.0..limit).contains(&v) {
            return Err(FxError::Range { value: v, format });
        }
        // Scaling by a power of two is exact in binary floating point, so the
        // floor below is the floor of the exact product.
        let scaled = (v * 2f64.powi(format.fraction_bits() as i32)).floor();
        // `as u128` saturates; anything that lands on 2^n was a value within
        // half an ulp of the limit that f64 rounded up.
        let raw = scaled as u128;
        if raw > format.mask() as u128 {
            return Err(FxError::Range { value: v, format });
        }
        Ok(Self {
            raw: raw as u64,
            format,
        })
    }

    /// Encodes the rational `num / den` as `floor(num * 2^fraction_bits / den)`.
    pub fn from_ratio(num: u64, den: u64, format: FxFormat) -> Result<Self, FxError> {
        let raw = scaled_ratio(num, den, format.fraction_bits(), false)?;
        if raw > format.mask() as u128 {
            return Err(FxError::RawRange { raw, format });
        }
        Ok(Self {
            raw: raw as u64,
            format,
        })
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn format(&self) -> FxFormat {
        self.format
    }

    pub fn decode(&self) -> f64 {
        self.raw as f64 / 2f64.powi(self.format.fraction_bits() as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    /// `0x`-prefixed lowercase hexadecimal rendering of the raw value.
    pub fn to_hex(&self) -> String {
        format!("{:#x}", self.raw)
    }

    /// `(2^n - raw) mod 2^n`: exact `1 - x` for nonzero `x`, and `0` at zero.
    pub fn one_minus_wrap(self) -> Self {
        debug_assert_eq!(self.format.role, FxRole::State);
        Self {
            raw: self.raw.wrapping_neg() & self.format.mask(),
            format: self.format,
        }
    }

    /// Truncating Q0.n product.
    pub fn mul_state(self, other: Self) -> Self {
        debug_assert_eq!(self.format.role, FxRole::State);
        debug_assert_eq!(self.format, other.format);
        let n = self.format.word_length;
        let product = (self.raw as u128 * other.raw as u128) >> n;
        Self {
            raw: product as u64,
            format: self.format,
        }
    }

    /// Truncating Q2.(n-2) x Q0.n product yielding Q0.n.
    ///
    /// Panics if the result does not fit in `n` bits. That only happens when
    /// `t > 1/4`, which the logistic step never produces.
    pub fn mul_gamma(gamma: Self, t: Self) -> Self {
        debug_assert_eq!(gamma.format.role, FxRole::Gamma);
        debug_assert_eq!(t.format.role, FxRole::State);
        debug_assert_eq!(gamma.format.word_length, t.format.word_length);
        let n = t.format.word_length;
        let product = (gamma.raw as u128 * t.raw as u128) >> (n - 2);
        assert!(
            product <= t.format.mask() as u128,
            "mul_gamma overflow: {:#x} * {:#x} exceeds Q0.{n}",
            gamma.raw,
            t.raw
        );
        Self {
            raw: product as u64,
            format: t.format,
        }
    }
}

impl fmt::Display for FxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x} ({})", self.raw, self.format)
    }
}

/// `floor` (or `ceil`) of `num * 2^shift / den`, computed exactly.
pub(crate) fn scaled_ratio(num: u64, den: u64, shift: u32, ceil: bool) -> Result<u128, FxError> {
    if den == 0 {
        return Err(FxError::ZeroDenominator);
    }
    // num < 2^64 and shift <= 64 would overflow u128 in the worst case, so
    // split off the integer part first.
    let (q, r) = ((num / den) as u128, (num % den) as u128);
    let den = den as u128;
    let mut acc = q << shift;
    // r < den < 2^64, shifted by up to 64 bits: do it in two halves.
    let (hi, lo) = (shift / 2, shift - shift / 2);
    let r_hi = r << hi;
    let (q1, r1) = (r_hi / den, r_hi % den);
    let r_lo = r1 << lo;
    acc += (q1 << lo) + r_lo / den;
    if ceil && r_lo % den != 0 {
        acc += 1;
    }
    Ok(acc)
}

/// Parses a `0x`-prefixed (or bare decimal) unsigned integer.
pub fn parse_raw(text: &str) -> Option<u64> {
    let t = text.trim();
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        t.parse().ok()
    }
}
