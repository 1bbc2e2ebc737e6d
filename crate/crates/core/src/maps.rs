//! The digitized logistic map and its parameter range.

use serde::{Deserialize, Serialize};

use crate::fxp::{scaled_ratio, word_mask, FxError, FxFormat, FxWord, MAX_WORD_LENGTH, MIN_WORD_LENGTH};

/// One step of the fixed-point logistic map: `g * x * (1 - x)`.
///
/// `1 - x` wraps at zero, so `x = 0` is a fixed point for every `g`.
#[inline]
pub fn logistic_step(x: FxWord, g: FxWord) -> FxWord {
    FxWord::mul_gamma(g, x.mul_state(x.one_minus_wrap()))
}

/// Raw-integer form of [`logistic_step`] used in hot loops.
///
/// `x` is a Q0.n raw value and `g` a Q2.(n-2) raw value.
#[inline(always)]
pub fn logistic_step_raw(x: u64, g: u64, n: u32) -> u64 {
    let mask = word_mask(n);
    let one_minus = x.wrapping_neg() & mask;
    let t = (x as u128 * one_minus as u128) >> n;
    let next = (g as u128 * t) >> (n - 2);
    debug_assert!(next <= mask as u128);
    next as u64
}

/// Raw Gamma-format bounds of the chaotic parameter interval `[3.57, 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaoticRange {
    pub word_length: u32,
    pub g_min: u64,
    pub g_max: u64,
}

impl ChaoticRange {
    pub fn contains(&self, g: &FxWord) -> bool {
        g.format().word_length() == self.word_length && (self.g_min..=self.g_max).contains(&g.raw())
    }

    pub fn contains_raw(&self, raw: u64) -> bool {
        (self.g_min..=self.g_max).contains(&raw)
    }

    /// Number of admissible raw parameter values.
    pub fn width(&self) -> u64 {
        self.g_max - self.g_min + 1
    }
}

/// `g_min = ceil(3.57 * 2^(n-2))`, `g_max = 2^n - 1`.
pub fn chaotic_range(n: u32) -> Result<ChaoticRange, FxError> {
    if !(MIN_WORD_LENGTH..=MAX_WORD_LENGTH).contains(&n) {
        return Err(FxError::WordLength(n));
    }
    let g_min = scaled_ratio(357, 100, n - 2, true)? as u64;
    Ok(ChaoticRange {
        word_length: n,
        g_min,
        g_max: word_mask(n),
    })
}

/// A single-parameter logistic map bound to one word length.
#[derive(Debug, Clone, Copy)]
pub struct LogisticMap {
    gamma: FxWord,
}

impl LogisticMap {
    pub fn new(gamma: FxWord) -> Self {
        Self { gamma }
    }

    pub fn gamma(&self) -> FxWord {
        self.gamma
    }

    pub fn word_length(&self) -> u32 {
        self.gamma.format().word_length()
    }

    pub fn state_format(&self) -> FxFormat {
        FxFormat::state(self.word_length()).expect("gamma carries a valid word length")
    }

    #[inline]
    pub fn step_raw(&self, x: u64) -> u64 {
        logistic_step_raw(x, self.gamma.raw(), self.word_length())
    }

    pub fn step(&self, x: FxWord) -> FxWord {
        logistic_step(x, self.gamma)
    }
}
