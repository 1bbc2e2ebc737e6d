//! Monobit and block frequency tests.

use std::f64::consts::SQRT_2;

use super::special::{erfc, igamc};
use super::{require_len, Family, StsError, TestResult};
use crate::bits::BitStream;

pub fn frequency(bits: &BitStream) -> Result<TestResult, StsError> {
    let n = bits.len();
    require_len(Family::Frequency, 1, n)?;
    let sum = 2 * bits.count_ones() as i64 - n as i64;
    let s_obs = sum.unsigned_abs() as f64 / (n as f64).sqrt();
    Ok(TestResult::single(Family::Frequency, erfc(s_obs / SQRT_2)).with_param("sum", sum as f64))
}

pub fn block_frequency(bits: &BitStream, block_len: usize) -> Result<TestResult, StsError> {
    let family = Family::BlockFrequency;
    if block_len == 0 {
        return Err(StsError::Parameter {
            family,
            reason: "block length must be positive".into(),
        });
    }
    require_len(family, block_len, bits.len())?;
    let blocks = bits.len() / block_len;
    let mut chi2 = 0.0;
    for b in 0..blocks {
        let start = b * block_len;
        let mut ones = 0u32;
        let mut i = 0;
        while i < block_len {
            let take = (block_len - i).min(64);
            ones += bits.word_at(start + i, take).count_ones();
            i += take;
        }
        let pi = ones as f64 / block_len as f64;
        chi2 += (pi - 0.5).powi(2);
    }
    chi2 *= 4.0 * block_len as f64;
    let p = igamc(blocks as f64 / 2.0, chi2 / 2.0);
    Ok(TestResult::single(family, p)
        .with_param("M", block_len as f64)
        .with_param("chi2", chi2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_is_perfectly_balanced() {
        let bits: BitStream = (0..1000).map(|i| i % 2 == 1).collect();
        assert_eq!(frequency(&bits).unwrap().p_value(), 1.0);
    }

    #[test]
    fn all_ones_is_rejected_hard() {
        let bits: BitStream = std::iter::repeat_n(true, 1_000_000).collect();
        assert!(frequency(&bits).unwrap().p_value() < 1e-100);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(frequency(&BitStream::new()), Err(StsError::TooShort { .. })));
        assert!(block_frequency(&BitStream::from_ascii("0101").unwrap(), 0).is_err());
    }
}
