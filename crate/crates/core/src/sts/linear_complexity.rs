//! Linear complexity test.

use super::berlekamp::berlekamp_massey;
use super::special::igamc;
use super::{chi_square, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Class probabilities as tabulated by the standard (`K = 6`).
const PROBABILITIES: [f64; 7] = [0.01047, 0.03125, 0.12500, 0.50000, 0.25000, 0.06250, 0.020833];

pub fn linear_complexity(bits: &BitStream, block_len: usize) -> Result<TestResult, StsError> {
    let family = Family::LinearComplexity;
    if block_len == 0 {
        return Err(StsError::Parameter {
            family,
            reason: "block length must be positive".into(),
        });
    }
    let blocks = bits.len() / block_len;
    if blocks == 0 {
        return Err(StsError::TooShort {
            family,
            needed: block_len,
            got: bits.len(),
        });
    }
    let m = block_len as f64;
    let sign = if block_len.is_multiple_of(2) { 1.0 } else { -1.0 };
    // (9 + (-1)^(M+1)) / 36 with (-1)^(M+1) = -sign
    let mu = m / 2.0 + (9.0 - sign) / 36.0 - (m / 3.0 + 2.0 / 9.0) / 2f64.powf(m);
    let unpacked = bits.to_unpacked();
    let mut nu = [0u64; 7];
    for block in unpacked.chunks_exact(block_len) {
        let l = berlekamp_massey(block) as f64;
        let t = sign * (l - mu) + 2.0 / 9.0;
        let class = if t <= -2.5 {
            0
        } else if t <= -1.5 {
            1
        } else if t <= -0.5 {
            2
        } else if t <= 0.5 {
            3
        } else if t <= 1.5 {
            4
        } else if t <= 2.5 {
            5
        } else {
            6
        };
        nu[class] += 1;
    }
    let chi2 = chi_square(&nu, &PROBABILITIES, blocks as f64);
    Ok(TestResult::single(family, igamc(3.0, chi2 / 2.0))
        .with_param("M", m)
        .with_param("chi2", chi2))
}
