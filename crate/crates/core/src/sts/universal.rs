//! Maurer's universal statistical test.

use std::f64::consts::SQRT_2;

use super::special::erfc;
use super::{Family, StsError, TestResult};
use crate::bits::BitStream;

/// Expected value and variance of the statistic for `L = 1..=16`.
const EXPECTED: [(f64, f64); 16] = [
    (0.7326495, 0.690),
    (1.5374383, 1.338),
    (2.4016068, 1.901),
    (3.3112247, 2.358),
    (4.2534266, 2.705),
    (5.2177052, 2.954),
    (6.1962507, 3.125),
    (7.1836656, 3.238),
    (8.1764248, 3.311),
    (9.1723243, 3.356),
    (10.170032, 3.384),
    (11.168765, 3.401),
    (12.168070, 3.410),
    (13.167693, 3.416),
    (14.167488, 3.419),
    (15.167379, 3.421),
];

/// Smallest sequence length for each block length `L = 6..=16`.
const LENGTH_TABLE: [(usize, usize); 11] = [
    (387_840, 6),
    (904_960, 7),
    (2_068_480, 8),
    (4_654_080, 9),
    (10_342_400, 10),
    (22_753_280, 11),
    (49_643_520, 12),
    (107_560_960, 13),
    (231_669_760, 14),
    (496_435_200, 15),
    (1_059_061_760, 16),
];

pub const MIN_LENGTH: usize = 387_840;

/// `(L, Q)` recommended for a sequence of `n` bits.
pub fn parameters_for(n: usize) -> Option<(usize, usize)> {
    let l = LENGTH_TABLE.iter().rev().find(|(min, _)| n >= *min).map(|&(_, l)| l)?;
    Some((l, 10 << l))
}

pub fn universal(bits: &BitStream) -> Result<TestResult, StsError> {
    let (l, q) = parameters_for(bits.len()).ok_or(StsError::TooShort {
        family: Family::Universal,
        needed: MIN_LENGTH,
        got: bits.len(),
    })?;
    universal_with(bits, l, q)
}

pub fn universal_with(bits: &BitStream, l: usize, q: usize) -> Result<TestResult, StsError> {
    let family = Family::Universal;
    if !(1..=16).contains(&l) || q == 0 {
        return Err(StsError::Parameter {
            family,
            reason: format!("unsupported L={l}, Q={q}"),
        });
    }
    let total_blocks = bits.len() / l;
    if total_blocks <= q {
        return Err(StsError::TooShort {
            family,
            needed: (q + 1) * l,
            got: bits.len(),
        });
    }
    let k = total_blocks - q;
    let block = |i: usize| -> usize { (0..l).fold(0usize, |acc, j| (acc << 1) | bits.bit(i * l + j) as usize) };
    let mut last_seen = vec![0usize; 1 << l];
    for i in 0..q {
        last_seen[block(i)] = i + 1;
    }
    let mut sum = 0.0;
    for i in q..q + k {
        let b = block(i);
        sum += ((i + 1 - last_seen[b]) as f64).log2();
        last_seen[b] = i + 1;
    }
    let fn_stat = sum / k as f64;
    let (expected, variance) = EXPECTED[l - 1];
    let lf = l as f64;
    let c = 0.7 - 0.8 / lf + (4.0 + 32.0 / lf) * (k as f64).powf(-3.0 / lf) / 15.0;
    let sigma = c * (variance / k as f64).sqrt();
    let p = erfc((fn_stat - expected).abs() / (SQRT_2 * sigma));
    Ok(TestResult::single(family, p)
        .with_param("L", lf)
        .with_param("Q", q as f64)
        .with_param("fn", fn_stat))
}
