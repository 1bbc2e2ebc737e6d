//! Runs test and longest-run-of-ones test.

use super::special::{erfc, igamc};
use super::{chi_square, require_len, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Reason given when the frequency prerequisite rules the runs test out.
pub const PREREQUISITE_FAILED: &str = "frequency prerequisite failed";

pub fn runs(bits: &BitStream) -> Result<TestResult, StsError> {
    let n = bits.len();
    require_len(Family::Runs, 2, n)?;
    let pi = bits.count_ones() as f64 / n as f64;
    let tau = 2.0 / (n as f64).sqrt();
    if (pi - 0.5).abs() >= tau {
        return Ok(TestResult::inapplicable(Family::Runs, PREREQUISITE_FAILED).with_param("pi", pi));
    }
    let mut v_obs = 1u64;
    let mut prev = bits.get(0);
    for b in bits.iter().skip(1) {
        if b != prev {
            v_obs += 1;
        }
        prev = b;
    }
    let nf = n as f64;
    let num = (v_obs as f64 - 2.0 * nf * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * nf).sqrt() * pi * (1.0 - pi);
    Ok(TestResult::single(Family::Runs, erfc(num / den)).with_param("V_obs", v_obs as f64))
}

/// Block size and class layout for the longest-run test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongestRunClass {
    pub block_len: usize,
    /// Runs of at most `first` fall into class 0.
    pub first: u32,
    /// Number of classes minus one; runs of at least `first + k` share the
    /// last class.
    pub k: usize,
    pub probabilities: &'static [f64],
}

pub const LONGEST_RUN_M8: LongestRunClass = LongestRunClass {
    block_len: 8,
    first: 1,
    k: 3,
    probabilities: &[0.21484375, 0.3671875, 0.23046875, 0.1875],
};

pub const LONGEST_RUN_M128: LongestRunClass = LongestRunClass {
    block_len: 128,
    first: 4,
    k: 5,
    probabilities: &[
        0.1174035788,
        0.242955959,
        0.249363483,
        0.17517706,
        0.102701071,
        0.112398847,
    ],
};

pub const LONGEST_RUN_M10000: LongestRunClass = LongestRunClass {
    block_len: 10_000,
    first: 10,
    k: 6,
    probabilities: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
};

impl LongestRunClass {
    pub fn for_length(n: usize) -> Option<Self> {
        match n {
            0..128 => None,
            128..6272 => Some(LONGEST_RUN_M8),
            6272..750_000 => Some(LONGEST_RUN_M128),
            _ => Some(LONGEST_RUN_M10000),
        }
    }
}

pub fn longest_run(bits: &BitStream) -> Result<TestResult, StsError> {
    let class = LongestRunClass::for_length(bits.len()).ok_or(StsError::TooShort {
        family: Family::LongestRun,
        needed: 128,
        got: bits.len(),
    })?;
    longest_run_with(bits, class)
}

pub fn longest_run_with(bits: &BitStream, class: LongestRunClass) -> Result<TestResult, StsError> {
    require_len(Family::LongestRun, class.block_len, bits.len())?;
    let blocks = bits.len() / class.block_len;
    let mut nu = vec![0u64; class.k + 1];
    for b in 0..blocks {
        let (mut best, mut cur) = (0u32, 0u32);
        for i in b * class.block_len..(b + 1) * class.block_len {
            if bits.get(i) {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        let idx = best.clamp(class.first, class.first + class.k as u32) - class.first;
        nu[idx as usize] += 1;
    }
    let chi2 = chi_square(&nu, class.probabilities, blocks as f64);
    let p = igamc(class.k as f64 / 2.0, chi2 / 2.0);
    Ok(TestResult::single(Family::LongestRun, p)
        .with_param("M", class.block_len as f64)
        .with_param("chi2", chi2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_has_maximal_run_count() {
        let bits: BitStream = (0..1_000_000).map(|i| i % 2 == 0).collect();
        let r = runs(&bits).unwrap();
        assert!(r.applicable);
        assert!(r.p_value() < 1e-100);
    }

    #[test]
    fn all_zeros_fails_the_prerequisite() {
        let bits: BitStream = std::iter::repeat_n(false, 1000).collect();
        let r = runs(&bits).unwrap();
        assert!(!r.applicable);
        assert!(r.reason.unwrap().contains("prerequisite"));
    }

    #[test]
    fn class_probabilities_sum_to_one() {
        for c in [LONGEST_RUN_M8, LONGEST_RUN_M128, LONGEST_RUN_M10000] {
            let s: f64 = c.probabilities.iter().sum();
            assert!((s - 1.0).abs() < 1e-3);
            assert_eq!(c.probabilities.len(), c.k + 1);
        }
        assert_eq!(LongestRunClass::for_length(127), None);
        assert_eq!(LongestRunClass::for_length(1_000_000), Some(LONGEST_RUN_M10000));
    }
}
