//! Approximate entropy and serial tests. Both count overlapping `m`-bit
//! patterns with the sequence wrapped around at the end.

use super::special::igamc;
use super::{Family, StsError, TestResult};
use crate::bits::BitStream;

/// Counts of every circular `m`-bit window, indexed by the window value
/// (first bit most significant).
pub fn circular_pattern_counts(bits: &BitStream, m: usize) -> Vec<u64> {
    let n = bits.len();
    let mut counts = vec![0u64; 1 << m];
    if m == 0 {
        counts[0] = n as u64;
        return counts;
    }
    let mask = (1usize << m) - 1;
    let mut v = 0usize;
    for i in 0..m - 1 {
        v = (v << 1) | bits.bit(i % n) as usize;
    }
    for i in 0..n {
        v = ((v << 1) | bits.bit((i + m - 1) % n) as usize) & mask;
        counts[v] += 1;
    }
    counts
}

fn phi(bits: &BitStream, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    circular_pattern_counts(bits, m)
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum()
}

fn psi_squared(bits: &BitStream, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    let sum: f64 = circular_pattern_counts(bits, m)
        .into_iter()
        .map(|c| (c as f64) * (c as f64))
        .sum();
    sum * 2f64.powi(m as i32) / n - n
}

pub fn approximate_entropy(bits: &BitStream, m: usize) -> Result<TestResult, StsError> {
    let family = Family::ApproximateEntropy;
    if m == 0 || m > 24 {
        return Err(StsError::Parameter {
            family,
            reason: format!("pattern length {m} outside [1, 24]"),
        });
    }
    if bits.len() < m + 1 {
        return Err(StsError::TooShort {
            family,
            needed: m + 1,
            got: bits.len(),
        });
    }
    let n = bits.len() as f64;
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi2 = 2.0 * n * (std::f64::consts::LN_2 - apen);
    let p = igamc(2f64.powi(m as i32 - 1), chi2 / 2.0);
    Ok(TestResult::single(family, p)
        .with_param("m", m as f64)
        .with_param("ApEn", apen))
}

pub fn serial(bits: &BitStream, m: usize) -> Result<TestResult, StsError> {
    let family = Family::Serial;
    if !(2..=24).contains(&m) {
        return Err(StsError::Parameter {
            family,
            reason: format!("pattern length {m} outside [2, 24]"),
        });
    }
    if bits.len() < m {
        return Err(StsError::TooShort {
            family,
            needed: m,
            got: bits.len(),
        });
    }
    let psi_m = psi_squared(bits, m);
    let psi_m1 = psi_squared(bits, m - 1);
    let psi_m2 = psi_squared(bits, m - 2);
    let del1 = psi_m - psi_m1;
    let del2 = psi_m - 2.0 * psi_m1 + psi_m2;
    let p1 = igamc(2f64.powi(m as i32 - 2), del1 / 2.0);
    let p2 = igamc(2f64.powi(m as i32 - 3), del2 / 2.0);
    Ok(TestResult::multi(family, vec!["1".into(), "2".into()], vec![p1, p2]).with_param("m", m as f64))
}
