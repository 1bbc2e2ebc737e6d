//! Discrete Fourier transform (spectral) test.
//!
//! The transform runs at the sequence's own length through a Bluestein plan,
//! so no bits are dropped or padded for lengths such as 10^6.

use std::f64::consts::SQRT_2;

use super::fft::Bluestein;
use super::special::erfc;
use super::{require_len, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Peak-count statistic of the spectral test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralStatistic {
    pub threshold: f64,
    pub expected_below: f64,
    pub observed_below: usize,
    pub d: f64,
    pub p_value: f64,
}

/// Moduli of the first `n / 2` DFT coefficients of the +-1 sequence.
pub fn spectral_magnitudes(bits: &BitStream, plan: &Bluestein) -> Vec<f64> {
    let n = bits.len();
    let signal = bits.iter().map(|b| if b { 1.0 } else { -1.0 });
    plan.transform_real(signal, n / 2).iter().map(|c| c.norm()).collect()
}

pub fn spectral_statistic(n: usize, magnitudes: &[f64]) -> SpectralStatistic {
    let nf = n as f64;
    let threshold = ((1.0f64 / 0.05).ln() * nf).sqrt();
    let expected_below = 0.95 * nf / 2.0;
    let observed_below = magnitudes.iter().filter(|&&m| m < threshold).count();
    let d = (observed_below as f64 - expected_below) / (nf * 0.95 * 0.05 / 4.0).sqrt();
    SpectralStatistic {
        threshold,
        expected_below,
        observed_below,
        d,
        p_value: erfc(d.abs() / SQRT_2),
    }
}

pub fn spectral(bits: &BitStream) -> Result<TestResult, StsError> {
    require_len(Family::Fft, 2, bits.len())?;
    spectral_with(bits, &Bluestein::new(bits.len()))
}

/// As [`spectral`], reusing a plan built for `bits.len()`.
pub fn spectral_with(bits: &BitStream, plan: &Bluestein) -> Result<TestResult, StsError> {
    let n = bits.len();
    require_len(Family::Fft, 2, n)?;
    if plan.len() != n {
        return Err(StsError::Parameter {
            family: Family::Fft,
            reason: format!("plan length {} does not match input length {n}", plan.len()),
        });
    }
    let stat = spectral_statistic(n, &spectral_magnitudes(bits, plan));
    Ok(TestResult::single(Family::Fft, stat.p_value)
        .with_param("N1", stat.observed_below as f64)
        .with_param("d", stat.d))
}
