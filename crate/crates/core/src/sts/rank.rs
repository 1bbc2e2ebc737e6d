//! Binary matrix rank test.

use super::{chi_square, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Rank over GF(2) of a matrix given as row bitmasks.
pub fn gf2_rank(rows: &mut [u64], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let bit = 1u64 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// Probability that a uniformly random `m x q` binary matrix has rank `r`.
pub fn rank_probability(m: usize, q: usize, r: usize) -> f64 {
    let exponent = (r * (q + m - r)) as i32 - (m * q) as i32;
    let mut p = 2f64.powi(exponent);
    for i in 0..r as i32 {
        let (qi, mi, ri) = (i - q as i32, i - m as i32, i - r as i32);
        p *= (1.0 - 2f64.powi(qi)) * (1.0 - 2f64.powi(mi)) / (1.0 - 2f64.powi(ri));
    }
    p
}

pub fn rank(bits: &BitStream, rows: usize, cols: usize) -> Result<TestResult, StsError> {
    let family = Family::Rank;
    if rows == 0 || cols == 0 || cols > 64 {
        return Err(StsError::Parameter {
            family,
            reason: format!("unsupported matrix shape {rows}x{cols}"),
        });
    }
    let per_matrix = rows * cols;
    let matrices = bits.len() / per_matrix;
    if matrices == 0 {
        return Err(StsError::TooShort {
            family,
            needed: per_matrix,
            got: bits.len(),
        });
    }
    let full = rows.min(cols);
    let mut counts = [0u64; 3];
    let mut buf = vec![0u64; rows];
    for k in 0..matrices {
        for (r, row) in buf.iter_mut().enumerate() {
            *row = bits.word_at(k * per_matrix + r * cols, cols);
        }
        let rk = gf2_rank(&mut buf, cols);
        let class = if rk == full {
            0
        } else if rk + 1 == full {
            1
        } else {
            2
        };
        counts[class] += 1;
    }
    let p_full = rank_probability(rows, cols, full);
    let p_minus = if full >= 1 {
        rank_probability(rows, cols, full - 1)
    } else {
        0.0
    };
    let probs = [p_full, p_minus, 1.0 - p_full - p_minus];
    let chi2 = chi_square(&counts, &probs, matrices as f64);
    Ok(TestResult::single(family, (-chi2 / 2.0).exp())
        .with_param("N", matrices as f64)
        .with_param("chi2", chi2))
}
