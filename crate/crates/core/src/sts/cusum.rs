//! Cumulative sums (forward and backward) test.

use super::special::normal_cdf;
use super::{require_len, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Maximum absolute partial sum of the +-1 walk.
fn max_excursion(bits: impl Iterator<Item = bool>) -> i64 {
    let mut s = 0i64;
    let mut z = 0i64;
    for b in bits {
        s += if b { 1 } else { -1 };
        z = z.max(s.abs());
    }
    z
}

/// p-value for maximum excursion `z` over `n` steps. Summation bounds use
/// truncating integer division, as the reference implementation does.
pub fn cusum_p_value(n: usize, z: i64) -> f64 {
    let n_i = n as i64;
    let sqrt_n = (n as f64).sqrt();
    let zf = z as f64;
    let mut sum1 = 0.0;
    for k in ((-n_i / z + 1) / 4)..=((n_i / z - 1) / 4) {
        let k = k as f64;
        sum1 += normal_cdf((4.0 * k + 1.0) * zf / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zf / sqrt_n);
    }
    let mut sum2 = 0.0;
    for k in ((-n_i / z - 3) / 4)..=((n_i / z - 1) / 4) {
        let k = k as f64;
        sum2 += normal_cdf((4.0 * k + 3.0) * zf / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zf / sqrt_n);
    }
    1.0 - sum1 + sum2
}

pub fn cumulative_sums(bits: &BitStream) -> Result<TestResult, StsError> {
    let n = bits.len();
    require_len(Family::CumulativeSums, 1, n)?;
    let forward = max_excursion(bits.iter());
    let backward = max_excursion((0..n).rev().map(|i| bits.get(i)));
    Ok(TestResult::multi(
        Family::CumulativeSums,
        vec!["forward".into(), "backward".into()],
        vec![cusum_p_value(n, forward), cusum_p_value(n, backward)],
    )
    .with_param("z_forward", forward as f64)
    .with_param("z_backward", backward as f64))
}
