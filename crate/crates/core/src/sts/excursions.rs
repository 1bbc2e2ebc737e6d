//! Random excursions and random excursions variant tests.

use super::special::{erfc, igamc};
use super::{chi_square, Family, StsError, TestResult};
use crate::bits::BitStream;

pub const EXCURSION_STATES: [i64; 8] = [-4, -3, -2, -1, 1, 2, 3, 4];

pub fn variant_states() -> impl Iterator<Item = i64> {
    (-9..=9).filter(|&x| x != 0)
}

/// Fewer cycles than this makes both tests inapplicable.
pub fn cycle_constraint(n: usize) -> f64 {
    (0.005 * (n as f64).sqrt()).max(500.0)
}

/// Probability that a cycle visits state `x` exactly `k` times (`k = 5`
/// stands for five or more).
pub fn visit_probabilities(x: i64) -> [f64; 6] {
    let a = x.unsigned_abs() as f64;
    let stay = 1.0 - 1.0 / (2.0 * a);
    let mut p = [0.0; 6];
    p[0] = stay;
    for (k, slot) in p.iter_mut().enumerate().take(5).skip(1) {
        *slot = stay.powi(k as i32 - 1) / (4.0 * a * a);
    }
    p[5] = stay.powi(4) / (2.0 * a);
    p
}

/// Number of zero-to-zero cycles of the +-1 walk. A walk that does not end
/// at zero contributes a final partial cycle.
pub fn cycle_count(bits: &BitStream) -> usize {
    let mut s = 0i64;
    let mut j = 0;
    for b in bits.iter() {
        s += if b { 1 } else { -1 };
        if s == 0 {
            j += 1;
        }
    }
    if s != 0 {
        j += 1;
    }
    j
}

fn gate(family: Family, bits: &BitStream, cycles: usize) -> Option<TestResult> {
    let constraint = cycle_constraint(bits.len());
    if (cycles as f64) < constraint {
        Some(TestResult::inapplicable(
            family,
            format!("{cycles} cycles, fewer than the required {constraint}"),
        ))
    } else {
        None
    }
}

pub fn random_excursions(bits: &BitStream) -> Result<TestResult, StsError> {
    let family = Family::RandomExcursions;
    if bits.is_empty() {
        return Err(StsError::TooShort {
            family,
            needed: 1,
            got: 0,
        });
    }
    // nu[state][k]: number of cycles visiting the state exactly k times
    let mut nu = [[0u64; 6]; 8];
    let mut visits = [0u64; 8];
    let mut cycles = 0usize;
    let mut s = 0i64;
    let close = |visits: &mut [u64; 8], nu: &mut [[u64; 6]; 8]| {
        for (row, v) in nu.iter_mut().zip(visits.iter_mut()) {
            row[(*v).min(5) as usize] += 1;
            *v = 0;
        }
    };
    for b in bits.iter() {
        s += if b { 1 } else { -1 };
        if s == 0 {
            cycles += 1;
            close(&mut visits, &mut nu);
        } else if (-4..=4).contains(&s) {
            let idx = if s < 0 { (s + 4) as usize } else { (s + 3) as usize };
            visits[idx] += 1;
        }
    }
    if s != 0 {
        cycles += 1;
        close(&mut visits, &mut nu);
    }
    if let Some(r) = gate(family, bits, cycles) {
        return Ok(r);
    }
    let p_values = EXCURSION_STATES
        .iter()
        .zip(&nu)
        .map(|(&x, row)| {
            let chi2 = chi_square(row, &visit_probabilities(x), cycles as f64);
            igamc(2.5, chi2 / 2.0)
        })
        .collect();
    let labels = EXCURSION_STATES.iter().map(|x| format!("x={x}")).collect();
    Ok(TestResult::multi(family, labels, p_values).with_param("J", cycles as f64))
}

pub fn random_excursions_variant(bits: &BitStream) -> Result<TestResult, StsError> {
    let family = Family::RandomExcursionsVariant;
    if bits.is_empty() {
        return Err(StsError::TooShort {
            family,
            needed: 1,
            got: 0,
        });
    }
    let mut totals = [0u64; 19];
    let mut s = 0i64;
    for b in bits.iter() {
        s += if b { 1 } else { -1 };
        if (-9..=9).contains(&s) {
            totals[(s + 9) as usize] += 1;
        }
    }
    let cycles = cycle_count(bits);
    if let Some(r) = gate(family, bits, cycles) {
        return Ok(r);
    }
    let j = cycles as f64;
    let (labels, p_values) = variant_states()
        .map(|x| {
            let xi = totals[(x + 9) as usize] as f64;
            let p = erfc((xi - j).abs() / (2.0 * j * (4.0 * x.unsigned_abs() as f64 - 2.0)).sqrt());
            (format!("x={x}"), p)
        })
        .unzip();
    Ok(TestResult::multi(family, labels, p_values).with_param("J", j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visit_probabilities_sum_to_one() {
        for x in EXCURSION_STATES {
            let s: f64 = visit_probabilities(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert_eq!(visit_probabilities(1), [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.03125]);
    }

    #[test]
    fn short_excursion_input_is_inapplicable() {
        let bits = BitStream::from_ascii("0110110101").unwrap();
        assert_eq!(cycle_count(&bits), 3);
        let r = random_excursions(&bits).unwrap();
        assert!(!r.applicable);
        assert!(!random_excursions_variant(&bits).unwrap().applicable);
    }
}
