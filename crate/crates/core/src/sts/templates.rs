//! Non-overlapping and overlapping template matching tests.

use super::special::igamc;
use super::{chi_square, Family, StsError, TestResult};
use crate::bits::BitStream;

/// Length of the shipped template set.
pub const DEFAULT_TEMPLATE_LEN: usize = 9;

static TEMPLATES_9: &str = include_str!("../../data/templates9.txt");

/// A template of up to 16 bits; bit `len - 1` of `value` is the first bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Template {
    pub value: u32,
    pub len: usize,
}

impl Template {
    pub fn label(&self) -> String {
        format!("{:0width$b}", self.value, width = self.len)
    }

    pub fn parse(text: &str) -> Option<Template> {
        let t = text.trim();
        if t.is_empty() || t.len() > 16 || !t.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        Some(Template {
            value: u32::from_str_radix(t, 2).ok()?,
            len: t.len(),
        })
    }

    /// True when no proper shift of the template overlaps itself, i.e. no
    /// proper prefix equals the suffix of the same length.
    pub fn is_aperiodic(&self) -> bool {
        (1..self.len).all(|shift| {
            let overlap = self.len - shift;
            let prefix = self.value >> shift;
            let suffix = self.value & ((1 << overlap) - 1);
            prefix != suffix
        })
    }
}

/// All aperiodic templates of length `len`, in increasing numeric order.
pub fn aperiodic_templates(len: usize) -> Vec<Template> {
    assert!((1..=16).contains(&len));
    (0..1u32 << len)
        .map(|value| Template { value, len })
        .filter(Template::is_aperiodic)
        .collect()
}

/// The shipped 148-template set for length 9.
pub fn default_templates() -> Vec<Template> {
    TEMPLATES_9.lines().filter_map(Template::parse).collect()
}

/// Non-overlapping matches of each template in each of `blocks` blocks.
///
/// All templates share a length, so at any position at most one of them can
/// match; one pass over the windows serves the whole set.
pub fn non_overlapping(bits: &BitStream, templates: &[Template], blocks: usize) -> Result<TestResult, StsError> {
    let family = Family::NonOverlappingTemplate;
    let Some(first) = templates.first() else {
        return Err(StsError::Parameter {
            family,
            reason: "empty template set".into(),
        });
    };
    let m = first.len;
    if templates.iter().any(|t| t.len != m) || blocks == 0 {
        return Err(StsError::Parameter {
            family,
            reason: "templates must share one length and blocks must be positive".into(),
        });
    }
    let block_len = bits.len() / blocks;
    if block_len < m {
        return Err(StsError::TooShort {
            family,
            needed: blocks * m,
            got: bits.len(),
        });
    }
    let table_size = 1usize << m;
    let mut slot = vec![usize::MAX; table_size];
    for (i, t) in templates.iter().enumerate() {
        slot[t.value as usize] = i;
    }
    let mask = (table_size - 1) as u32;
    let mut counts = vec![vec![0u64; blocks]; templates.len()];
    let mut next_allowed = vec![0usize; table_size];
    for b in 0..blocks {
        next_allowed.iter_mut().for_each(|v| *v = 0);
        let start = b * block_len;
        let mut window = 0u32;
        for i in 0..block_len {
            window = ((window << 1) | bits.get(start + i) as u32) & mask;
            if i + 1 < m {
                continue;
            }
            let pos = i + 1 - m;
            let s = slot[window as usize];
            if s != usize::MAX && pos >= next_allowed[window as usize] {
                counts[s][b] += 1;
                next_allowed[window as usize] = pos + m;
            }
        }
    }
    let mf = block_len as f64;
    let two_m = 2f64.powi(m as i32);
    let mu = (mf - m as f64 + 1.0) / two_m;
    let var = mf * (1.0 / two_m - (2.0 * m as f64 - 1.0) / (two_m * two_m));
    let p_values = counts
        .iter()
        .map(|w| {
            let chi2: f64 = w.iter().map(|&x| (x as f64 - mu).powi(2) / var).sum();
            igamc(blocks as f64 / 2.0, chi2 / 2.0)
        })
        .collect();
    Ok(
        TestResult::multi(family, templates.iter().map(Template::label).collect(), p_values)
            .with_param("m", m as f64)
            .with_param("N", blocks as f64),
    )
}

/// Class probabilities for the overlapping test: the chance of exactly `u`
/// overlapping all-ones matches in a block, for `u < k`, and the tail mass
/// in the last slot.
pub fn overlapping_probabilities(m: usize, block_len: usize, k: usize) -> Vec<f64> {
    let lambda = (block_len - m + 1) as f64 / 2f64.powi(m as i32);
    let eta = lambda / 2.0;
    let mut probs: Vec<f64> = (0..k)
        .map(|u| {
            if u == 0 {
                return (-eta).exp();
            }
            // e^-eta 2^-u sum_{l=1}^{u} eta^l / l! * C(u-1, l-1)
            let mut sum = 0.0;
            let mut term = 1.0; // eta^l / l!
            let mut binom = 1.0; // C(u-1, l-1)
            for l in 1..=u {
                term *= eta / l as f64;
                if l > 1 {
                    binom *= (u - l + 1) as f64 / (l - 1) as f64;
                }
                sum += term * binom;
            }
            (-eta).exp() * sum / 2f64.powi(u as i32)
        })
        .collect();
    let tail = 1.0 - probs.iter().sum::<f64>();
    probs.push(tail);
    probs
}

pub fn overlapping(bits: &BitStream, m: usize, block_len: usize, k: usize) -> Result<TestResult, StsError> {
    let family = Family::OverlappingTemplate;
    if m == 0 || block_len < m || k == 0 {
        return Err(StsError::Parameter {
            family,
            reason: format!("invalid parameters m={m} M={block_len} K={k}"),
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
    let mut nu = vec![0u64; k + 1];
    for b in 0..blocks {
        let start = b * block_len;
        let (mut run, mut matches) = (0usize, 0usize);
        for i in 0..block_len {
            if bits.get(start + i) {
                run += 1;
                if run >= m {
                    matches += 1;
                }
            } else {
                run = 0;
            }
        }
        nu[matches.min(k)] += 1;
    }
    let probs = overlapping_probabilities(m, block_len, k);
    let chi2 = chi_square(&nu, &probs, blocks as f64);
    Ok(TestResult::single(family, igamc(k as f64 / 2.0, chi2 / 2.0))
        .with_param("N", blocks as f64)
        .with_param("chi2", chi2))
}
