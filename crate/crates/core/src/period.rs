//! Cycle detection on digitized maps.
//!
//! A deterministic map on a finite set eventually repeats: the orbit of `x0`
//! has a tail of `mu` elements followed by a cycle of `lambda` elements. For
//! a random mapping on `2^n` points the expected `mu + lambda` grows like
//! `2^(n/2)`, far below the `2^n` pigeonhole bound.

use serde::{Deserialize, Serialize};

use crate::exec::{map_ordered, Execution};
use crate::fxp::FxError;
use crate::generators::SplitMix64;
use crate::maps::{chaotic_range, logistic_step_raw};

pub const MAX_EXPERIMENT_WORD_LENGTH: u32 = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoResult {
    /// Tail length: iterations before the orbit enters its cycle.
    pub mu: u64,
    /// Cycle length, at least 1.
    pub lambda: u64,
}

impl RhoResult {
    pub fn rho(&self) -> u64 {
        self.mu + self.lambda
    }
}

/// Brent's cycle detection. Returns the minimal `mu` and `lambda`.
pub fn brent_cycle<T, F>(mut step: F, x0: T) -> RhoResult
where
    T: Copy + Eq,
    F: FnMut(T) -> T,
{
    let mut power = 1u64;
    let mut lambda = 1u64;
    let mut tortoise = x0;
    let mut hare = step(x0);
    while tortoise != hare {
        if power == lambda {
            tortoise = hare;
            power *= 2;
            lambda = 0;
        }
        hare = step(hare);
        lambda += 1;
    }

    let mut tortoise = x0;
    let mut hare = x0;
    for _ in 0..lambda {
        hare = step(hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = step(tortoise);
        hare = step(hare);
        mu += 1;
    }
    RhoResult { mu, lambda }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodTrial {
    pub x0: String,
    pub gamma: String,
    pub mu: u64,
    pub lambda: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodSummary {
    pub word_length: u32,
    pub trials: usize,
    pub master_seed: String,
    pub median_rho: f64,
    pub min_rho: u64,
    pub max_rho: u64,
    /// `histogram[b]` counts trials with `floor(log2(rho)) == b`.
    pub histogram: Vec<u64>,
    pub samples: Vec<PeriodTrial>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PeriodError {
    #[error("word length {0} outside the experiment range [8, 28]")]
    WordLength(u32),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Format(#[from] FxError),
}

/// Draws `(x0, gamma)` pairs for the experiment: `x0` is the top `n` bits of
/// the first nonzero draw, `gamma` is reduced into the chaotic range.
pub fn experiment_pairs(n: u32, trials: usize, master_seed: u64) -> Result<Vec<(u64, u64)>, PeriodError> {
    let range = chaotic_range(n)?;
    let mut sm = SplitMix64::new(master_seed);
    Ok((0..trials)
        .map(|_| {
            let x0 = loop {
                let v = sm.next_u64() >> (64 - n);
                if v != 0 {
                    break v;
                }
            };
            let g = range.g_min + sm.next_u64() % range.width();
            (x0, g)
        })
        .collect())
}

pub fn period_experiment(n: u32, trials: usize, master_seed: u64) -> Result<PeriodSummary, PeriodError> {
    period_experiment_with(n, trials, master_seed, Execution::default())
}

pub fn period_experiment_with(
    n: u32,
    trials: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<PeriodSummary, PeriodError> {
    if !(8..=MAX_EXPERIMENT_WORD_LENGTH).contains(&n) {
        return Err(PeriodError::WordLength(n));
    }
    if trials == 0 {
        return Err(PeriodError::NoTrials);
    }
    let pairs = experiment_pairs(n, trials, master_seed)?;
    let results = map_ordered(exec, &pairs, |&(x0, g)| brent_cycle(|x| logistic_step_raw(x, g, n), x0));

    let mut rhos: Vec<u64> = results.iter().map(RhoResult::rho).collect();
    rhos.sort_unstable();
    let mid = rhos.len() / 2;
    let median_rho = if rhos.len() % 2 == 1 {
        rhos[mid] as f64
    } else {
        (rhos[mid - 1] + rhos[mid]) as f64 / 2.0
    };
    let mut histogram = vec![0u64; n as usize + 1];
    for &r in &rhos {
        histogram[r.ilog2() as usize] += 1;
    }
    let samples = pairs
        .iter()
        .zip(&results)
        .map(|(&(x0, g), r)| PeriodTrial {
            x0: format!("{x0:#x}"),
            gamma: format!("{g:#x}"),
            mu: r.mu,
            lambda: r.lambda,
        })
        .collect();
    Ok(PeriodSummary {
        word_length: n,
        trials,
        master_seed: format!("{master_seed:#x}"),
        median_rho,
        min_rho: rhos[0],
        max_rho: *rhos.last().unwrap(),
        histogram,
        samples,
    })
}
