//! NIST SP 800-22 statistical test suite.
//!
//! Every family is a pure function of an immutable [`BitStream`]. The
//! individual family functions only insist on what is needed for their
//! statistic to be defined; the suite layer ([`suite`]) additionally applies
//! the standard's recommended minimum input sizes.
//!
//! [`BitStream`]: crate::bits::BitStream

pub mod berlekamp;
pub mod cusum;
pub mod entropy;
pub mod excursions;
pub mod fft;
pub mod frequency;
pub mod linear_complexity;
pub mod rank;
pub mod runs;
pub mod special;
pub mod spectral;
pub mod suite;
pub mod templates;
pub mod universal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use berlekamp::berlekamp_massey;
pub use suite::{
    proportion_threshold, run_suite, run_test, CorpusDescriptor, FamilySummary, SubtestSummary, Suite, SuiteParams,
    SuiteReport,
};

/// The fifteen test families, in the standard's order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Frequency,
    BlockFrequency,
    CumulativeSums,
    Runs,
    LongestRun,
    Rank,
    Fft,
    NonOverlappingTemplate,
    OverlappingTemplate,
    Universal,
    ApproximateEntropy,
    RandomExcursions,
    RandomExcursionsVariant,
    Serial,
    LinearComplexity,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Frequency,
        Family::BlockFrequency,
        Family::CumulativeSums,
        Family::Runs,
        Family::LongestRun,
        Family::Rank,
        Family::Fft,
        Family::NonOverlappingTemplate,
        Family::OverlappingTemplate,
        Family::Universal,
        Family::ApproximateEntropy,
        Family::RandomExcursions,
        Family::RandomExcursionsVariant,
        Family::Serial,
        Family::LinearComplexity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Frequency => "Frequency",
            Family::BlockFrequency => "BlockFrequency",
            Family::CumulativeSums => "CumulativeSums",
            Family::Runs => "Runs",
            Family::LongestRun => "LongestRun",
            Family::Rank => "Rank",
            Family::Fft => "FFT",
            Family::NonOverlappingTemplate => "NonOverlappingTemplate",
            Family::OverlappingTemplate => "OverlappingTemplate",
            Family::Universal => "Universal",
            Family::ApproximateEntropy => "ApproximateEntropy",
            Family::RandomExcursions => "RandomExcursions",
            Family::RandomExcursionsVariant => "RandomExcursionsVariant",
            Family::Serial => "Serial",
            Family::LinearComplexity => "LinearComplexity",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StsError {
    #[error("{family}: needs at least {needed} bits, got {got}")]
    TooShort { family: Family, needed: usize, got: usize },
    #[error("{family}: {reason}")]
    Parameter { family: Family, reason: String },
}

/// Outcome of one family on one sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub family: Family,
    pub parameters: Vec<(String, f64)>,
    /// One label per p-value (`"forward"`, `"x=-4"`, a template, ...).
    pub labels: Vec<String>,
    pub p_values: Vec<f64>,
    pub applicable: bool,
    pub reason: Option<String>,
}

impl TestResult {
    pub(crate) fn single(family: Family, p: f64) -> Self {
        Self::multi(family, vec![family.name().to_string()], vec![p])
    }

    pub(crate) fn multi(family: Family, labels: Vec<String>, p_values: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len(), p_values.len());
        Self {
            family,
            parameters: Vec::new(),
            labels,
            p_values: p_values.into_iter().map(|p| p.clamp(0.0, 1.0)).collect(),
            applicable: true,
            reason: None,
        }
    }

    pub fn inapplicable(family: Family, reason: impl Into<String>) -> Self {
        Self {
            family,
            parameters: Vec::new(),
            labels: Vec::new(),
            p_values: Vec::new(),
            applicable: false,
            reason: Some(reason.into()),
        }
    }

    pub(crate) fn with_param(mut self, name: &str, value: f64) -> Self {
        self.parameters.push((name.to_string(), value));
        self
    }

    /// The single p-value of a one-statistic family.
    pub fn p_value(&self) -> f64 {
        self.p_values[0]
    }

    pub fn total_count(&self) -> usize {
        self.p_values.len()
    }

    pub fn passed_count(&self, alpha: f64) -> usize {
        self.p_values.iter().filter(|&&p| p >= alpha).count()
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

pub(crate) fn require_len(family: Family, needed: usize, got: usize) -> Result<(), StsError> {
    if got < needed {
        Err(StsError::TooShort { family, needed, got })
    } else {
        Ok(())
    }
}

/// Sum of `(observed - expected)^2 / expected` over matching classes.
pub(crate) fn chi_square(observed: &[u64], expected_probs: &[f64], total: f64) -> f64 {
    observed
        .iter()
        .zip(expected_probs)
        .map(|(&o, &p)| {
            let e = total * p;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}
