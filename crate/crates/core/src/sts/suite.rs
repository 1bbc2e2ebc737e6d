//! Corpus-level runner: every family over every sequence, reduced into
//! per-subtest passing proportions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fft::Bluestein;
use super::special::igamc;
use super::templates::{self, Template};
use super::{
    cusum, entropy, excursions, frequency, linear_complexity, rank, runs, spectral, universal, Family, StsError,
    TestResult,
};
use crate::bits::BitStream;
use crate::exec::{map_ordered, Execution};
use crate::generators::{fill_bits, BitSource};

/// Per-family parameters. [`SuiteParams::for_length`] gives the standard's
/// recommendations for a sequence length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteParams {
    pub block_frequency_m: usize,
    pub rank_rows: usize,
    pub rank_cols: usize,
    pub template_blocks: usize,
    pub overlapping_m: usize,
    pub overlapping_block: usize,
    pub overlapping_k: usize,
    pub apen_m: usize,
    pub serial_m: usize,
    pub linear_complexity_m: usize,
}

impl SuiteParams {
    pub fn for_length(n: usize) -> Self {
        let log2 = (usize::BITS - 1 - n.max(1).leading_zeros()) as usize;
        Self {
            block_frequency_m: 128,
            rank_rows: 32,
            rank_cols: 32,
            template_blocks: 8,
            overlapping_m: 9,
            overlapping_block: 1032,
            overlapping_k: 5,
            apen_m: log2.saturating_sub(6).clamp(1, 10),
            serial_m: log2.saturating_sub(3).clamp(2, 16),
            linear_complexity_m: 500,
        }
    }

    /// Smallest sequence length at which the suite runs `family`.
    pub fn minimum_length(&self, family: Family) -> usize {
        match family {
            Family::Frequency | Family::BlockFrequency | Family::CumulativeSums | Family::Runs => 100,
            Family::LongestRun => 128,
            Family::Rank => 38 * self.rank_rows * self.rank_cols,
            Family::Fft => 1000,
            Family::NonOverlappingTemplate => self.template_blocks * templates::DEFAULT_TEMPLATE_LEN,
            Family::Universal => universal::MIN_LENGTH,
            Family::OverlappingTemplate
            | Family::RandomExcursions
            | Family::RandomExcursionsVariant
            | Family::LinearComplexity => 1_000_000,
            Family::ApproximateEntropy | Family::Serial => 1 << (self.serial_m.max(self.apen_m + 1)),
        }
    }
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self::for_length(1_000_000)
    }
}

/// `(1 - alpha) - 3 sqrt(alpha (1 - alpha) / s)`.
pub fn proportion_threshold(alpha: f64, s: usize) -> f64 {
    assert!(s >= 1);
    let p = 1.0 - alpha;
    p - 3.0 * (p * alpha / s as f64).sqrt()
}

/// Runs one family with the suite's applicability rules. Failures to meet
/// them come back as an inapplicable result rather than an error.
pub fn run_test(family: Family, bits: &BitStream, params: &SuiteParams) -> TestResult {
    Suite::new(params.clone()).run(family, bits)
}

/// A configured suite. Holds the template set and a transform plan so
/// repeated sequences of one length share them.
#[derive(Debug)]
pub struct Suite {
    params: SuiteParams,
    templates: Vec<Template>,
    plan: Option<Bluestein>,
}

impl Suite {
    pub fn new(params: SuiteParams) -> Self {
        Self {
            params,
            templates: templates::default_templates(),
            plan: None,
        }
    }

    /// Suite with recommended parameters and a prepared plan for `n`-bit
    /// sequences.
    pub fn for_length(n: usize) -> Self {
        Self::prepared(SuiteParams::for_length(n), n)
    }

    /// Suite with `params` and a prepared plan for `n`-bit sequences.
    pub fn prepared(params: SuiteParams, n: usize) -> Self {
        let mut suite = Self::new(params);
        if n > 0 {
            suite.plan = Some(Bluestein::new(n));
        }
        suite
    }

    pub fn params(&self) -> &SuiteParams {
        &self.params
    }

    pub fn run(&self, family: Family, bits: &BitStream) -> TestResult {
        let needed = self.params.minimum_length(family);
        if bits.len() < needed {
            return TestResult::inapplicable(family, format!("needs at least {needed} bits, got {}", bits.len()));
        }
        let p = &self.params;
        let outcome: Result<TestResult, StsError> = match family {
            Family::Frequency => frequency::frequency(bits),
            Family::BlockFrequency => frequency::block_frequency(bits, p.block_frequency_m),
            Family::CumulativeSums => cusum::cumulative_sums(bits),
            Family::Runs => runs::runs(bits),
            Family::LongestRun => runs::longest_run(bits),
            Family::Rank => rank::rank(bits, p.rank_rows, p.rank_cols),
            Family::Fft => match &self.plan {
                Some(plan) if plan.len() == bits.len() => spectral::spectral_with(bits, plan),
                _ => spectral::spectral(bits),
            },
            Family::NonOverlappingTemplate => templates::non_overlapping(bits, &self.templates, p.template_blocks),
            Family::OverlappingTemplate => {
                templates::overlapping(bits, p.overlapping_m, p.overlapping_block, p.overlapping_k)
            }
            Family::Universal => universal::universal(bits),
            Family::ApproximateEntropy => entropy::approximate_entropy(bits, p.apen_m),
            Family::RandomExcursions => excursions::random_excursions(bits),
            Family::RandomExcursionsVariant => excursions::random_excursions_variant(bits),
            Family::Serial => entropy::serial(bits, p.serial_m),
            Family::LinearComplexity => linear_complexity::linear_complexity(bits, p.linear_complexity_m),
        };
        outcome.unwrap_or_else(|e| TestResult::inapplicable(family, e.to_string()))
    }

    /// All fifteen families on one sequence, in registry order.
    pub fn evaluate(&self, bits: &BitStream) -> Vec<TestResult> {
        Family::ALL.iter().map(|&f| self.run(f, bits)).collect()
    }

    /// Evaluates every (sequence, family) pair and reduces in sequence order.
    pub fn evaluate_corpus(
        &self,
        sequences: &[BitStream],
        alpha: f64,
        corpus: CorpusDescriptor,
        exec: Execution,
    ) -> SuiteReport {
        let tasks: Vec<(usize, Family)> = (0..sequences.len())
            .flat_map(|i| Family::ALL.into_iter().map(move |f| (i, f)))
            .collect();
        let results = map_ordered(exec, &tasks, |&(i, f)| self.run(f, &sequences[i]));
        let per_sequence: Vec<&[TestResult]> = results.chunks(Family::ALL.len()).collect();
        SuiteReport::from_results(&per_sequence, alpha, corpus)
    }
}

/// What a report was computed over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusDescriptor {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub generator: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<String>,
    pub sequences: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubtestSummary {
    pub id: String,
    pub proportion: f64,
    pub applicable_count: usize,
    pub passed_count: usize,
    /// Chi-square uniformity of the p-values over ten bins, when at least
    /// ten were collected.
    pub uniformity_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilySummary {
    pub name: String,
    pub subtests: Vec<SubtestSummary>,
    /// Mean of the subtest proportions; `None` when no sequence was
    /// applicable.
    pub average_passing_rate: Option<f64>,
    /// Reasons sequences were excluded, with counts.
    pub inapplicable: BTreeMap<String, usize>,
}

impl FamilySummary {
    pub fn family(&self) -> Option<Family> {
        Family::from_name(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub corpus: CorpusDescriptor,
    pub alpha: f64,
    pub threshold: f64,
    pub families: Vec<FamilySummary>,
    /// Mean over every subtest proportion with at least one applicable
    /// sequence.
    pub average_passing_rate: f64,
    /// Mean of the family averages.
    pub family_average_passing_rate: f64,
}

#[derive(Default)]
struct SubtestAcc {
    p_values: Vec<f64>,
    passed: usize,
}

impl SuiteReport {
    /// Reduces per-sequence results (each in registry order).
    pub fn from_results(per_sequence: &[&[TestResult]], alpha: f64, corpus: CorpusDescriptor) -> SuiteReport {
        let s = per_sequence.len().max(1);
        let threshold = proportion_threshold(alpha, s);
        let mut families = Vec::with_capacity(Family::ALL.len());
        for (slot, &family) in Family::ALL.iter().enumerate() {
            let mut order: Vec<String> = Vec::new();
            let mut acc: BTreeMap<String, SubtestAcc> = BTreeMap::new();
            let mut inapplicable: BTreeMap<String, usize> = BTreeMap::new();
            for results in per_sequence {
                let r = &results[slot];
                debug_assert_eq!(r.family, family);
                let outcomes: Vec<(String, f64)> = if r.applicable {
                    r.labels.iter().cloned().zip(r.p_values.iter().copied()).collect()
                } else if family == Family::Runs && r.reason.as_deref() == Some(runs::PREREQUISITE_FAILED) {
                    // the standard counts a failed frequency prerequisite as a failed runs test
                    vec![(family.name().to_string(), 0.0)]
                } else {
                    let reason = r.reason.clone().unwrap_or_default();
                    *inapplicable.entry(reason).or_default() += 1;
                    continue;
                };
                for (label, p) in outcomes {
                    let entry = acc.entry(label.clone()).or_insert_with(|| {
                        order.push(label);
                        SubtestAcc::default()
                    });
                    entry.p_values.push(p);
                    if p >= alpha {
                        entry.passed += 1;
                    }
                }
            }
            let subtests: Vec<SubtestSummary> = order
                .into_iter()
                .map(|id| {
                    let a = &acc[&id];
                    let count = a.p_values.len();
                    SubtestSummary {
                        proportion: a.passed as f64 / count as f64,
                        applicable_count: count,
                        passed_count: a.passed,
                        uniformity_p: uniformity_p_value(&a.p_values),
                        id,
                    }
                })
                .collect();
            let average_passing_rate = mean(subtests.iter().map(|t| t.proportion));
            families.push(FamilySummary {
                name: family.name().to_string(),
                subtests,
                average_passing_rate,
                inapplicable,
            });
        }
        let average_passing_rate =
            mean(families.iter().flat_map(|f| f.subtests.iter().map(|t| t.proportion))).unwrap_or(0.0);
        let family_average_passing_rate = mean(families.iter().filter_map(|f| f.average_passing_rate)).unwrap_or(0.0);
        SuiteReport {
            corpus,
            alpha,
            threshold,
            families,
            average_passing_rate,
            family_average_passing_rate,
        }
    }

    pub fn family(&self, family: Family) -> Option<&FamilySummary> {
        self.families.iter().find(|f| f.name == family.name())
    }

    /// Families whose average proportion falls below the threshold.
    pub fn families_below_threshold(&self) -> Vec<&FamilySummary> {
        self.families
            .iter()
            .filter(|f| f.average_passing_rate.is_some_and(|r| r < self.threshold))
            .collect()
    }

    pub fn subtests(&self) -> impl Iterator<Item = &SubtestSummary> {
        self.families.iter().flat_map(|f| f.subtests.iter())
    }

    /// Fraction of subtests whose proportion reaches the threshold.
    pub fn fraction_at_threshold(&self) -> f64 {
        let total = self.subtests().count();
        if total == 0 {
            return 0.0;
        }
        self.subtests().filter(|t| t.proportion >= self.threshold).count() as f64 / total as f64
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Ten-bin chi-square uniformity of a set of p-values; `None` below ten.
pub fn uniformity_p_value(p_values: &[f64]) -> Option<f64> {
    if p_values.len() < 10 {
        return None;
    }
    let mut bins = [0u64; 10];
    for &p in p_values {
        bins[((p * 10.0) as usize).min(9)] += 1;
    }
    let expected = p_values.len() as f64 / 10.0;
    let chi2: f64 = bins.iter().map(|&b| (b as f64 - expected).powi(2) / expected).sum();
    Some(igamc(4.5, chi2 / 2.0))
}

/// Draws `s` consecutive `n`-bit sequences from `source` and evaluates them.
pub fn run_suite<S: BitSource + ?Sized>(
    source: &mut S,
    s: usize,
    n: usize,
    alpha: f64,
    corpus: CorpusDescriptor,
    exec: Execution,
) -> SuiteReport {
    let sequences: Vec<BitStream> = (0..s).map(|_| fill_bits(source, n)).collect();
    Suite::for_length(n).evaluate_corpus(&sequences, alpha, corpus, exec)
}
