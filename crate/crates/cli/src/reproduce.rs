//! The passing-rate comparison across the dynamical generator and its
//! baselines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use bitchaos::generators::{GeneratorKind, GeneratorSpec, GlibcExtraction};
use bitchaos::sts::{proportion_threshold, Family, SuiteReport};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::commands::parse_master;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// The dynamical generator and the raw 32- and 64-bit maps.
    Table1,
    /// The LFSR and glibc LCG baselines.
    Baselines,
    #[default]
    All,
}

impl Target {
    pub fn kinds(self) -> &'static [GeneratorKind] {
        use GeneratorKind::*;
        match self {
            Target::Table1 => &[Dynamical, Logistic64, Logistic32],
            Target::Baselines => &[Lfsr32, Glibc],
            Target::All => &[Dynamical, Logistic64, Lfsr32, Glibc, Logistic32],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Protocol {
    pub sequences: usize,
    pub length: usize,
    pub alpha: f64,
    pub master_seed: String,
    /// Smoke-test sizing, judged with relaxed tolerances.
    pub reduced: bool,
}

impl Protocol {
    pub fn full(master: u64) -> Self {
        Self {
            sequences: 100,
            length: 1_000_000,
            alpha: 0.01,
            master_seed: format!("{master:#x}"),
            reduced: false,
        }
    }

    pub fn reduced(master: u64) -> Self {
        Self {
            sequences: 20,
            length: 100_000,
            reduced: true,
            ..Self::full(master)
        }
    }

    pub fn threshold(&self) -> f64 {
        proportion_threshold(self.alpha, self.sequences)
    }

    /// Reference generator specs for `target`, all derived from the master
    /// seed.
    pub fn plan(&self, target: Target, extraction: GlibcExtraction) -> Result<Vec<GeneratorSpec>, CliError> {
        let master = parse_master(&self.master_seed)?;
        target
            .kinds()
            .iter()
            .map(|&kind| {
                Ok(match GeneratorSpec::reference(kind, master)? {
                    GeneratorSpec::Glibc { seed, .. } => GeneratorSpec::Glibc { seed, extraction },
                    spec => spec,
                })
            })
            .collect()
    }
}

/// Published average passing rate for each generator.
pub fn published_rate(kind: GeneratorKind) -> Option<f64> {
    match kind {
        GeneratorKind::Dynamical => Some(0.989),
        GeneratorKind::Logistic64 => Some(0.979),
        GeneratorKind::Lfsr32 => Some(0.978),
        GeneratorKind::Glibc => Some(0.350),
        GeneratorKind::Logistic32 => Some(0.252),
        GeneratorKind::Splitmix => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub dynamical_min: f64,
    pub logistic64_min: f64,
    pub logistic32_max: f64,
    pub logistic32_families_below: usize,
    pub lfsr_linear_max: f64,
    pub lfsr_rest_min: f64,
    pub glibc_max: f64,
    pub dynamical_subtest_fraction: f64,
}

impl Tolerances {
    pub const FULL: Tolerances = Tolerances {
        dynamical_min: 0.97,
        logistic64_min: 0.95,
        logistic32_max: 0.55,
        logistic32_families_below: 7,
        lfsr_linear_max: 0.05,
        lfsr_rest_min: 0.90,
        glibc_max: 0.60,
        dynamical_subtest_fraction: 0.90,
    };

    /// For 20 sequences of 10^5 bits: a lower proportion threshold, wider
    /// binomial spread, and four families that need 10^6 bits drop out.
    pub const REDUCED: Tolerances = Tolerances {
        dynamical_min: 0.93,
        logistic64_min: 0.90,
        logistic32_max: 0.65,
        logistic32_families_below: 5,
        lfsr_linear_max: 0.05,
        lfsr_rest_min: 0.85,
        glibc_max: 0.70,
        dynamical_subtest_fraction: 0.85,
    };

    pub fn for_protocol(protocol: &Protocol) -> Self {
        if protocol.reduced {
            Self::REDUCED
        } else {
            Self::FULL
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A generator the check needs was not part of the run.
    Skipped,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub generator: GeneratorKind,
    pub seeds: Vec<String>,
    pub average_passing_rate: f64,
    pub family_average_passing_rate: f64,
    pub families_below_threshold: Vec<String>,
    pub fraction_at_threshold: f64,
    pub published_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub protocol: Protocol,
    pub threshold: f64,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn row(&self, kind: GeneratorKind) -> Option<&Row> {
        self.rows.iter().find(|r| r.generator == kind)
    }
}

/// Passing proportion of a single-subtest family, if any sequence was
/// applicable.
pub fn family_rate(report: &SuiteReport, family: Family) -> Option<f64> {
    report.family(family).and_then(|f| f.average_passing_rate)
}

/// Mean family rate over every applicable family except `excluded`.
pub fn family_mean_excluding(report: &SuiteReport, excluded: &[Family]) -> f64 {
    let rates: Vec<f64> = report
        .families
        .iter()
        .filter(|f| f.family().is_some_and(|fam| !excluded.contains(&fam)))
        .filter_map(|f| f.average_passing_rate)
        .collect();
    rates.iter().sum::<f64>() / rates.len().max(1) as f64
}

pub fn compare(protocol: &Protocol, results: &[(GeneratorSpec, SuiteReport)]) -> Comparison {
    let tol = Tolerances::for_protocol(protocol);
    let rows: Vec<Row> = results
        .iter()
        .map(|(spec, report)| Row {
            generator: spec.kind(),
            seeds: spec.seed_labels(),
            average_passing_rate: report.average_passing_rate,
            family_average_passing_rate: report.family_average_passing_rate,
            families_below_threshold: report
                .families_below_threshold()
                .iter()
                .map(|f| f.name.clone())
                .collect(),
            fraction_at_threshold: report.fraction_at_threshold(),
            published_rate: published_rate(spec.kind()),
        })
        .collect();
    let reports: BTreeMap<&str, &SuiteReport> = results.iter().map(|(s, r)| (s.kind().name(), r)).collect();
    let rate = |k: GeneratorKind| reports.get(k.name()).map(|r| r.average_passing_rate);

    let mut checks = Vec::new();
    let mut push = |name: String, outcome: Option<(bool, String)>| {
        checks.push(match outcome {
            Some((ok, detail)) => Check {
                name,
                status: Status::from_bool(ok),
                detail,
            },
            None => Check {
                name,
                status: Status::Skipped,
                detail: "generator not in this run".into(),
            },
        })
    };

    use GeneratorKind::*;
    push(
        format!("dynamical rate >= {}", tol.dynamical_min),
        rate(Dynamical).map(|r| (r >= tol.dynamical_min, format!("{r:.4}"))),
    );
    push(
        format!("logistic64 rate >= {}", tol.logistic64_min),
        rate(Logistic64).map(|r| (r >= tol.logistic64_min, format!("{r:.4}"))),
    );
    push(
        format!(
            "logistic32 rate <= {} with >= {} families below threshold",
            tol.logistic32_max, tol.logistic32_families_below
        ),
        reports.get(Logistic32.name()).map(|r| {
            let below = r.families_below_threshold().len();
            (
                r.average_passing_rate <= tol.logistic32_max && below >= tol.logistic32_families_below,
                format!("{:.4}, {below} families below", r.average_passing_rate),
            )
        }),
    );
    push(
        format!("lfsr32 linear complexity and rank <= {}", tol.lfsr_linear_max),
        reports.get(Lfsr32.name()).map(|r| {
            let lc = family_rate(r, Family::LinearComplexity);
            let rank = family_rate(r, Family::Rank);
            let applicable: Vec<f64> = [lc, rank].into_iter().flatten().collect();
            let ok = !applicable.is_empty() && applicable.iter().all(|&p| p <= tol.lfsr_linear_max);
            (ok, format!("linear complexity {}, rank {}", show(lc), show(rank)))
        }),
    );
    push(
        format!("lfsr32 remaining families >= {}", tol.lfsr_rest_min),
        reports.get(Lfsr32.name()).map(|r| {
            let rest = family_mean_excluding(r, &[Family::LinearComplexity, Family::Rank]);
            (rest >= tol.lfsr_rest_min, format!("{rest:.4}"))
        }),
    );
    let chaotic: Vec<f64> = [Dynamical, Logistic64, Logistic32]
        .into_iter()
        .filter_map(rate)
        .collect();
    push(
        format!("glibc rate < {} and below every chaotic generator", tol.glibc_max),
        rate(Glibc).filter(|_| chaotic.len() == 3).map(|g| {
            let lowest = chaotic.iter().copied().fold(f64::INFINITY, f64::min);
            (
                g < tol.glibc_max && g < lowest,
                format!("{g:.4}, lowest chaotic {lowest:.4}"),
            )
        }),
    );
    let order = [Dynamical, Logistic64, Lfsr32, Glibc, Logistic32];
    let ordered: Option<Vec<f64>> = order.into_iter().map(rate).collect();
    push(
        "dynamical >= logistic64 > lfsr32 > glibc > logistic32".into(),
        ordered.map(|r| {
            let ok = r[0] >= r[1] && r[1] > r[2] && r[2] > r[3] && r[3] > r[4];
            let text: Vec<String> = r.iter().map(|v| format!("{v:.4}")).collect();
            (ok, text.join(", "))
        }),
    );
    push(
        "dynamical above glibc and logistic32".into(),
        match (rate(Dynamical), rate(Glibc), rate(Logistic32)) {
            (Some(d), Some(g), Some(l)) => Some((d > g && d > l, format!("{d:.4} vs {g:.4}, {l:.4}"))),
            _ => None,
        },
    );
    push(
        format!(
            "dynamical at threshold on >= {:.0}% of subtests",
            tol.dynamical_subtest_fraction * 100.0
        ),
        reports.get(Dynamical.name()).map(|r| {
            let f = r.fraction_at_threshold();
            (f >= tol.dynamical_subtest_fraction, format!("{:.1}%", f * 100.0))
        }),
    );

    Comparison {
        protocol: protocol.clone(),
        threshold: protocol.threshold(),
        rows,
        checks,
    }
}

fn show(rate: Option<f64>) -> String {
    rate.map_or_else(|| "n/a".into(), |r| format!("{r:.4}"))
}

/// Side-by-side text table of measured and published rates, then the checks.
pub fn render(comparison: &Comparison) -> String {
    let p = &comparison.protocol;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "s={} n={} alpha={} threshold={:.4}{}",
        p.sequences,
        p.length,
        p.alpha,
        comparison.threshold,
        if p.reduced { " (reduced)" } else { "" }
    );
    let _ = writeln!(
        out,
        "{:<12} {:>8} {:>8} {:>10} {:>8}  below threshold",
        "generator", "rate", "family", "published", "at thr"
    );
    for row in &comparison.rows {
        let below = if row.families_below_threshold.is_empty() {
            "-".to_string()
        } else {
            row.families_below_threshold.join(", ")
        };
        let _ = writeln!(
            out,
            "{:<12} {:>8.4} {:>8.4} {:>10} {:>7.1}%  {below}",
            row.generator.name(),
            row.average_passing_rate,
            row.family_average_passing_rate,
            row.published_rate.map_or_else(|| "-".into(), |r| format!("{r:.3}")),
            row.fraction_at_threshold * 100.0,
        );
    }
    for check in &comparison.checks {
        let _ = writeln!(out, "{} {}: {}", check.status.label(), check.name, check.detail);
    }
    out
}
