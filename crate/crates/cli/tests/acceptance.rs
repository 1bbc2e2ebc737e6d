//! Acceptance criteria, one pass/fail line each. Every criterion runs even
//! when an earlier one fails; the process exits non-zero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use bitchaos::exec::Execution;
use bitchaos::fxp::{FxFormat, FxWord};
use bitchaos::generators::{
    derive_seed, fill_bits, BitSource, DynamicalGenerator, GeneratorKind, GeneratorSpec, GlibcExtraction, SplitMix64,
    SplitMixBits, REFERENCE_MASTER_SEED,
};
use bitchaos::maps::{chaotic_range, logistic_step, logistic_step_raw};
use bitchaos::period::{brent_cycle, period_experiment};
use bitchaos::sts::fft::Bluestein;
use bitchaos::sts::{berlekamp_massey, spectral, Family, SuiteReport};
use bitchaos_cli::commands::{generator_request, run_nist};
use bitchaos_cli::format::{decode, encode, BitFormat};
use bitchaos_cli::main_with;
use bitchaos_cli::manifest::Request;
use bitchaos_cli::reproduce::{family_mean_excluding, family_rate, Protocol, Target};
use num_bigint::BigUint;
use support::{
    check_worked_example, direct_magnitudes, enumerate_rho, oracle_prefix, oracle_step, planted_lfsr, worked_examples,
    OracleDynamical, GOLDEN_KINDS, GOLDEN_PREFIXES,
};

const SEQUENCES: usize = 100;
const LENGTH: usize = 1_000_000;
const ALPHA: f64 = 0.01;

const DYNAMICAL_MIN_RATE: f64 = 0.97;
const LOGISTIC64_MIN_RATE: f64 = 0.95;
const LOGISTIC32_MAX_RATE: f64 = 0.55;
const LOGISTIC32_MIN_FAMILIES_BELOW: usize = 7;
const LFSR_WEAK_FAMILY_MAX: f64 = 0.05;
const LFSR_REST_MIN: f64 = 0.90;
const GLIBC_MAX_RATE: f64 = 0.60;
const DYNAMICAL_MIN_SUBTEST_FRACTION: f64 = 0.90;

const PERIOD_TRIALS: usize = 200;
const PERIOD_SPREAD: f64 = 8.0;

const ORACLE_RANDOM_CASES: usize = 100_000;
const PIPELINE_STEPS: usize = 10_000;
const PIPELINE_MASTERS: [u64; 3] = [REFERENCE_MASTER_SEED, 1, 0xDEAD_BEEF_CAFE_F00D];

const DFT_MAX_LENGTH: usize = 4096;
const DFT_RELATIVE: f64 = 1e-6;
const BM_MAX_L: usize = 64;

type Verdict = Result<String, String>;

struct Corpora {
    reports: Vec<(GeneratorKind, SuiteReport)>,
    threshold: f64,
}

impl Corpora {
    fn compute() -> Self {
        let protocol = Protocol {
            sequences: SEQUENCES,
            length: LENGTH,
            alpha: ALPHA,
            ..Protocol::full(REFERENCE_MASTER_SEED)
        };
        let specs = protocol
            .plan(Target::All, GlibcExtraction::All31)
            .expect("reference seeds");
        let reports = specs
            .iter()
            .map(|spec| {
                let started = Instant::now();
                let Request::Nist { input, params, .. } = generator_request(spec, &protocol) else {
                    unreachable!()
                };
                let (report, _) =
                    run_nist(&input, SEQUENCES, LENGTH, ALPHA, &params, Execution::default()).expect("corpus runs");
                eprintln!(
                    "  corpus {:<11} rate {:.4} ({:.0} s)",
                    spec.kind().name(),
                    report.average_passing_rate,
                    started.elapsed().as_secs_f64()
                );
                (spec.kind(), report)
            })
            .collect();
        Corpora {
            reports,
            threshold: protocol.threshold(),
        }
    }

    fn get(&self, kind: GeneratorKind) -> &SuiteReport {
        &self.reports.iter().find(|(k, _)| *k == kind).expect("planned").1
    }

    fn rate(&self, kind: GeneratorKind) -> f64 {
        self.get(kind).average_passing_rate
    }

    fn families_below(&self, kind: GeneratorKind) -> Vec<String> {
        self.get(kind)
            .families
            .iter()
            .filter(|f| f.average_passing_rate.is_some_and(|r| r < self.threshold))
            .map(|f| f.name.clone())
            .collect()
    }
}

fn all_ok(parts: Vec<(bool, String)>) -> Verdict {
    let detail = parts.iter().map(|(_, d)| d.as_str()).collect::<Vec<_>>().join("; ");
    if parts.iter().all(|(ok, _)| *ok) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn table_reproduction(c: &Corpora) -> Verdict {
    use GeneratorKind::*;
    let (dynamical, l64, l32) = (c.rate(Dynamical), c.rate(Logistic64), c.rate(Logistic32));
    let below = c.families_below(Logistic32);
    all_ok(vec![
        (dynamical >= DYNAMICAL_MIN_RATE, format!("dynamical {dynamical:.4} (>= {DYNAMICAL_MIN_RATE})")),
        (l64 >= LOGISTIC64_MIN_RATE, format!("logistic64 {l64:.4} (>= {LOGISTIC64_MIN_RATE})")),
        (
            l32 <= LOGISTIC32_MAX_RATE && below.len() >= LOGISTIC32_MIN_FAMILIES_BELOW,
            format!(
                "logistic32 {l32:.4} (<= {LOGISTIC32_MAX_RATE}) with {} of {} families below threshold (>= {LOGISTIC32_MIN_FAMILIES_BELOW})",
                below.len(),
                Family::ALL.len()
            ),
        ),
    ])
}

fn baseline_signatures(c: &Corpora) -> Verdict {
    use GeneratorKind::*;
    let lfsr = c.get(Lfsr32);
    let weak = [Family::LinearComplexity, Family::Rank];
    let lc = family_rate(lfsr, Family::LinearComplexity).unwrap_or(f64::NAN);
    let rank = family_rate(lfsr, Family::Rank).unwrap_or(f64::NAN);
    let rest = family_mean_excluding(lfsr, &weak);
    let glibc = c.rate(Glibc);
    let lowest_chaotic = [Dynamical, Logistic64, Logistic32]
        .map(|k| c.rate(k))
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    all_ok(vec![
        (
            lc <= LFSR_WEAK_FAMILY_MAX && rank <= LFSR_WEAK_FAMILY_MAX,
            format!("lfsr32 linear complexity {lc:.4}, rank {rank:.4} (<= {LFSR_WEAK_FAMILY_MAX})"),
        ),
        (
            rest >= LFSR_REST_MIN,
            format!("lfsr32 remaining families {rest:.4} (>= {LFSR_REST_MIN})"),
        ),
        (
            glibc < GLIBC_MAX_RATE && glibc < lowest_chaotic,
            format!("glibc all31 {glibc:.4} (< {GLIBC_MAX_RATE} and < lowest chaotic {lowest_chaotic:.4})"),
        ),
    ])
}

fn ordering(c: &Corpora) -> Verdict {
    use GeneratorKind::*;
    let (dynamical, glibc, l32) = (c.rate(Dynamical), c.rate(Glibc), c.rate(Logistic32));
    let subtests: Vec<f64> = c
        .get(Dynamical)
        .families
        .iter()
        .flat_map(|f| f.subtests.iter())
        .filter(|s| s.applicable_count > 0)
        .map(|s| s.proportion)
        .collect();
    let at = subtests.iter().filter(|&&p| p >= c.threshold).count();
    let fraction = at as f64 / subtests.len() as f64;
    all_ok(vec![
        (dynamical > glibc, format!("dynamical {dynamical:.4} > glibc {glibc:.4}")),
        (dynamical > l32, format!("dynamical {dynamical:.4} > logistic32 {l32:.4}")),
        (
            fraction >= DYNAMICAL_MIN_SUBTEST_FRACTION,
            format!(
                "dynamical at threshold {:.5} on {at}/{} subtests = {fraction:.3} (>= {DYNAMICAL_MIN_SUBTEST_FRACTION})",
                c.threshold,
                subtests.len()
            ),
        ),
    ])
}

fn short_periods() -> Verdict {
    let mut parts = Vec::new();
    for n in [16u32, 20] {
        let summary = period_experiment(n, PERIOD_TRIALS, REFERENCE_MASTER_SEED).map_err(|e| e.to_string())?;
        let centre = 2f64.powf(n as f64 / 2.0);
        let (lo, hi) = (centre / PERIOD_SPREAD, centre * PERIOD_SPREAD);
        let median = summary.median_rho;
        parts.push((
            (lo..=hi).contains(&median),
            format!("n={n} median rho {median} in [{lo}, {hi}]"),
        ));
    }
    let range = chaotic_range(8).map_err(|e| e.to_string())?;
    let mut mismatches = 0;
    let mut cases = 0;
    for g in range.g_min..=range.g_max {
        for x0 in 0..256u64 {
            let r = brent_cycle(|x| logistic_step_raw(x, g, 8), x0);
            if (r.mu, r.lambda) != enumerate_rho(|x| logistic_step_raw(x, g, 8), x0, 256) {
                mismatches += 1;
            }
            cases += 1;
        }
    }
    parts.push((
        mismatches == 0,
        format!("n=8 exhaustive: {mismatches} mismatches in {cases} orbits"),
    ));
    all_ok(parts)
}

fn step_mismatches(n: u32, pairs: impl Iterator<Item = (u64, u64)>) -> (usize, usize) {
    let state = FxFormat::state(n).unwrap();
    let gamma = FxFormat::gamma(n).unwrap();
    let mut count = 0;
    let mut bad = 0;
    for (x, g) in pairs {
        let want = oracle_step(&BigUint::from(x), &BigUint::from(g), n);
        let raw = logistic_step_raw(x, g, n);
        let typed = logistic_step(FxWord::from_raw(x, state).unwrap(), FxWord::from_raw(g, gamma).unwrap());
        if BigUint::from(raw) != want || BigUint::from(typed.raw()) != want {
            bad += 1;
        }
        count += 1;
    }
    (count, bad)
}

fn oracle_equivalence() -> Verdict {
    let mut parts = Vec::new();
    let (count, bad) = step_mismatches(8, (0..256u64).flat_map(|x| (0..256u64).map(move |g| (x, g))));
    parts.push((bad == 0, format!("n=8: {bad}/{count} mismatches")));
    for n in [32u32, 64] {
        let mut sm = SplitMix64::new(n as u64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let pairs = (0..ORACLE_RANDOM_CASES).map(|_| (sm.next_u64() & mask, sm.next_u64() & mask));
        let (count, bad) = step_mismatches(n, pairs);
        parts.push((bad == 0, format!("n={n}: {bad}/{count} mismatches")));
    }
    let mut bad = 0;
    for master in PIPELINE_MASTERS {
        let cfg = derive_seed(master, 32, 8, 9, 11).map_err(|e| e.to_string())?;
        let gammas: Vec<u64> = cfg.gammas.iter().map(FxWord::raw).collect();
        let mut oracle = OracleDynamical::new(32, cfg.x0.raw(), &gammas, 9, 11, cfg.partition_seed);
        let mut states = DynamicalGenerator::new(cfg.clone()).map_err(|e| e.to_string())?;
        let mut bits = DynamicalGenerator::new(cfg).map_err(|e| e.to_string())?;
        for _ in 0..PIPELINE_STEPS {
            let (x, bit) = oracle.next();
            if BigUint::from(states.next_raw()) != x || bits.next_bit() != bit {
                bad += 1;
            }
        }
    }
    parts.push((
        bad == 0,
        format!(
            "pipeline: {bad} mismatches over {PIPELINE_STEPS} steps on {} seeds",
            PIPELINE_MASTERS.len()
        ),
    ));
    all_ok(parts)
}

fn nist_correctness() -> Verdict {
    let mut parts = Vec::new();
    let examples = worked_examples();
    let failures: Vec<String> = examples
        .iter()
        .filter_map(|ex| check_worked_example(ex).err())
        .collect();
    let covered: std::collections::BTreeSet<_> = examples.iter().map(|ex| ex.family).collect();
    parts.push((
        failures.is_empty() && covered.len() == Family::ALL.len(),
        format!(
            "worked examples: {}/{} reproduced, {}/{} families covered{}",
            examples.len() - failures.len(),
            examples.len(),
            covered.len(),
            Family::ALL.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(" ({})", failures.join(", "))
            }
        ),
    ));

    let mut worst = 0f64;
    let mut statistic_ok = true;
    for (seed, n) in [
        (1u64, 10usize),
        (2, 100),
        (3, 1000),
        (4, 1024),
        (5, 2047),
        (6, 3000),
        (7, DFT_MAX_LENGTH),
    ] {
        let bits = fill_bits(&mut SplitMixBits::new(seed), n);
        let fast = spectral::spectral_magnitudes(&bits, &Bluestein::new(n));
        let slow = direct_magnitudes(&bits);
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
        let (sa, sb) = (
            spectral::spectral_statistic(n, &fast),
            spectral::spectral_statistic(n, &slow),
        );
        statistic_ok &= fast.len() == slow.len()
            && sa.observed_below == sb.observed_below
            && (sa.p_value - sb.p_value).abs() <= DFT_RELATIVE * sb.p_value;
    }
    parts.push((
        worst < DFT_RELATIVE && statistic_ok,
        format!("spectral vs direct DFT up to n={DFT_MAX_LENGTH}: worst relative error {worst:.1e}"),
    ));

    let mut sm = SplitMix64::new(0xB1A5);
    let mut wrong = Vec::new();
    for l in 1..=BM_MAX_L {
        let taps = if l == 1 {
            0
        } else {
            sm.next_u64() & ((1u64 << (l - 1)) - 1)
        };
        let block = planted_lfsr(taps, l, 2 * l + (sm.next_u64() % 200) as usize);
        if berlekamp_massey(&block) != l {
            wrong.push(l);
        }
    }
    parts.push((
        wrong.is_empty(),
        format!("Berlekamp-Massey L=1..{BM_MAX_L}: {} wrong {wrong:?}", wrong.len()),
    ));
    all_ok(parts)
}

fn run(args: &[&str]) -> u8 {
    main_with(std::iter::once("bitchaos").chain(args.iter().copied()))
}

fn determinism_and_formats() -> Verdict {
    let mut parts = Vec::new();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden");
    let mut golden_bad = Vec::new();
    for (kind, golden) in GOLDEN_KINDS.iter().zip(GOLDEN_PREFIXES) {
        let spec = GeneratorSpec::reference(*kind, REFERENCE_MASTER_SEED).map_err(|e| e.to_string())?;
        let got = fill_bits(&mut spec.build().map_err(|e| e.to_string())?, 256);
        let file = fs::read(fixtures.join(format!("{kind}.bin"))).unwrap_or_default();
        if got.to_hex() != golden || got != oracle_prefix(*kind, 256) || got.to_bytes() != file {
            golden_bad.push(kind.name());
        }
    }
    parts.push((
        golden_bad.is_empty(),
        format!(
            "golden 256-bit prefixes: {} of {} differ {golden_bad:?}",
            golden_bad.len(),
            GOLDEN_KINDS.len()
        ),
    ));

    let mut source = SplitMixBits::new(7);
    let mut round_trip_bad = 0;
    let lengths = [0usize, 1, 7, 8, 9, 63, 64, 65, 1000, 4099, 1_000_000];
    for len in lengths {
        let bits = fill_bits(&mut source, len);
        let ascii = decode(&encode(&bits, BitFormat::Ascii), BitFormat::Ascii);
        let packed = decode(&encode(&bits, BitFormat::Bin), BitFormat::Bin);
        let ok = ascii.as_ref() == Ok(&bits)
            && packed
                .as_ref()
                .is_ok_and(|p| p.len() == len.div_ceil(8) * 8 && p.slice(0, len) == bits)
            && packed.as_ref().is_ok_and(|p| {
                let via_ascii = decode(&encode(p, BitFormat::Ascii), BitFormat::Ascii).unwrap_or_default();
                encode(&via_ascii, BitFormat::Bin) == encode(&bits, BitFormat::Bin)
            });
        round_trip_bad += usize::from(!ok);
    }
    parts.push((
        round_trip_bad == 0,
        format!(
            "ascii/binary round trips: {round_trip_bad} of {} lengths differ",
            lengths.len()
        ),
    ));

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let nist = dir.path().join("nist.json").display().to_string();
    let period = dir.path().join("period.json").display().to_string();
    let written = [
        run(&[
            "nist",
            "dynamical",
            "--sequences",
            "4",
            "--length",
            "1000000",
            "--report",
            &nist,
        ]),
        run(&["period", "-n", "16", "--trials", "50", "--report", &period]),
    ];
    let checked = [run(&["rerun", &nist, "--check"]), run(&["rerun", &period, "--check"])];
    let regenerated = written.iter().all(|&c| c <= 2) && checked == [0, 0];
    parts.push((
        regenerated,
        format!("report regeneration: written {written:?}, rerun --check {checked:?} (0 means byte-identical)"),
    ));
    all_ok(parts)
}

fn report(results: &mut Vec<bool>, number: usize, title: &str, check: impl FnOnce() -> Verdict) {
    let started = Instant::now();
    let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {message}"))
    });
    let elapsed = started.elapsed().as_secs_f64();
    let (status, detail) = match &verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number} ({title}): {status}: {detail} [{elapsed:.1} s]");
    results.push(verdict.is_ok());
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let started = Instant::now();
    eprintln!("computing five corpora of {SEQUENCES} x {LENGTH} bits");
    let corpora = catch_unwind(Corpora::compute).ok();
    let with_corpora = |f: fn(&Corpora) -> Verdict| {
        let corpora = corpora.as_ref();
        move || corpora.map_or_else(|| Err("corpus computation panicked".to_string()), f)
    };

    report(&mut results, 1, "table reproduction", with_corpora(table_reproduction));
    report(
        &mut results,
        2,
        "baseline failure signatures",
        with_corpora(baseline_signatures),
    );
    report(&mut results, 3, "ordering invariant", with_corpora(ordering));
    report(&mut results, 4, "short-period claim", short_periods);
    report(&mut results, 5, "oracle equivalence", oracle_equivalence);
    report(&mut results, 6, "test-suite correctness", nist_correctness);
    report(&mut results, 7, "determinism and formats", determinism_and_formats);

    let passed = results.iter().filter(|&&ok| ok).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.0} s",
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
