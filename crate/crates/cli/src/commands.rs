//! Command execution, independent of argument parsing.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bitchaos::exec::Execution;
use bitchaos::fxp::parse_raw;
use bitchaos::generators::{fill_bits, GeneratorKind, GeneratorSpec, GlibcExtraction, SeedFile};
use bitchaos::period::{period_experiment_with, PeriodSummary};
use bitchaos::sts::{CorpusDescriptor, Suite, SuiteParams, SuiteReport};
use bitchaos::BitStream;

use crate::error::CliError;
use crate::format::{encode, read_bits};
use crate::manifest::{Envelope, NistInput, Request, RunManifest, Timing};
use crate::reproduce::{compare, Comparison, Protocol, Target};

pub const ABSORBED_WARNING: &str = "generator state reached the zero fixed point; output is constant from there on";

pub fn parse_master(text: &str) -> Result<u64, CliError> {
    parse_raw(text).ok_or_else(|| CliError::Usage(format!("masterSeed: cannot parse {text:?}")))
}

/// Builds the generator description from the seed options.
///
/// A seed file holds either a full generator spec (with `"kind"`) or a
/// dynamical seed file. Without a seed file the reference seed for `kind` is
/// derived from the master seed.
pub fn resolve_generator(
    kind: Option<GeneratorKind>,
    seed_file: Option<&Path>,
    master_seed: Option<u64>,
    extraction: Option<GlibcExtraction>,
) -> Result<GeneratorSpec, CliError> {
    let spec = match (seed_file, master_seed) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--seed-file and --master-seed are mutually exclusive".into(),
            ));
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::json(path, e))?;
            let spec = if value.get("kind").is_some() {
                serde_json::from_value::<GeneratorSpec>(value).map_err(|e| CliError::json(path, e))?
            } else {
                let seed: SeedFile = serde_json::from_value(value).map_err(|e| CliError::json(path, e))?;
                GeneratorSpec::Dynamical { seed }
            };
            if let Some(kind) = kind.filter(|&k| k != spec.kind()) {
                return Err(CliError::Usage(format!(
                    "{}: describes a {} generator, not {kind}",
                    path.display(),
                    spec.kind()
                )));
            }
            spec
        }
        (None, master) => {
            let kind = kind.ok_or_else(|| CliError::Usage("a generator or --seed-file is required".into()))?;
            GeneratorSpec::reference(kind, master.unwrap_or(bitchaos::generators::REFERENCE_MASTER_SEED))?
        }
    };
    let spec = match (spec, extraction) {
        (GeneratorSpec::Glibc { seed, .. }, Some(extraction)) => GeneratorSpec::Glibc { seed, extraction },
        (spec, Some(_)) => {
            return Err(CliError::Usage(format!(
                "--extraction applies only to glibc, not {}",
                spec.kind()
            )));
        }
        (spec, None) => spec,
    };
    spec.build()?;
    Ok(spec)
}

/// Draws `count` sequences of `length` bits from one generator instance.
pub fn generate(spec: &GeneratorSpec, count: usize, length: usize) -> Result<(Vec<BitStream>, Vec<String>), CliError> {
    let mut source = spec.build()?;
    let sequences = (0..count).map(|_| fill_bits(&mut source, length)).collect();
    let warnings = if source.absorbed() {
        vec![ABSORBED_WARNING.to_string()]
    } else {
        Vec::new()
    };
    Ok((sequences, warnings))
}

/// Bits from all files, concatenated in order.
pub fn read_inputs(paths: &[String], format: crate::format::BitFormat) -> Result<BitStream, CliError> {
    let mut all = BitStream::new();
    for path in paths {
        all.extend_from(&read_bits(Path::new(path), format)?);
    }
    Ok(all)
}

/// Sequence count and length for `total` available bits when either may be
/// left open.
pub fn split_shape(total: usize, sequences: Option<usize>, length: Option<usize>) -> Result<(usize, usize), CliError> {
    let (s, n) = match (sequences, length) {
        (Some(s), Some(n)) => (s, n),
        (None, Some(n)) => (total / n.max(1), n),
        (Some(s), None) => (s, total / s.max(1)),
        (None, None) => {
            let n = total.min(1_000_000);
            (total / n.max(1), n)
        }
    };
    if s == 0 || n == 0 {
        return Err(CliError::Usage(format!(
            "input holds {total} bits, not enough for one sequence"
        )));
    }
    if s.checked_mul(n).is_none_or(|need| need > total) {
        return Err(CliError::Usage(format!(
            "{s} sequences of {n} bits need {} bits, input holds {total}",
            s as u128 * n as u128
        )));
    }
    Ok((s, n))
}

pub fn nist_sequences(
    input: &NistInput,
    sequences: usize,
    length: usize,
) -> Result<(Vec<BitStream>, Vec<String>), CliError> {
    match input {
        NistInput::Generator { generator } => generate(generator, sequences, length),
        NistInput::Files { paths, format } => {
            let all = read_inputs(paths, *format)?;
            split_shape(all.len(), Some(sequences), Some(length))?;
            Ok((
                (0..sequences).map(|i| all.slice(i * length, length)).collect(),
                Vec::new(),
            ))
        }
    }
}

pub fn run_nist(
    input: &NistInput,
    sequences: usize,
    length: usize,
    alpha: f64,
    params: &SuiteParams,
    exec: Execution,
) -> Result<(SuiteReport, Vec<String>), CliError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Usage(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (corpus, warnings) = nist_sequences(input, sequences, length)?;
    let descriptor = CorpusDescriptor {
        generator: String::new(),
        seeds: Vec::new(),
        sequences,
        length,
    };
    let suite = Suite::prepared(params.clone(), length);
    Ok((suite.evaluate_corpus(&corpus, alpha, descriptor, exec), warnings))
}

pub fn run_period(
    word_length: u32,
    trials: usize,
    master_seed: &str,
    exec: Execution,
) -> Result<PeriodSummary, CliError> {
    Ok(period_experiment_with(
        word_length,
        trials,
        parse_master(master_seed)?,
        exec,
    )?)
}

/// The request that reproduces one generator's corpus report.
pub fn generator_request(spec: &GeneratorSpec, protocol: &Protocol) -> Request {
    Request::Nist {
        input: NistInput::Generator {
            generator: spec.clone(),
        },
        sequences: protocol.sequences,
        length: protocol.length,
        alpha: protocol.alpha,
        floor: protocol.threshold(),
        params: SuiteParams::for_length(protocol.length),
    }
}

/// Runs every generator of `target`, writing each report envelope into
/// `workdir` as soon as it completes.
pub fn run_reproduce(
    target: Target,
    protocol: &Protocol,
    extraction: GlibcExtraction,
    workdir: Option<&Path>,
    exec: Execution,
    jobs: Option<usize>,
) -> Result<Comparison, CliError> {
    if let Some(dir) = workdir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut results = Vec::new();
    for spec in protocol.plan(target, extraction)? {
        let started = Instant::now();
        let request = generator_request(&spec, protocol);
        let Request::Nist { input, params, .. } = &request else {
            unreachable!()
        };
        let (report, warnings) = run_nist(input, protocol.sequences, protocol.length, protocol.alpha, params, exec)?;
        let elapsed = started.elapsed().as_secs_f64();
        eprintln!(
            "{:<12} rate {:.4}  ({elapsed:.1} s)",
            spec.kind().name(),
            report.average_passing_rate
        );
        for w in &warnings {
            eprintln!("warning: {}: {w}", spec.kind());
        }
        if let Some(dir) = workdir {
            let path = dir.join(format!("{}.json", spec.kind()));
            let mut manifest = RunManifest::new(request, spec.seed_labels());
            manifest.outputs = vec![path.display().to_string()];
            manifest.jobs = jobs;
            manifest.warnings = warnings;
            manifest.timing = Some(Timing {
                elapsed_seconds: elapsed,
            });
            let envelope = Envelope {
                manifest,
                report: &report,
            };
            fs::write(&path, envelope.to_json()).map_err(|e| CliError::io(&path, e))?;
        }
        results.push((spec, report));
    }
    Ok(compare(protocol, &results))
}

/// Output of executing a request.
#[derive(Debug)]
pub enum Executed {
    Bits(BitStream),
    Suite { report: SuiteReport, floor: f64 },
    Period(PeriodSummary),
    Reproduce(Comparison),
}

impl Executed {
    pub fn body_json(&self, manifest: RunManifest) -> Option<String> {
        match self {
            Executed::Bits(_) => None,
            Executed::Suite { report, .. } => Some(Envelope { manifest, report }.to_json()),
            Executed::Period(summary) => Some(
                Envelope {
                    manifest,
                    report: summary,
                }
                .to_json(),
            ),
            Executed::Reproduce(comparison) => Some(
                Envelope {
                    manifest,
                    report: comparison,
                }
                .to_json(),
            ),
        }
    }

    pub fn gate_passed(&self) -> bool {
        match self {
            Executed::Suite { report, floor } => report.average_passing_rate >= *floor,
            Executed::Reproduce(comparison) => comparison.passed(),
            Executed::Bits(_) | Executed::Period(_) => true,
        }
    }
}

/// Executes `request`; returns the output and any warnings.
pub fn execute(
    request: &Request,
    workdir: Option<&Path>,
    exec: Execution,
    jobs: Option<usize>,
) -> Result<(Executed, Vec<String>), CliError> {
    Ok(match request {
        Request::Gen { generator, bits, .. } => {
            let (mut seqs, warnings) = generate(generator, 1, *bits)?;
            (Executed::Bits(seqs.pop().unwrap_or_default()), warnings)
        }
        Request::Nist {
            input,
            sequences,
            length,
            alpha,
            floor,
            params,
        } => {
            let (report, warnings) = run_nist(input, *sequences, *length, *alpha, params, exec)?;
            (Executed::Suite { report, floor: *floor }, warnings)
        }
        Request::Period {
            word_length,
            trials,
            master_seed,
        } => (
            Executed::Period(run_period(*word_length, *trials, master_seed, exec)?),
            Vec::new(),
        ),
        Request::Reproduce {
            target,
            protocol,
            extraction,
        } => (
            Executed::Reproduce(run_reproduce(*target, protocol, *extraction, workdir, exec, jobs)?),
            Vec::new(),
        ),
    })
}

/// Seed labels recorded in the manifest for `request`.
pub fn request_seeds(request: &Request) -> Result<Vec<String>, CliError> {
    Ok(match request {
        Request::Gen { generator, .. }
        | Request::Nist {
            input: NistInput::Generator { generator },
            ..
        } => generator.seed_labels(),
        Request::Nist { .. } => Vec::new(),
        Request::Period { master_seed, .. } => vec![format!("masterSeed={master_seed}")],
        Request::Reproduce {
            target,
            protocol,
            extraction,
        } => protocol
            .plan(*target, *extraction)?
            .iter()
            .flat_map(|spec| {
                spec.seed_labels()
                    .into_iter()
                    .map(move |l| format!("{}: {l}", spec.kind()))
            })
            .collect(),
    })
}

/// Encoded bits for a `gen` request.
pub fn encoded_bits(request: &Request, bits: &BitStream) -> Vec<u8> {
    match request {
        Request::Gen { format, .. } => encode(bits, *format),
        _ => Vec::new(),
    }
}

pub fn workdir_outputs(target: Target, dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = target.kinds().iter().map(|k| dir.join(format!("{k}.json"))).collect();
    out.push(dir.join("comparison.json"));
    out
}

/// One manifest per generator of a reproduction, then the reproduction's own.
pub fn planned_manifests(
    request: &Request,
    outputs: &[String],
    jobs: Option<usize>,
) -> Result<Vec<RunManifest>, CliError> {
    let Request::Reproduce {
        target,
        protocol,
        extraction,
    } = request
    else {
        return Err(CliError::Usage("only reproductions have a plan".into()));
    };
    let mut planned = Vec::new();
    for (spec, output) in protocol.plan(*target, *extraction)?.iter().zip(outputs) {
        let mut m = RunManifest::new(generator_request(spec, protocol), spec.seed_labels());
        m.outputs = vec![output.clone()];
        m.jobs = jobs;
        planned.push(m);
    }
    let mut top = RunManifest::new(request.clone(), request_seeds(request)?);
    top.outputs = outputs.to_vec();
    top.jobs = jobs;
    planned.push(top);
    Ok(planned)
}
