//! Argument parsing and command dispatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bitchaos::exec::{with_jobs, Execution};
use bitchaos::generators::{GeneratorKind, GlibcExtraction, REFERENCE_MASTER_SEED};
use bitchaos::sts::{proportion_threshold, SuiteParams};
use clap::{Args, Parser, Subcommand};

use crate::commands::{
    encoded_bits, execute, parse_master, read_inputs, request_seeds, resolve_generator, split_shape, Executed,
};
use crate::config::Config;
use crate::error::{CliError, Outcome};
use crate::format::{write_output, BitFormat};
use crate::manifest::{report_text, ManifestSource, NistInput, Request, RunManifest, Timing};
use crate::reproduce::{render, Protocol, Target};

const DEFAULT_WORKDIR: &str = "bitchaos-reproduce";

#[derive(Debug, Parser)]
#[command(
    name = "bitchaos",
    version,
    about = "Dynamical logistic-map PRNG, baselines and the NIST SP 800-22 suite"
)]
pub struct Cli {
    /// JSON configuration file; flags take precedence over its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for suite and period runs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write generator output to a file.
    Gen(GenArgs),
    /// Run the test suite over a generator corpus or bit files.
    Nist(NistArgs),
    /// Rho lengths of the raw logistic map over seeded trials.
    Period(PeriodArgs),
    /// Passing rates of every generator beside the published figures.
    Reproduce(ReproduceArgs),
    /// Re-execute the request recorded in a report or manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Generator spec JSON (with "kind") or a dynamical seed file.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Master seed the reference seeds are derived from.
    #[arg(long, conflicts_with = "seed_file")]
    pub master_seed: Option<String>,
    /// glibc bit extraction: all31, lsb or bit30.
    #[arg(long, value_parser = parse_extraction)]
    pub extraction: Option<GlibcExtraction>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub generator: Option<GeneratorKind>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Number of bits to write.
    #[arg(long, alias = "count")]
    pub bits: usize,
    #[arg(long, value_enum)]
    pub format: Option<BitFormat>,
    /// Output path, or - for standard output.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the run manifest to this path.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NistArgs {
    pub generator: Option<GeneratorKind>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Bit files to test instead of a generator, concatenated in order.
    #[arg(long = "input", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<BitFormat>,
    #[arg(long)]
    pub sequences: Option<usize>,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Minimum average passing rate for exit code 0; defaults to the
    /// proportion threshold.
    #[arg(long)]
    pub floor: Option<f64>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    #[arg(long, short = 'n')]
    pub word_length: u32,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long)]
    pub master_seed: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum, default_value_t)]
    pub target: Target,
    /// Directory for the per-generator reports and the comparison.
    #[arg(long)]
    pub workdir: Option<PathBuf>,
    /// 20 sequences of 10^5 bits with relaxed tolerances.
    #[arg(long)]
    pub reduced: bool,
    /// Print the planned manifests without generating anything.
    #[arg(long)]
    pub dry_run: bool,
    #[arg(long)]
    pub sequences: Option<usize>,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub master_seed: Option<String>,
    #[arg(long, value_parser = parse_extraction)]
    pub extraction: Option<GlibcExtraction>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    /// Report envelope or bare manifest.
    pub source: PathBuf,
    /// Where to write the regenerated output; defaults to standard output
    /// for reports and the recorded path for bit files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against the recorded output instead of writing.
    #[arg(long)]
    pub check: bool,
    /// Directory for per-generator reports when rerunning a reproduction.
    #[arg(long)]
    pub workdir: Option<PathBuf>,
}

fn parse_extraction(text: &str) -> Result<GlibcExtraction, String> {
    GlibcExtraction::parse(text).ok_or_else(|| format!("unknown extraction {text:?} (expected all31, lsb or bit30)"))
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let jobs = cli.jobs.or(config.jobs);
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let ctx = Context { config, jobs };
    with_jobs(jobs, move || match cli.command {
        Command::Gen(args) => ctx.gen(args),
        Command::Nist(args) => ctx.nist(args),
        Command::Period(args) => ctx.period(args),
        Command::Reproduce(args) => ctx.reproduce(args),
        Command::Rerun(args) => ctx.rerun(args),
    })
}

struct Context {
    config: Config,
    jobs: Option<usize>,
}

impl Context {
    fn exec(&self) -> Execution {
        Execution::default()
    }

    fn master(&self, flag: Option<&str>) -> Result<u64, CliError> {
        match flag.or(self.config.master_seed.as_deref()) {
            Some(text) => parse_master(text),
            None => Ok(REFERENCE_MASTER_SEED),
        }
    }

    fn generator(
        &self,
        kind: Option<GeneratorKind>,
        seed: &SeedArgs,
    ) -> Result<bitchaos::generators::GeneratorSpec, CliError> {
        let master = match &seed.seed_file {
            Some(_) => None,
            None => Some(self.master(seed.master_seed.as_deref())?),
        };
        let is_glibc = kind == Some(GeneratorKind::Glibc);
        let extraction = seed.extraction.or(self.config.extraction.filter(|_| is_glibc));
        resolve_generator(kind, seed.seed_file.as_deref(), master, extraction)
    }

    fn manifest(
        &self,
        request: Request,
        outputs: Vec<String>,
        warnings: Vec<String>,
        started: Instant,
    ) -> Result<RunManifest, CliError> {
        let mut manifest = RunManifest::new(request.clone(), request_seeds(&request)?);
        manifest.outputs = outputs;
        manifest.jobs = self.jobs;
        manifest.warnings = warnings;
        manifest.timing = Some(Timing {
            elapsed_seconds: started.elapsed().as_secs_f64(),
        });
        Ok(manifest)
    }

    fn gen(&self, args: GenArgs) -> Result<Outcome, CliError> {
        let started = Instant::now();
        let generator = self.generator(args.generator, &args.seed)?;
        let format = args.format.or(self.config.format).unwrap_or_default();
        let request = Request::Gen {
            generator,
            bits: args.bits,
            format,
        };
        let (executed, warnings) = execute(&request, None, self.exec(), self.jobs)?;
        let Executed::Bits(bits) = executed else { unreachable!() };
        write_output(&args.out, &encoded_bits(&request, &bits))?;
        warn(&warnings);
        let manifest = self.manifest(request, vec![args.out.display().to_string()], warnings, started)?;
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Some(path) = &args.manifest {
            fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(path, e))?;
        }
        if args.out == Path::new("-") {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
        Ok(Outcome::Success)
    }

    fn nist(&self, args: NistArgs) -> Result<Outcome, CliError> {
        let started = Instant::now();
        let alpha = args.alpha.or(self.config.alpha).unwrap_or(0.01);
        let sequences = args.sequences.or(self.config.sequences);
        let length = args.length.or(self.config.length);
        let (input, sequences, length) = if args.inputs.is_empty() {
            let generator = self.generator(args.generator, &args.seed)?;
            (
                NistInput::Generator { generator },
                sequences.unwrap_or(100),
                length.unwrap_or(1_000_000),
            )
        } else {
            if args.generator.is_some() || args.seed.seed_file.is_some() || args.seed.master_seed.is_some() {
                return Err(CliError::Usage("--input cannot be combined with a generator".into()));
            }
            let format = args.format.or(self.config.format).unwrap_or_default();
            let paths: Vec<String> = args.inputs.iter().map(|p| p.display().to_string()).collect();
            let total = read_inputs(&paths, format)?.len();
            let (s, n) = split_shape(total, sequences, length)?;
            (NistInput::Files { paths, format }, s, n)
        };
        let floor = args
            .floor
            .or(self.config.floor)
            .unwrap_or_else(|| proportion_threshold(alpha, sequences));
        let request = Request::Nist {
            input,
            sequences,
            length,
            alpha,
            floor,
            params: SuiteParams::for_length(length),
        };
        let (executed, warnings) = execute(&request, None, self.exec(), self.jobs)?;
        warn(&warnings);
        if let Executed::Suite { report, .. } = &executed {
            eprintln!(
                "average passing rate {:.4} (floor {floor:.4})",
                report.average_passing_rate
            );
            for family in report.families_below_threshold() {
                eprintln!("below threshold: {}", family.name);
            }
        }
        self.write_report(&executed, request, args.report.as_deref(), warnings, started)
    }

    fn period(&self, args: PeriodArgs) -> Result<Outcome, CliError> {
        let started = Instant::now();
        let master = self.master(args.master_seed.as_deref())?;
        let request = Request::Period {
            word_length: args.word_length,
            trials: args.trials,
            master_seed: format!("{master:#x}"),
        };
        let (executed, warnings) = execute(&request, None, self.exec(), self.jobs)?;
        if let Executed::Period(summary) = &executed {
            eprintln!(
                "n={} trials={} median rho {} (min {}, max {})",
                summary.word_length, summary.trials, summary.median_rho, summary.min_rho, summary.max_rho
            );
        }
        self.write_report(&executed, request, args.report.as_deref(), warnings, started)
    }

    fn reproduce(&self, args: ReproduceArgs) -> Result<Outcome, CliError> {
        let started = Instant::now();
        let master = self.master(args.master_seed.as_deref())?;
        let mut protocol = if args.reduced {
            Protocol::reduced(master)
        } else {
            Protocol::full(master)
        };
        if !args.reduced {
            protocol.sequences = args.sequences.or(self.config.sequences).unwrap_or(protocol.sequences);
            protocol.length = args.length.or(self.config.length).unwrap_or(protocol.length);
        } else if args.sequences.is_some() || args.length.is_some() {
            return Err(CliError::Usage("--reduced fixes the sequence count and length".into()));
        }
        protocol.alpha = args.alpha.or(self.config.alpha).unwrap_or(protocol.alpha);
        let extraction = args.extraction.or(self.config.extraction).unwrap_or_default();
        let workdir = args
            .workdir
            .or(self.config.workdir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_WORKDIR));
        let request = Request::Reproduce {
            target: args.target,
            protocol: protocol.clone(),
            extraction,
        };
        let outputs: Vec<String> = crate::commands::workdir_outputs(args.target, &workdir)
            .iter()
            .map(|p| p.display().to_string())
            .collect();

        if args.dry_run {
            let planned = crate::commands::planned_manifests(&request, &outputs, self.jobs)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&planned).expect("manifests serialize")
            );
            return Ok(Outcome::Success);
        }

        let (executed, warnings) = execute(&request, Some(&workdir), self.exec(), self.jobs)?;
        let Executed::Reproduce(comparison) = &executed else {
            unreachable!()
        };
        print!("{}", render(comparison));
        let path = workdir.join("comparison.json");
        self.write_report(&executed, request, Some(&path), warnings, started)
    }

    fn rerun(&self, args: RerunArgs) -> Result<Outcome, CliError> {
        let started = Instant::now();
        let source = ManifestSource::load(&args.source)?;
        let recorded = &source.manifest;
        recorded.check_versions()?;
        let request = recorded.request.clone();
        let (executed, warnings) = execute(&request, args.workdir.as_deref(), self.exec(), self.jobs)?;
        warn(&warnings);

        if let Executed::Bits(bits) = &executed {
            let bytes = encoded_bits(&request, bits);
            let recorded_out = recorded.outputs.first().map(PathBuf::from);
            if args.check {
                let path = recorded_out.ok_or_else(|| CliError::Usage("manifest records no output file".into()))?;
                let existing = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
                return Ok(verdict(existing == bytes, &path.display().to_string()));
            }
            let out = args
                .out
                .or(recorded_out)
                .ok_or_else(|| CliError::Usage("no output path recorded; pass --out".into()))?;
            write_output(&out, &bytes)?;
            return Ok(Outcome::Success);
        }

        if args.check {
            let old = source.report.as_deref().ok_or_else(|| {
                CliError::Usage(format!("{} holds no report to check against", args.source.display()))
            })?;
            let manifest = self.manifest(request, recorded.outputs.clone(), warnings, started)?;
            let fresh = executed.body_json(manifest).expect("report-producing request");
            let fresh = report_text(&fresh).expect("own output parses");
            return Ok(verdict(fresh == old, &args.source.display().to_string()));
        }
        self.write_report(&executed, request, args.out.as_deref(), warnings, started)
    }

    fn write_report(
        &self,
        executed: &Executed,
        request: Request,
        path: Option<&Path>,
        warnings: Vec<String>,
        started: Instant,
    ) -> Result<Outcome, CliError> {
        let target = path.unwrap_or(Path::new("-"));
        let manifest = self.manifest(request, vec![target.display().to_string()], warnings, started)?;
        let json = executed.body_json(manifest).expect("report-producing request");
        write_output(target, json.as_bytes())?;
        Ok(if executed.gate_passed() {
            Outcome::Success
        } else {
            Outcome::GateFailed
        })
    }
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn verdict(identical: bool, what: &str) -> Outcome {
    if identical {
        eprintln!("{what}: regenerated output is byte-identical");
        Outcome::Success
    } else {
        eprintln!("{what}: regenerated output differs");
        Outcome::GateFailed
    }
}
