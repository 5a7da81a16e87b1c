//! `qrx`: simulate a QRNG source, model its entropy, size and run an
//! extractor, and test the result.
//!
//! Every command prints JSON on stdout. Failures print one line on stderr,
//! `error: <code>: <message>`, and exit with
//! 2 (sizing or contract), 3 (I/O or malformed file) or 4 (statistical
//! test failure).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qrx_core::bitstream::{read_bits, write_bits};
use qrx_core::pipeline::{self, ClassicalKind, ExtractorKind, ExtractorPlan, PipelineConfig};
use qrx_core::simulator;
use qrx_core::stattests::{self, autocorrelation, bits_as_series, run_battery, run_segmented};
use qrx_core::{entropy, Error, FileFormat};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qrx", version, about = "QRNG postprocessing: entropy modelling, seeded extraction, testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Generate simulated ADC samples (raw bytes plus a JSON sidecar).
    Simulate,
    /// Evaluate the source model and the certified min-entropy of one input block.
    Entropy,
    /// Solve extractor parameters.
    Params,
    /// Extract from a bit file, writing output and a manifest.
    Extract,
    /// Run the statistical battery; exits 4 on failure.
    Test {
        /// Split the input into this many sequences.
        #[arg(long, default_value_t = 1)]
        segments: usize,
        /// Sequences each test must pass; defaults to 98% of the segments.
        #[arg(long)]
        min_pass: Option<usize>,
    },
    /// Autocorrelation coefficients of a bit file or a sample file.
    Autocorr {
        #[arg(long, default_value_t = 100)]
        max_lag: usize,
        /// Treat the input as simulator samples rather than bits.
        #[arg(long)]
        samples_input: bool,
    },
    /// Write the whole bytes of a bit file as raw binary for external suites.
    Export,
    /// Throughput and GF(2^m) operation counts.
    Bench {
        /// log2 of the Trevisan output lengths to profile.
        #[arg(long, value_delimiter = ',', default_value = "10,11,12,13,14")]
        nf_log2: Vec<u32>,
        /// Toeplitz blocks to time.
        #[arg(long, default_value_t = 200)]
        toeplitz_blocks: usize,
    },
    /// Write a pseudorandom seed of the length the extractor needs.
    /// For testing only: production seeds must come from a true random source.
    Seed,
    /// Print the effective configuration in canonical form.
    Config,
}

#[derive(Args, Default)]
struct Opts {
    /// Configuration file (key = value lines); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed_file: Option<PathBuf>,
    /// Bit file format: native or raw.
    #[arg(long, global = true)]
    format: Option<FileFormat>,
    #[arg(long, global = true, conflicts_with = "trevisan")]
    toeplitz: bool,
    #[arg(long, global = true)]
    trevisan: bool,
    /// Min-entropy of one input block.
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps_log2: Option<f64>,
    /// Toeplitz input block length.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    ni: Option<usize>,
    #[arg(long, global = true)]
    nf: Option<usize>,
    /// Maximum number of input blocks to extract.
    #[arg(long, global = true)]
    blocks: Option<usize>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Worker threads; never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    sigma2_total: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mean: Option<f64>,
    #[arg(long, global = true)]
    adc_bits: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    adc_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    adc_max: Option<f64>,
    /// Classical noise: gaussian, sinusoidal or constant.
    #[arg(long, global = true)]
    classical: Option<ClassicalKind>,
    #[arg(long, global = true)]
    drift_period: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    classical_value: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    prng_seed: Option<u64>,
}

impl Opts {
    fn to_config(&self) -> PipelineConfig {
        let extractor = if self.trevisan {
            Some(ExtractorKind::Trevisan)
        } else if self.toeplitz {
            Some(ExtractorKind::Toeplitz)
        } else {
            None
        };
        PipelineConfig {
            gamma: self.gamma,
            sigma2_total: self.sigma2_total,
            mean: self.mean,
            adc_bits: self.adc_bits,
            adc_min: self.adc_min,
            adc_max: self.adc_max,
            classical: self.classical,
            drift_period: self.drift_period,
            classical_value: self.classical_value,
            samples: self.samples,
            prng_seed: self.prng_seed,
            extractor,
            n: self.n,
            k: self.k,
            eps_log2: self.eps_log2,
            ni: self.ni,
            nf: self.nf,
            blocks: self.blocks,
            input: self.input.clone(),
            output: self.out.clone(),
            seed_file: self.seed_file.clone(),
            format: self.format,
            alpha: self.alpha,
            threads: self.threads,
        }
    }
}

/// A statistical battery reported failures.
#[derive(Debug)]
struct StatisticalFailure(String);

impl std::fmt::Display for StatisticalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StatisticalFailure {}

fn load_config(opts: &Opts) -> Result<PipelineConfig> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            PipelineConfig::parse(&text)?
        }
        None => PipelineConfig::default(),
    };
    cfg.overlay(&opts.to_config());
    Ok(cfg)
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Contract(format!("missing --{flag}")).into())
}

fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.opts)?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("starting worker pool")?;
    }
    let format = cfg.format.unwrap_or_default();
    match cli.command {
        Command::Simulate => {
            let out = require(&cfg.output, "out")?;
            let sim = cfg.sim_config();
            let codes = simulator::generate(&sim)?;
            simulator::write_samples(out, &codes, &sim)?;
            print_json(&json!({
                "samples": codes.len(),
                "bytes_per_sample": sim.model.bytes_per_sample(),
                "output": out.display().to_string(),
                "metadata": simulator::sidecar_path(out).display().to_string(),
                "prng_algorithm": simulator::PRNG_ALGORITHM,
            }))
        }
        Command::Entropy => {
            let model = cfg.source_model();
            let report = entropy::evaluate(&model)?;
            let plan = cfg.extractor_plan().ok();
            let input_bits = plan.as_ref().map_or(cfg.n.unwrap_or(4096), ExtractorPlan::block_input_bits);
            let bits_per_sample = 8 * model.bytes_per_sample() as u32;
            print_json(&json!({
                "model": model,
                "sigma2_quantum": report.sigma2_quantum,
                "min_entropy_bits_per_sample": report.min_entropy_bits,
                "shannon_bits_per_sample": report.shannon_bits,
                "max_bin_probability": report.bin_probs.iter().cloned().fold(0.0, f64::max),
                "stored_bits_per_sample": bits_per_sample,
                "input_bits": input_bits,
                "certified_k": entropy::certified_min_entropy(report.min_entropy_bits, bits_per_sample, input_bits),
            }))
        }
        Command::Params => {
            let plan = cfg.extractor_plan()?;
            let mut warnings = plan.warnings();
            let mut budget = serde_json::Value::Null;
            if let Some(blocks) = cfg.blocks {
                let total = pipeline::total_epsilon_log2(plan.epsilon_log2(), blocks);
                if total >= 0.0 {
                    warnings.push(format!("epsilon budget exhausted: {blocks} blocks give log2(epsilon) = {total:.2}"));
                }
                budget = json!({ "blocks": blocks, "epsilon_log2_total": total });
            }
            print_json(&json!({
                "plan": plan,
                "seed_bits": plan.seed_len(),
                "block_input_bits": plan.block_input_bits(),
                "block_output_bits": plan.block_output_bits(),
                "epsilon_budget": budget,
                "warnings": warnings,
            }))
        }
        Command::Extract => {
            let plan = cfg.extractor_plan()?;
            let input = read_bits(require(&cfg.input, "in")?, format)?;
            let seed = read_bits(require(&cfg.seed_file, "seed-file")?, FileFormat::Native)?;
            let out = require(&cfg.output, "out")?;
            let (bits, manifest) = pipeline::run_extraction(&plan, &input, &seed, cfg.blocks, true)?;
            let out_format = if bits.len() % 8 == 0 { format } else { FileFormat::Native };
            write_bits(&bits, out, out_format)?;
            fs::write(manifest_path(out), manifest.to_json())?;
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            print_json(&manifest)
        }
        Command::Test { segments, min_pass } => {
            let bits = read_bits(require(&cfg.input, "in")?, format)?;
            let alpha = cfg.alpha();
            if segments <= 1 {
                let report = run_battery(&bits, alpha)?;
                print_json(&report)?;
                let failed: Vec<&str> =
                    report.results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
                if !failed.is_empty() {
                    return Err(StatisticalFailure(format!("failed: {}", failed.join(", "))).into());
                }
            } else {
                let min_pass = min_pass.unwrap_or((segments * 98).div_ceil(100));
                let report = run_segmented(&bits, segments, alpha)?;
                print_json(&json!({ "min_pass": min_pass, "report": report }))?;
                let failed: Vec<String> = report
                    .tests
                    .iter()
                    .filter(|t| t.passed_segments < min_pass)
                    .map(|t| format!("{} ({}/{segments})", t.name, t.passed_segments))
                    .collect();
                if !failed.is_empty() {
                    return Err(StatisticalFailure(format!("below {min_pass}/{segments}: {}", failed.join(", "))).into());
                }
            }
            Ok(())
        }
        Command::Autocorr { max_lag, samples_input } => {
            let path = require(&cfg.input, "in")?;
            let report = if samples_input {
                let codes = simulator::read_samples(path, cfg.source_model().adc_bits)?;
                autocorrelation(&codes, max_lag)?
            } else {
                autocorrelation(&bits_as_series(&read_bits(path, format)?), max_lag)?
            };
            print_json(&report)
        }
        Command::Export => {
            let bits = read_bits(require(&cfg.input, "in")?, format)?;
            let out = require(&cfg.output, "out")?;
            let whole = bits.len() / 8 * 8;
            stattests::export_raw(&bits.slice(0, whole)?, out)?;
            print_json(&json!({ "bytes": whole / 8, "dropped_bits": bits.len() - whole }))
        }
        Command::Bench { nf_log2, toeplitz_blocks } => {
            let plan = cfg.toeplitz_params().or_else(|_| qrx_core::ToeplitzParams::solve(4096, 3430.0, -100.0))?;
            let toeplitz = pipeline::bench_toeplitz(plan.n, plan.m, toeplitz_blocks, true)?;
            let trevisan = nf_log2
                .iter()
                .map(|&l| pipeline::profile_trevisan(l, true))
                .collect::<qrx_core::Result<Vec<_>>>()?;
            print_json(&json!({ "toeplitz": toeplitz, "trevisan": trevisan }))
        }
        Command::Seed => {
            let plan = cfg.extractor_plan()?;
            let out = require(&cfg.output, "out")?;
            let seed = pipeline::prng_bits(plan.seed_len(), cfg.prng_seed.unwrap_or(0));
            write_bits(&seed, out, FileFormat::Native)?;
            eprintln!("warning: pseudorandom seed; use a true random source in production");
            print_json(&json!({ "seed_bits": seed.len(), "seed_sha256": pipeline::digest(&seed) }))
        }
        Command::Config => {
            emit(&cfg.to_canonical_string())
        }
    }
}

/// Exit status and short code for an error chain.
fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    if err.downcast_ref::<StatisticalFailure>().is_some() {
        return (4, "statistical-failure");
    }
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Io(_) | Error::Format(_) => (3, e.code()),
            _ => (2, e.code()),
        };
    }
    if err.chain().any(|c| c.is::<std::io::Error>()) {
        return (3, "io");
    }
    (2, "contract")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (status, code) = classify(&err);
            let msg = format!("{err:#}").replace('\n', " ");
            eprintln!("error: {code}: {msg}");
            ExitCode::from(status)
        }
    }
}

