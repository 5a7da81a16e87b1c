//! End-to-end orchestration shared by the command-line tool and tests:
//! configuration, block-partitioned extraction with a provenance manifest,
//! and throughput profiling.
//!
//! # Configuration grammar
//!
//! A configuration file is flat `key = value` text, one entry per line.
//! Blank lines and lines starting with `#` are ignored; whitespace around
//! keys and values is trimmed. Unknown or repeated keys are errors. The
//! canonical form lists the set keys in the order of [`CONFIG_KEYS`] with
//! values in their shortest round-trip spelling, so parsing and re-printing
//! a canonical file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitstream::{encode_native, BitVector, FileFormat};
use crate::entropy::{self, SourceModel};
use crate::error::{Error, Result};
use crate::simulator::{ClassicalNoise, SimConfig, DEFAULT_DRIFT_PERIOD};
use crate::toeplitz::{ToeplitzHasher, ToeplitzParams, DEFAULT_BLOCK_BITS};
use crate::trevisan::{self, Trevisan, TrevisanParams};

pub const DEFAULT_EPSILON_LOG2: f64 = -100.0;
pub const DEFAULT_TREVISAN_NI: usize = 1 << 15;
pub const DEFAULT_TREVISAN_NF: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtractorKind {
    #[default]
    Toeplitz,
    Trevisan,
}

impl FromStr for ExtractorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toeplitz" => Ok(Self::Toeplitz),
            "trevisan" => Ok(Self::Trevisan),
            other => Err(Error::contract(format!("unknown extractor {other:?}"))),
        }
    }
}

impl std::fmt::Display for ExtractorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Toeplitz => "toeplitz",
            Self::Trevisan => "trevisan",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalKind {
    Gaussian,
    Sinusoidal,
    Constant,
}

impl FromStr for ClassicalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "sinusoidal" => Ok(Self::Sinusoidal),
            "constant" => Ok(Self::Constant),
            other => Err(Error::contract(format!("unknown classical noise kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Sinusoidal => "sinusoidal",
            Self::Constant => "constant",
        })
    }
}

/// Every recognised configuration key, in canonical order.
pub const CONFIG_KEYS: &[&str] = &[
    "gamma",
    "sigma2_total",
    "mean",
    "adc_bits",
    "adc_min",
    "adc_max",
    "classical",
    "drift_period",
    "classical_value",
    "samples",
    "prng_seed",
    "extractor",
    "n",
    "k",
    "eps_log2",
    "ni",
    "nf",
    "blocks",
    "in",
    "out",
    "seed_file",
    "format",
    "alpha",
    "threads",
];

/// Pipeline settings; unset fields fall back to documented defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineConfig {
    pub gamma: Option<f64>,
    pub sigma2_total: Option<f64>,
    pub mean: Option<f64>,
    pub adc_bits: Option<u32>,
    pub adc_min: Option<f64>,
    pub adc_max: Option<f64>,
    pub classical: Option<ClassicalKind>,
    pub drift_period: Option<f64>,
    pub classical_value: Option<f64>,
    pub samples: Option<usize>,
    pub prng_seed: Option<u64>,
    pub extractor: Option<ExtractorKind>,
    /// Toeplitz input block length.
    pub n: Option<usize>,
    /// Min-entropy per input block.
    pub k: Option<f64>,
    pub eps_log2: Option<f64>,
    pub ni: Option<usize>,
    pub nf: Option<usize>,
    /// Maximum number of input blocks to process.
    pub blocks: Option<usize>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed_file: Option<PathBuf>,
    pub format: Option<FileFormat>,
    pub alpha: Option<f64>,
    pub threads: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::format(format!("invalid value {v:?} for key {key:?}")))
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::format(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key.to_string()) {
                return Err(Error::format(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
            seen.push(key.to_string());
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "gamma" => self.gamma = Some(parse_value(key, v)?),
            "sigma2_total" => self.sigma2_total = Some(parse_value(key, v)?),
            "mean" => self.mean = Some(parse_value(key, v)?),
            "adc_bits" => self.adc_bits = Some(parse_value(key, v)?),
            "adc_min" => self.adc_min = Some(parse_value(key, v)?),
            "adc_max" => self.adc_max = Some(parse_value(key, v)?),
            "classical" => self.classical = Some(parse_value(key, v)?),
            "drift_period" => self.drift_period = Some(parse_value(key, v)?),
            "classical_value" => self.classical_value = Some(parse_value(key, v)?),
            "samples" => self.samples = Some(parse_value(key, v)?),
            "prng_seed" => self.prng_seed = Some(parse_value(key, v)?),
            "extractor" => self.extractor = Some(parse_value(key, v)?),
            "n" => self.n = Some(parse_value(key, v)?),
            "k" => self.k = Some(parse_value(key, v)?),
            "eps_log2" => self.eps_log2 = Some(parse_value(key, v)?),
            "ni" => self.ni = Some(parse_value(key, v)?),
            "nf" => self.nf = Some(parse_value(key, v)?),
            "blocks" => self.blocks = Some(parse_value(key, v)?),
            "in" => self.input = Some(PathBuf::from(v)),
            "out" => self.output = Some(PathBuf::from(v)),
            "seed_file" => self.seed_file = Some(PathBuf::from(v)),
            "format" => self.format = Some(parse_value(key, v)?),
            "alpha" => self.alpha = Some(parse_value(key, v)?),
            "threads" => self.threads = Some(parse_value(key, v)?),
            other => return Err(Error::format(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<String> {
        fn s<T: ToString>(v: &Option<T>) -> Option<String> {
            v.as_ref().map(ToString::to_string)
        }
        fn p(v: &Option<PathBuf>) -> Option<String> {
            v.as_ref().map(|p| p.display().to_string())
        }
        match key {
            "gamma" => s(&self.gamma),
            "sigma2_total" => s(&self.sigma2_total),
            "mean" => s(&self.mean),
            "adc_bits" => s(&self.adc_bits),
            "adc_min" => s(&self.adc_min),
            "adc_max" => s(&self.adc_max),
            "classical" => s(&self.classical),
            "drift_period" => s(&self.drift_period),
            "classical_value" => s(&self.classical_value),
            "samples" => s(&self.samples),
            "prng_seed" => s(&self.prng_seed),
            "extractor" => s(&self.extractor),
            "n" => s(&self.n),
            "k" => s(&self.k),
            "eps_log2" => s(&self.eps_log2),
            "ni" => s(&self.ni),
            "nf" => s(&self.nf),
            "blocks" => s(&self.blocks),
            "in" => p(&self.input),
            "out" => p(&self.output),
            "seed_file" => p(&self.seed_file),
            "format" => s(&self.format),
            "alpha" => s(&self.alpha),
            "threads" => s(&self.threads),
            _ => None,
        }
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for key in CONFIG_KEYS {
            if let Some(v) = self.get(key) {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
        out
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &PipelineConfig) {
        for key in CONFIG_KEYS {
            if let Some(v) = other.get(key) {
                self.set(key, &v).expect("value printed by get parses");
            }
        }
    }

    /// Source model; unset fields use a 1 V, 8-bit reference converter
    /// observing a Gaussian of 0.2 V standard deviation with `gamma = 10`.
    pub fn source_model(&self) -> SourceModel {
        SourceModel {
            gamma: self.gamma.unwrap_or(10.0),
            sigma2_total: self.sigma2_total.unwrap_or(0.04),
            mean: self.mean.unwrap_or(0.0),
            adc_bits: self.adc_bits.unwrap_or(8),
            adc_min: self.adc_min.unwrap_or(-1.0),
            adc_max: self.adc_max.unwrap_or(1.0),
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        let classical = match self.classical.unwrap_or(ClassicalKind::Gaussian) {
            ClassicalKind::Gaussian => ClassicalNoise::Gaussian,
            ClassicalKind::Sinusoidal => ClassicalNoise::SinusoidalDrift {
                period_samples: self.drift_period.unwrap_or(DEFAULT_DRIFT_PERIOD),
            },
            ClassicalKind::Constant => ClassicalNoise::Constant {
                value: self.classical_value.unwrap_or(0.0),
            },
        };
        SimConfig {
            model: self.source_model(),
            classical,
            prng_seed: self.prng_seed.unwrap_or(0),
            n_samples: self.samples.unwrap_or(1_000_000),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(crate::stattests::DEFAULT_ALPHA)
    }

    /// Min-entropy of one raw input bit under the source model. Sample files
    /// store each code in `bytes_per_sample` whole bytes.
    pub fn entropy_per_input_bit(&self) -> Result<f64> {
        let model = self.source_model();
        let report = entropy::evaluate(&model)?;
        Ok(report.min_entropy_bits / (8 * model.bytes_per_sample()) as f64)
    }

    /// Toeplitz sizing: `k` from the config if given, else from the model.
    pub fn toeplitz_params(&self) -> Result<ToeplitzParams> {
        let n = self.n.unwrap_or(DEFAULT_BLOCK_BITS);
        let k = match self.k {
            Some(k) => k,
            None => n as f64 * self.entropy_per_input_bit()?,
        };
        ToeplitzParams::solve(n, k, self.eps_log2.unwrap_or(DEFAULT_EPSILON_LOG2))
    }

    pub fn trevisan_params(&self) -> Result<TrevisanParams> {
        let ni = self.ni.unwrap_or(DEFAULT_TREVISAN_NI);
        let nf = self.nf.unwrap_or(DEFAULT_TREVISAN_NF);
        let k = match self.k {
            Some(k) => k,
            None => ni as f64 * self.entropy_per_input_bit()?,
        };
        trevisan::solve_params(ni, nf, k, self.eps_log2)
    }

    pub fn extractor_plan(&self) -> Result<ExtractorPlan> {
        Ok(match self.extractor.unwrap_or_default() {
            ExtractorKind::Toeplitz => ExtractorPlan::Toeplitz(self.toeplitz_params()?),
            ExtractorKind::Trevisan => ExtractorPlan::Trevisan(self.trevisan_params()?),
        })
    }
}

/// A fully sized extractor.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "extractor", content = "params", rename_all = "lowercase")]
pub enum ExtractorPlan {
    Toeplitz(ToeplitzParams),
    Trevisan(TrevisanParams),
}

impl ExtractorPlan {
    pub fn kind(&self) -> ExtractorKind {
        match self {
            Self::Toeplitz(_) => ExtractorKind::Toeplitz,
            Self::Trevisan(_) => ExtractorKind::Trevisan,
        }
    }

    pub fn block_input_bits(&self) -> usize {
        match self {
            Self::Toeplitz(p) => p.n,
            Self::Trevisan(p) => p.n_i,
        }
    }

    pub fn block_output_bits(&self) -> usize {
        match self {
            Self::Toeplitz(p) => p.m,
            Self::Trevisan(p) => p.n_f,
        }
    }

    pub fn seed_len(&self) -> usize {
        match self {
            Self::Toeplitz(p) => p.seed_len(),
            Self::Trevisan(p) => p.d,
        }
    }

    pub fn epsilon_log2(&self) -> f64 {
        match self {
            Self::Toeplitz(p) => p.epsilon_log2,
            Self::Trevisan(p) => p.epsilon_log2,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            Self::Toeplitz(_) => Vec::new(),
            Self::Trevisan(p) => p.warnings(),
        }
    }
}

/// Security parameter of `blocks` independent blocks, each `2^per_block`-close:
/// errors add, so the total is `blocks * 2^per_block`.
pub fn total_epsilon_log2(per_block: f64, blocks: usize) -> f64 {
    if blocks == 0 {
        f64::NEG_INFINITY
    } else {
        per_block + (blocks as f64).log2()
    }
}

/// Provenance record written next to every extraction output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionManifest {
    pub tool_version: String,
    #[serde(flatten)]
    pub plan: ExtractorPlan,
    pub block_input_bits: usize,
    pub block_output_bits: usize,
    pub blocks: usize,
    pub dropped_input_bits: usize,
    pub output_bits: usize,
    pub epsilon_log2_per_block: f64,
    pub epsilon_log2_total: f64,
    pub input_sha256: String,
    pub seed_sha256: String,
    pub output_sha256: String,
    pub warnings: Vec<String>,
}

impl ExtractionManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

/// SHA-256 of the native encoding of `bits`, hex.
pub fn digest(bits: &BitVector) -> String {
    Sha256::digest(encode_native(bits))
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// `len` pseudorandom bits from ChaCha20 seeded with `seed`.
///
/// Suitable for reproducible fixtures and demonstration seeds only; a
/// production extractor seed must come from a true random source.
pub fn prng_bits(len: usize, seed: u64) -> BitVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut bytes = vec![0u8; len.div_ceil(8)];
    rng.fill_bytes(&mut bytes);
    if !len.is_multiple_of(8) {
        if let Some(last) = bytes.last_mut() {
            *last &= 0xFFu8 << (8 - len % 8);
        }
    }
    BitVector::from_payload(bytes, len).expect("padding cleared")
}

/// Runs `plan` over consecutive blocks of `input` with one seed.
/// `max_blocks` limits how many blocks are processed. Output is independent
/// of `parallel`.
pub fn run_extraction(
    plan: &ExtractorPlan,
    input: &BitVector,
    seed: &BitVector,
    max_blocks: Option<usize>,
    parallel: bool,
) -> Result<(BitVector, ExtractionManifest)> {
    if seed.len() != plan.seed_len() {
        return Err(Error::contract(format!(
            "seed file has {} bits, {} needs {}",
            seed.len(),
            plan.kind(),
            plan.seed_len()
        )));
    }
    let block = plan.block_input_bits();
    let available = input.len() / block;
    let blocks = max_blocks.map_or(available, |m| m.min(available));
    if blocks == 0 {
        return Err(Error::contract(format!(
            "input has {} bits, less than one {block}-bit block",
            input.len()
        )));
    }
    let used = input.slice(0, blocks * block)?;
    let output = match plan {
        ExtractorPlan::Toeplitz(p) => ToeplitzHasher::new(seed, p.n, p.m)?.hash_blocks(&used, parallel)?.0,
        ExtractorPlan::Trevisan(p) => Trevisan::new(p.clone())?.extract_blocks(&used, seed, parallel)?.0,
    };

    let mut warnings = plan.warnings();
    let zero_blocks = (0..blocks)
        .filter(|&b| used.slice(b * block, block).map(|s| s.count_ones() == 0).unwrap_or(false))
        .count();
    if zero_blocks > 0 {
        warnings.push(format!(
            "degenerate input: {zero_blocks} all-zero block(s) map to all-zero output under a linear extractor"
        ));
    }
    if seed.count_ones() == 0 {
        warnings.push("degenerate seed: all-zero seed".to_string());
    }

    let per_block = plan.epsilon_log2();
    let manifest = ExtractionManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        plan: plan.clone(),
        block_input_bits: block,
        block_output_bits: plan.block_output_bits(),
        blocks,
        dropped_input_bits: input.len() - blocks * block,
        output_bits: output.len(),
        epsilon_log2_per_block: per_block,
        epsilon_log2_total: total_epsilon_log2(per_block, blocks),
        input_sha256: digest(input),
        seed_sha256: digest(seed),
        output_sha256: digest(&output),
        warnings,
    };
    Ok((output, manifest))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Throughput {
    pub extractor: ExtractorKind,
    pub block_input_bits: usize,
    pub block_output_bits: usize,
    pub blocks: usize,
    pub seconds: f64,
    pub output_bits_per_second: f64,
}

/// Times Toeplitz extraction of `blocks` pseudorandom `n`-bit blocks to `m` bits.
pub fn bench_toeplitz(n: usize, m: usize, blocks: usize, parallel: bool) -> Result<Throughput> {
    let seed = prng_bits(n + m - 1, 1);
    let input = prng_bits(n * blocks, 2);
    let hasher = ToeplitzHasher::new(&seed, n, m)?;
    let start = Instant::now();
    let (out, _) = hasher.hash_blocks(&input, parallel)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(Throughput {
        extractor: ExtractorKind::Toeplitz,
        block_input_bits: n,
        block_output_bits: m,
        blocks,
        seconds,
        output_bits_per_second: out.len() as f64 / seconds,
    })
}

/// One row of the Trevisan speed profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrevisanProfileRow {
    pub log2_nf: u32,
    pub n_i: usize,
    pub n_f: usize,
    pub m_e: u32,
    pub m_d: u32,
    pub b: usize,
    pub design_gf_mults: u64,
    pub design_gf_mults_theoretical: u64,
    pub design_gf_mults_per_output_bit: f64,
    pub design_seconds: f64,
    pub code_gf_mults: u64,
    pub code_gf_mults_theoretical: u64,
    pub code_gf_mults_per_output_bit: f64,
    pub extract_seconds: f64,
    pub output_bits_per_second: f64,
}

/// Profiles one Trevisan block with `n_i = 2 n_f` and the default code field.
pub fn profile_trevisan(log2_nf: u32, parallel: bool) -> Result<TrevisanProfileRow> {
    let n_f = 1usize << log2_nf;
    let n_i = 2 * n_f;
    let params = trevisan::solve_params(n_i, n_f, n_i as f64, None)?;
    let start = Instant::now();
    let ext = Trevisan::new(params.clone())?;
    let design_seconds = start.elapsed().as_secs_f64();
    let design_theoretical: u64 = ext
        .design()
        .blocks()
        .iter()
        .map(|b| (b.sets * ext.design().set_len() * (b.index - 1)) as u64)
        .sum();
    let seed = prng_bits(params.d, 3);
    let input = prng_bits(n_i, 4);
    let start = Instant::now();
    let (out, stats) = ext.extract_with_stats(&input, &seed, parallel)?;
    let extract_seconds = start.elapsed().as_secs_f64();
    let code_theoretical = (n_f * (params.message_symbols() - 1)) as u64;
    Ok(TrevisanProfileRow {
        log2_nf,
        n_i,
        n_f,
        m_e: params.m_e,
        m_d: params.m_d,
        b: params.b,
        design_gf_mults: ext.design().gf_mults(),
        design_gf_mults_theoretical: design_theoretical,
        design_gf_mults_per_output_bit: ext.design().gf_mults() as f64 / n_f as f64,
        design_seconds,
        code_gf_mults: stats.gf_mults,
        code_gf_mults_theoretical: code_theoretical,
        code_gf_mults_per_output_bit: stats.gf_mults as f64 / n_f as f64,
        extract_seconds,
        output_bits_per_second: out.len() as f64 / extract_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_roundtrip_is_canonical() {
        let text = "# demo\nextractor = trevisan\n alpha=0.010\nk = 3430\ngamma = 1e1\nin = data/raw.bin\n";
        let cfg = PipelineConfig::parse(text).unwrap();
        assert_eq!(cfg.extractor, Some(ExtractorKind::Trevisan));
        assert_eq!(cfg.alpha, Some(0.01));
        let canon = cfg.to_canonical_string();
        assert_eq!(canon, "gamma = 10\nextractor = trevisan\nk = 3430\nin = data/raw.bin\nalpha = 0.01\n");
        assert_eq!(PipelineConfig::parse(&canon).unwrap().to_canonical_string(), canon);
    }

    proptest::proptest! {
        #[test]
        fn canonical_form_is_a_fixed_point(
            gamma in proptest::option::of(1e-6f64..1e9),
            mean in proptest::option::of(-5.0f64..5.0),
            k in proptest::option::of(0.0f64..1e6),
            eps in proptest::option::of(-500.0f64..-0.001),
            adc_bits in proptest::option::of(1u32..16),
            seed in proptest::option::of(proptest::num::u64::ANY),
            trevisan in proptest::bool::ANY,
            path in "[a-z0-9_./-]{1,20}",
        ) {
            let cfg = PipelineConfig {
                gamma, mean, k, eps_log2: eps, adc_bits, prng_seed: seed,
                extractor: Some(if trevisan { ExtractorKind::Trevisan } else { ExtractorKind::Toeplitz }),
                input: Some(PathBuf::from(path)),
                ..Default::default()
            };
            let text = cfg.to_canonical_string();
            let parsed = PipelineConfig::parse(&text).unwrap();
            proptest::prop_assert_eq!(&parsed, &cfg);
            proptest::prop_assert_eq!(parsed.to_canonical_string(), text);
        }
    }

    #[test]
    fn config_errors() {
        assert!(PipelineConfig::parse("bogus = 1").is_err());
        assert!(PipelineConfig::parse("k = 1\nk = 2").is_err());
        assert!(PipelineConfig::parse("k 1").is_err());
        assert!(PipelineConfig::parse("adc_bits = eight").is_err());
        assert!(PipelineConfig::parse("extractor = sha").is_err());
    }

    #[test]
    fn overlay_prefers_later_values() {
        let mut base = PipelineConfig::parse("k = 1\nalpha = 0.05").unwrap();
        let flags = PipelineConfig {
            k: Some(2.0),
            ..Default::default()
        };
        base.overlay(&flags);
        assert_eq!((base.k, base.alpha), (Some(2.0), Some(0.05)));
    }

    #[test]
    fn reference_sizing_through_config() {
        let cfg = PipelineConfig {
            k: Some(3430.0),
            eps_log2: Some(-100.0),
            ..Default::default()
        };
        let p = cfg.toeplitz_params().unwrap();
        assert_eq!((p.n, p.m, p.seed_len()), (4096, 3230, 7325));
    }

    #[test]
    fn prng_bits_are_deterministic_and_padded() {
        let a = prng_bits(13, 9);
        assert_eq!(a, prng_bits(13, 9));
        assert_eq!(a.len(), 13);
        assert_ne!(prng_bits(64, 1), prng_bits(64, 2));
    }

    #[test]
    fn zero_input_manifest_warns() {
        let plan = ExtractorPlan::Toeplitz(ToeplitzParams::solve(64, 40.0, -5.0).unwrap());
        let seed = prng_bits(plan.seed_len(), 1);
        let (out, manifest) = run_extraction(&plan, &BitVector::zeros(200), &seed, None, false).unwrap();
        assert_eq!(out, BitVector::zeros(3 * 30));
        assert_eq!(manifest.blocks, 3);
        assert_eq!(manifest.dropped_input_bits, 8);
        assert!(manifest.warnings.iter().any(|w| w.contains("degenerate input")));
        assert!((manifest.epsilon_log2_total - (-5.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn seed_length_is_checked() {
        let plan = ExtractorPlan::Toeplitz(ToeplitzParams::solve(64, 40.0, -5.0).unwrap());
        assert!(matches!(
            run_extraction(&plan, &BitVector::zeros(64), &BitVector::zeros(10), None, false),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn digest_depends_on_length() {
        assert_ne!(digest(&BitVector::zeros(8)), digest(&BitVector::zeros(7)));
        assert_eq!(digest(&BitVector::new()).len(), 64);
    }
}
