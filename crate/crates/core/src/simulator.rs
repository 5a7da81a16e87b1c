//! Reproducible synthetic QRNG source.
//!
//! Each sample is `mean + quantum + classical`, digitized by the modeled ADC.
//! The quantum part is Gaussian with the variance implied by the model's
//! `gamma`; the classical part has variance `sigma2_total / (1 + gamma)` and
//! is drawn independently. Randomness comes from ChaCha20 seeded with a
//! 64-bit value, and Gaussian draws use the inverse normal CDF from
//! [`entropy`](crate::entropy), so simulator and model share numerics.

use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::entropy::{normal_quantile, quantum_variance, SourceModel};
use crate::error::{Error, Result};

/// Identifier recorded in sample metadata.
pub const PRNG_ALGORITHM: &str = "chacha20/rand_chacha-0.9/seed_from_u64";

/// Default drift period, in samples.
pub const DEFAULT_DRIFT_PERIOD: f64 = 1000.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassicalNoise {
    Gaussian,
    /// Deterministic sinusoid with the classical variance.
    SinusoidalDrift { period_samples: f64 },
    /// Fixed offset; contributes no variance.
    Constant { value: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: SourceModel,
    pub classical: ClassicalNoise,
    pub prng_seed: u64,
    pub n_samples: usize,
}

impl SimConfig {
    pub fn classical_variance(&self) -> f64 {
        self.model.sigma2_total / (1.0 + self.model.gamma)
    }
}

/// One generated sample with its components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub quantum: f64,
    pub classical: f64,
    pub code: u16,
}

/// Iterator over the samples of a configuration.
pub struct SampleStream<'a> {
    config: &'a SimConfig,
    rng: ChaCha20Rng,
    sigma_quantum: f64,
    sigma_classical: f64,
    t: usize,
}

impl<'a> SampleStream<'a> {
    pub fn new(config: &'a SimConfig) -> Result<Self> {
        let sigma_quantum = quantum_variance(&config.model)?.sqrt();
        if let ClassicalNoise::SinusoidalDrift { period_samples } = config.classical {
            if !(period_samples > 0.0) {
                return Err(Error::contract("drift period must be > 0"));
            }
        }
        Ok(Self {
            config,
            rng: ChaCha20Rng::seed_from_u64(config.prng_seed),
            sigma_quantum,
            sigma_classical: config.classical_variance().sqrt(),
            t: 0,
        })
    }

    fn standard_normal(&mut self) -> f64 {
        // uniform in (0, 1), never 0 or 1
        let u = ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        normal_quantile(u)
    }
}

impl Iterator for SampleStream<'_> {
    type Item = Sample;

    fn next(&mut self) -> Option<Sample> {
        if self.t >= self.config.n_samples {
            return None;
        }
        let quantum = self.sigma_quantum * self.standard_normal();
        let classical = match self.config.classical {
            ClassicalNoise::Gaussian => self.sigma_classical * self.standard_normal(),
            ClassicalNoise::SinusoidalDrift { period_samples } => {
                let amplitude = self.sigma_classical * std::f64::consts::SQRT_2;
                amplitude * (std::f64::consts::TAU * self.t as f64 / period_samples).sin()
            }
            ClassicalNoise::Constant { value } => value,
        };
        self.t += 1;
        let code = self.config.model.quantize(self.config.model.mean + quantum + classical);
        Some(Sample {
            quantum,
            classical,
            code,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.config.n_samples - self.t;
        (left, Some(left))
    }
}

/// ADC codes for `config`; deterministic in `prng_seed`.
pub fn generate(config: &SimConfig) -> Result<Vec<u16>> {
    Ok(SampleStream::new(config)?.map(|s| s.code).collect())
}

/// One byte per sample up to 8 ADC bits, else two bytes little-endian.
pub fn encode_samples(samples: &[u16], adc_bits: u32) -> Vec<u8> {
    if adc_bits <= 8 {
        samples.iter().map(|&s| s as u8).collect()
    } else {
        samples.iter().flat_map(|s| s.to_le_bytes()).collect()
    }
}

pub fn decode_samples(data: &[u8], adc_bits: u32) -> Result<Vec<u16>> {
    if adc_bits <= 8 {
        return Ok(data.iter().map(|&b| b as u16).collect());
    }
    if !data.len().is_multiple_of(2) {
        return Err(Error::format("odd byte count in a 16-bit sample file"));
    }
    Ok(data.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect())
}

/// Sidecar metadata written next to every sample file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub prng_algorithm: String,
    pub bytes_per_sample: usize,
    pub config: SimConfig,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn write_samples(path: impl AsRef<Path>, samples: &[u16], config: &SimConfig) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_samples(samples, config.model.adc_bits))?;
    let meta = SampleMetadata {
        prng_algorithm: PRNG_ALGORITHM.to_string(),
        bytes_per_sample: config.model.bytes_per_sample(),
        config: config.clone(),
    };
    let json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    fs::write(sidecar_path(path), json + "\n")?;
    Ok(())
}

pub fn read_samples(path: impl AsRef<Path>, adc_bits: u32) -> Result<Vec<u16>> {
    decode_samples(&fs::read(path)?, adc_bits)
}

pub fn read_metadata(path: impl AsRef<Path>) -> Result<SampleMetadata> {
    let text = fs::read_to_string(sidecar_path(path.as_ref()))?;
    serde_json::from_str(&text).map_err(|e| Error::format(format!("sample metadata: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::sample_variance;

    fn config(gamma: f64, classical: ClassicalNoise, n: usize) -> SimConfig {
        SimConfig {
            model: SourceModel {
                gamma,
                sigma2_total: 0.04,
                mean: 0.0,
                adc_bits: 8,
                adc_min: -1.0,
                adc_max: 1.0,
            },
            classical,
            prng_seed: 2012,
            n_samples: n,
        }
    }

    #[test]
    fn pure_quantum_variance_is_recovered() {
        let c = config(1e12, ClassicalNoise::Constant { value: 0.0 }, 1_000_000);
        let codes = generate(&c).unwrap();
        let w = c.model.bin_width();
        let (_, var) = sample_variance(&codes, w, c.model.adc_min + w / 2.0).unwrap();
        assert!((var / 0.04 - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn vanishing_variance_gives_constant_code() {
        let mut c = config(1.0, ClassicalNoise::Gaussian, 1000);
        c.model.sigma2_total = 1e-30;
        c.model.mean = 0.3;
        let codes = generate(&c).unwrap();
        let expected = c.model.quantize(0.3);
        assert!(codes.iter().all(|&x| x == expected));
    }

    #[test]
    fn deterministic_in_seed() {
        let c = config(2.0, ClassicalNoise::Gaussian, 10_000);
        assert_eq!(generate(&c).unwrap(), generate(&c).unwrap());
        let mut other = c.clone();
        other.prng_seed += 1;
        assert_ne!(generate(&c).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn classical_variance_matches_decomposition() {
        for kind in [
            ClassicalNoise::Gaussian,
            ClassicalNoise::SinusoidalDrift { period_samples: 997.0 },
        ] {
            let c = config(3.0, kind.clone(), 1_000_000);
            let classical: Vec<f64> = SampleStream::new(&c).unwrap().map(|s| s.classical).collect();
            let (_, var) = sample_variance(&classical, 1.0, 0.0).unwrap();
            assert!((var / c.classical_variance() - 1.0).abs() < 0.01, "{kind:?}: {var}");
        }
    }

    #[test]
    fn sample_files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(2.0, ClassicalNoise::Gaussian, 500);
        let codes = generate(&c).unwrap();
        let p = dir.path().join("s.bin");
        write_samples(&p, &codes, &c).unwrap();
        assert_eq!(fs::metadata(&p).unwrap().len(), 500);
        assert_eq!(read_samples(&p, 8).unwrap(), codes);
        let meta = read_metadata(&p).unwrap();
        assert_eq!(meta.config, c);
        assert_eq!(meta.prng_algorithm, PRNG_ALGORITHM);

        let wide = vec![0u16, 1, 4095, 300];
        assert_eq!(encode_samples(&wide, 12), vec![0, 0, 1, 0, 0xFF, 0x0F, 0x2C, 0x01]);
        assert_eq!(decode_samples(&encode_samples(&wide, 12), 12).unwrap(), wide);
        assert!(decode_samples(&[1, 2, 3], 12).is_err());
    }
}
