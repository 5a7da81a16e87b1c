//! Min-entropy of a digitized Gaussian source.
//!
//! The modeled signal is a Gaussian quantum part plus classical noise that an
//! adversary may know. Only the quantum variance counts as randomness:
//!
//! ```text
//! sigma2_quantum = gamma * sigma2_total / (1 + gamma)
//! ```
//!
//! where `gamma` is the quantum-to-classical variance ratio. The quantum
//! distribution is binned by an ADC with evenly spaced codes over
//! `[adc_min, adc_max]`; the two outermost codes also absorb the tails
//! (saturation). Min-entropy is `-log2` of the largest bin probability.

use serde::{Deserialize, Serialize};
use statrs::function::erf;

use crate::error::{Error, Result};

/// Planck constant times the speed of light, J*m.
pub const PLANCK_TIMES_C: f64 = 1.98645e-25;

/// Tolerance on the total mass of a probability list.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    /// Quantum-to-classical variance ratio.
    pub gamma: f64,
    /// Total signal variance, volts^2.
    pub sigma2_total: f64,
    /// Signal mean, volts.
    pub mean: f64,
    pub adc_bits: u32,
    pub adc_min: f64,
    pub adc_max: f64,
}

impl SourceModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::contract(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(self.sigma2_total > 0.0) {
            return Err(Error::contract(format!(
                "sigma2_total must be > 0, got {}",
                self.sigma2_total
            )));
        }
        if !(1..=16).contains(&self.adc_bits) {
            return Err(Error::contract(format!(
                "adc_bits must be in 1..=16, got {}",
                self.adc_bits
            )));
        }
        if !(self.adc_min < self.adc_max) || !self.mean.is_finite() {
            return Err(Error::contract(format!(
                "invalid ADC range [{}, {}]",
                self.adc_min, self.adc_max
            )));
        }
        Ok(())
    }

    pub fn num_codes(&self) -> usize {
        1 << self.adc_bits
    }

    /// Voltage width of one ADC code.
    pub fn bin_width(&self) -> f64 {
        (self.adc_max - self.adc_min) / self.num_codes() as f64
    }

    /// ADC code for a voltage, saturating at both ends.
    pub fn quantize(&self, volts: f64) -> u16 {
        let code = ((volts - self.adc_min) / self.bin_width()).floor();
        code.clamp(0.0, (self.num_codes() - 1) as f64) as u16
    }

    /// Bytes per sample in sample files.
    pub fn bytes_per_sample(&self) -> usize {
        if self.adc_bits <= 8 {
            1
        } else {
            2
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub sigma2_quantum: f64,
    pub bin_probs: Vec<f64>,
    pub min_entropy_bits: f64,
    pub shannon_bits: f64,
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail, `1 - normal_cdf(z)`, accurate for large `z`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erf::erfc(z / std::f64::consts::SQRT_2)
}

/// Inverse of [`normal_cdf`] for `p` in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p)
}

pub fn quantum_variance(model: &SourceModel) -> Result<f64> {
    model.validate()?;
    Ok(model.gamma * model.sigma2_total / (1.0 + model.gamma))
}

/// Probability of each ADC code for a Gaussian of the model's mean and the
/// given variance.
pub fn bin_probabilities(model: &SourceModel, variance: f64) -> Result<Vec<f64>> {
    model.validate()?;
    if !(variance > 0.0) {
        return Err(Error::contract(format!("variance must be > 0, got {variance}")));
    }
    let sigma = variance.sqrt();
    let codes = model.num_codes();
    let width = model.bin_width();
    let z = |j: usize| (model.adc_min + j as f64 * width - model.mean) / sigma;
    // mass in [z_a, z_b), using the upper tail on the right half to avoid cancellation
    let mass = |za: f64, zb: f64| {
        if za >= 0.0 {
            normal_sf(za) - normal_sf(zb)
        } else {
            normal_cdf(zb) - normal_cdf(za)
        }
    };
    let mut probs = Vec::with_capacity(codes);
    for j in 0..codes {
        let p = match j {
            0 if codes == 1 => 1.0,
            0 => normal_cdf(z(1)),
            j if j == codes - 1 => normal_sf(z(j)),
            j => mass(z(j), z(j + 1)),
        };
        probs.push(p.max(0.0));
    }
    Ok(probs)
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::contract("empty probability list"));
    }
    if probs.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::contract("negative or NaN probability"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::contract(format!("probabilities sum to {total}, not 1")));
    }
    Ok(())
}

pub fn min_entropy(probs: &[f64]) -> Result<f64> {
    check_probs(probs)?;
    let pmax = probs.iter().copied().fold(0.0f64, f64::max);
    Ok(-pmax.log2())
}

pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    check_probs(probs)?;
    Ok(-probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>())
}

/// log2 of the mean photon number in a detection window: an upper bound on
/// the entropy of one sample.
pub fn photon_bound(power_watts: f64, wavelength_m: f64, window_s: f64) -> Result<f64> {
    if !(power_watts > 0.0 && wavelength_m > 0.0 && window_s > 0.0) {
        return Err(Error::contract("photon bound inputs must all be > 0"));
    }
    Ok((power_watts * window_s * wavelength_m / PLANCK_TIMES_C).log2())
}

/// Unbiased mean and variance of ADC codes mapped to volts by
/// `code * volts_per_code + offset`.
pub fn sample_variance<T: Copy + Into<f64>>(
    samples: &[T],
    volts_per_code: f64,
    offset: f64,
) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::contract(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for (i, &s) in samples.iter().enumerate() {
        let v = s.into() * volts_per_code + offset;
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    Ok((mean, m2 / (samples.len() - 1) as f64))
}

/// Full evaluation of a source model.
pub fn evaluate(model: &SourceModel) -> Result<EntropyReport> {
    let sigma2_quantum = quantum_variance(model)?;
    let bin_probs = bin_probabilities(model, sigma2_quantum)?;
    Ok(EntropyReport {
        sigma2_quantum,
        min_entropy_bits: min_entropy(&bin_probs)?,
        shannon_bits: shannon_entropy(&bin_probs)?,
        bin_probs,
    })
}

/// Min-entropy of `input_bits` raw bits when each `bits_per_sample`-bit
/// sample carries `min_entropy_per_sample` bits.
pub fn certified_min_entropy(min_entropy_per_sample: f64, bits_per_sample: u32, input_bits: usize) -> f64 {
    input_bits as f64 * min_entropy_per_sample / bits_per_sample as f64
}
