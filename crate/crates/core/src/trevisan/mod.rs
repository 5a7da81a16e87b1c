//! Trevisan's extractor.
//!
//! Output bit `i` is the codeword bit of the input at index `seed|S_i`,
//! where `S_i` is the `i`-th set of a block weak design and the code is
//! Reed-Solomon over GF(2^m_e) concatenated with Hadamard.
//!
//! ```no_run
//! use qrx_core::trevisan::{solve_params, Trevisan};
//! # use qrx_core::BitVector;
//! let params = solve_params(1 << 15, 1 << 14, 32768.0, None)?;
//! let ext = Trevisan::new(params)?;
//! # let (input, seed) = (BitVector::zeros(1 << 15), BitVector::zeros(458_752));
//! let out = ext.extract(&input, &seed)?;
//! # Ok::<(), qrx_core::Error>(())
//! ```

mod code;
mod design;
mod params;

use rayon::prelude::*;

pub use code::{codeword_bit, message_symbols, rs_symbol, CodeStats, OneBitExtractor};
pub use design::{DesignBlock, DesignSummary, WeakDesign};
pub use params::{rho, solve_params, with_rs_degree, TrevisanParams, DEFAULT_RS_DEGREE};

use crate::bitstream::BitVector;
use crate::error::{Error, Result};
use crate::gf2m::FieldSpec;

/// Output bits evaluated per parallel work item.
const PAR_CHUNK: usize = 256;

/// Output bit `i` is `codeword_bit(message, seed|S_i)`.
pub fn extract(
    message: &BitVector,
    seed: &BitVector,
    params: &TrevisanParams,
    design: &WeakDesign,
) -> Result<BitVector> {
    check_inputs(message, seed, params, design)?;
    let field = FieldSpec::standard(params.m_e)?;
    let ext = OneBitExtractor::new(message, field);
    Ok((0..params.n_f)
        .map(|i| output_bit(&ext, seed, design.set(i), params.m_e as usize))
        .collect())
}

fn check_inputs(
    message: &BitVector,
    seed: &BitVector,
    params: &TrevisanParams,
    design: &WeakDesign,
) -> Result<()> {
    if message.len() != params.n_i {
        return Err(Error::contract(format!(
            "input has {} bits, parameters expect {}",
            message.len(),
            params.n_i
        )));
    }
    if seed.len() != params.d {
        return Err(Error::contract(format!(
            "seed has {} bits, parameters expect {}",
            seed.len(),
            params.d
        )));
    }
    if !design.matches(params) {
        return Err(Error::contract("design was not built for these parameters"));
    }
    Ok(())
}

#[inline]
fn output_bit(ext: &OneBitExtractor, seed: &BitVector, set: &[u32], m_e: usize) -> bool {
    let (mut alpha, mut r) = (0u128, 0u128);
    for &idx in &set[..m_e] {
        alpha = (alpha << 1) | seed.get(idx as usize) as u128;
    }
    for &idx in &set[m_e..] {
        r = (r << 1) | seed.get(idx as usize) as u128;
    }
    ext.bit(alpha, r)
}

/// An extractor instance with its design built once.
pub struct Trevisan {
    params: TrevisanParams,
    design: WeakDesign,
    field: FieldSpec,
}

impl Trevisan {
    pub fn new(params: TrevisanParams) -> Result<Self> {
        let design = WeakDesign::build(&params)?;
        let field = FieldSpec::standard(params.m_e)?;
        Ok(Self {
            params,
            design,
            field,
        })
    }

    pub fn params(&self) -> &TrevisanParams {
        &self.params
    }

    pub fn design(&self) -> &WeakDesign {
        &self.design
    }

    pub fn extract(&self, message: &BitVector, seed: &BitVector) -> Result<BitVector> {
        self.extract_with_stats(message, seed, false).map(|(out, _)| out)
    }

    /// Evaluates output bits on the rayon pool; identical to [`extract`](Self::extract).
    pub fn extract_parallel(&self, message: &BitVector, seed: &BitVector) -> Result<BitVector> {
        self.extract_with_stats(message, seed, true).map(|(out, _)| out)
    }

    pub fn extract_with_stats(
        &self,
        message: &BitVector,
        seed: &BitVector,
        parallel: bool,
    ) -> Result<(BitVector, CodeStats)> {
        check_inputs(message, seed, &self.params, &self.design)?;
        let ext = OneBitExtractor::new(message, self.field);
        let m_e = self.params.m_e as usize;
        let n_f = self.params.n_f;
        let bits: Vec<bool> = if parallel {
            (0..n_f.div_ceil(PAR_CHUNK))
                .into_par_iter()
                .flat_map_iter(|c| {
                    let ext = &ext;
                    (c * PAR_CHUNK..((c + 1) * PAR_CHUNK).min(n_f))
                        .map(move |i| output_bit(ext, seed, self.design.set(i), m_e))
                })
                .collect()
        } else {
            (0..n_f)
                .map(|i| output_bit(&ext, seed, self.design.set(i), m_e))
                .collect()
        };
        Ok((bits.into_iter().collect(), ext.stats()))
    }

    /// Extracts every complete `n_i`-bit block of `input` with the same seed
    /// and concatenates the outputs. Returns the output, the number of
    /// trailing input bits ignored, and accumulated counters.
    pub fn extract_blocks(
        &self,
        input: &BitVector,
        seed: &BitVector,
        parallel: bool,
    ) -> Result<(BitVector, usize, CodeStats)> {
        let n_i = self.params.n_i;
        let blocks = input.len() / n_i;
        let mut out = BitVector::new();
        let mut total = CodeStats::default();
        for b in 0..blocks {
            let (bits, st) = self.extract_with_stats(&input.slice(b * n_i, n_i)?, seed, parallel)?;
            out.extend_from(&bits);
            total.gf_mults += st.gf_mults;
            total.rs_evals += st.rs_evals;
            total.cache_hits += st.cache_hits;
        }
        Ok((out, input.len() - blocks * n_i, total))
    }
}
