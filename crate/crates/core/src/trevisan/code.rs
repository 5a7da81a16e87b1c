//! Reed-Solomon concatenated with Hadamard, evaluated one bit at a time.
//!
//! The message is cut into `m_e`-bit symbols that become the coefficients of
//! a polynomial over GF(2^m_e) (first symbol = constant term). Codeword bit
//! `u = alpha || r` (alpha = first `m_e` bits) is the GF(2) inner product of
//! the Reed-Solomon symbol `p(alpha)` with `r`. The full codeword has
//! `2^(2 m_e)` bits and is never materialized.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use crate::bitstream::BitVector;
use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};

/// Splits `message` into `width`-bit MSB-first symbols; the last symbol is
/// zero-padded on the right.
pub fn message_symbols(message: &BitVector, width: u32) -> Vec<u128> {
    let w = width as usize;
    (0..message.len().div_ceil(w))
        .map(|c| {
            let start = c * w;
            let take = w.min(message.len() - start);
            let v = message.read_uint(start, take).expect("in range");
            v << (w - take)
        })
        .collect()
}

/// Reed-Solomon symbol of `message` at evaluation point `alpha`.
pub fn rs_symbol(message: &BitVector, alpha: FieldElement) -> Result<FieldElement> {
    let field = alpha.spec();
    let symbols = message_symbols(message, field.degree());
    if field.degree() < 64 && symbols.len() > 1usize << field.degree() {
        return Err(Error::contract(format!(
            "{}-bit message has more symbols than GF(2^{}) has points",
            message.len(),
            field.degree()
        )));
    }
    field.element(field.horner(&symbols, alpha.value()))
}

/// Bit `u` of the concatenated codeword of `message` over `field`.
pub fn codeword_bit(message: &BitVector, u: &BitVector, field: FieldSpec) -> Result<bool> {
    let m = field.degree() as usize;
    if u.len() != 2 * m {
        return Err(Error::contract(format!(
            "codeword index has {} bits, GF(2^{m}) needs {}",
            u.len(),
            2 * m
        )));
    }
    let alpha = field.element(u.read_uint(0, m)?)?;
    let r = u.read_uint(m, m)?;
    let sym = rs_symbol(message, alpha)?;
    Ok((sym.value() & r).count_ones() & 1 == 1)
}

/// Counters from one extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CodeStats {
    /// GF(2^m_e) multiplications performed.
    pub gf_mults: u64,
    /// Reed-Solomon symbols computed.
    pub rs_evals: u64,
    /// Symbol lookups served by the cache.
    pub cache_hits: u64,
}

/// One-bit extractor for a fixed message: evaluates codeword bits with a
/// per-alpha cache of Reed-Solomon symbols. Safe to share across threads.
pub struct OneBitExtractor {
    field: FieldSpec,
    symbols: Vec<u128>,
    cache: RwLock<HashMap<u128, u128>>,
    gf_mults: AtomicU64,
    rs_evals: AtomicU64,
    cache_hits: AtomicU64,
}

impl OneBitExtractor {
    pub fn new(message: &BitVector, field: FieldSpec) -> Self {
        Self {
            field,
            symbols: message_symbols(message, field.degree()),
            cache: RwLock::new(HashMap::new()),
            gf_mults: AtomicU64::new(0),
            rs_evals: AtomicU64::new(0),
            cache_hits: AtomicU64::new(0),
        }
    }

    pub fn symbol(&self, alpha: u128) -> u128 {
        if let Some(&v) = self.cache.read().expect("cache lock").get(&alpha) {
            self.cache_hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        let mut it = self.symbols.iter().rev();
        let mut acc = *it.next().unwrap_or(&0);
        let mut mults = 0;
        for &c in it {
            acc = self.field.mul(acc, alpha) ^ c;
            mults += 1;
        }
        self.gf_mults.fetch_add(mults, Ordering::Relaxed);
        self.rs_evals.fetch_add(1, Ordering::Relaxed);
        *self.cache.write().expect("cache lock").entry(alpha).or_insert(acc)
    }

    pub fn bit(&self, alpha: u128, r: u128) -> bool {
        (self.symbol(alpha) & r).count_ones() & 1 == 1
    }

    pub fn stats(&self) -> CodeStats {
        CodeStats {
            gf_mults: self.gf_mults.load(Ordering::Relaxed),
            rs_evals: self.rs_evals.load(Ordering::Relaxed),
            cache_hits: self.cache_hits.load(Ordering::Relaxed),
        }
    }
}
