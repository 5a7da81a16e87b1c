//! Toeplitz-hashing strong extractor.
//!
//! An `m x n` Toeplitz matrix is fixed by `n + m - 1` seed bits:
//!
//! ```text
//! T[i][j] = seed[i - j + n - 1],   0 <= i < m, 0 <= j < n
//! ```
//!
//! so the first row, read right to left, is `seed[0..n]` and the first column
//! is `seed[n-1..n+m-1]`. For `n = 3`, `m = 2` and seed bits `a0 a1 a2 a3`:
//!
//! ```text
//! [ a2 a1 a0 ]
//! [ a3 a2 a1 ]
//! ```
//!
//! Output bit `i` is the GF(2) inner product of row `i` with the input, which
//! is the same as `parity(seed[i..i+n] & reverse(input))`. The accelerated
//! path evaluates that window product on 64-bit words.
//!
//! Toeplitz matrices form a two-universal family, so by the Leftover Hash
//! Lemma an input with min-entropy `k` hashed to `m` bits is
//! `2^((m - k) / 2)`-close to uniform jointly with the seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitstream::BitVector;
use crate::error::{Error, Result};

/// Input block length used when none is given.
pub const DEFAULT_BLOCK_BITS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzParams {
    /// Input bits per block.
    pub n: usize,
    /// Output bits per block.
    pub m: usize,
    /// Min-entropy of one input block, bits.
    pub k: f64,
    /// log2 of the security parameter actually achieved for one block.
    pub epsilon_log2: f64,
}

impl ToeplitzParams {
    /// Sizes the extractor for an `n`-bit block with min-entropy `k` and a
    /// target security parameter `2^epsilon_log2`.
    pub fn solve(n: usize, k: f64, epsilon_log2: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::sizing("input length must be positive"));
        }
        if k > n as f64 {
            return Err(Error::sizing(format!(
                "min-entropy {k} exceeds the {n}-bit input length"
            )));
        }
        let m = output_length(k, epsilon_log2)?;
        Ok(Self {
            n,
            m,
            k,
            epsilon_log2: epsilon_of(k, m as f64)?,
        })
    }

    pub fn seed_len(&self) -> usize {
        self.n + self.m - 1
    }
}

/// Largest `m` with `m <= k + 2 log2(epsilon)`.
pub fn output_length(k: f64, epsilon_log2: f64) -> Result<usize> {
    if epsilon_log2 > 0.0 {
        return Err(Error::sizing(format!(
            "log2(epsilon) must be <= 0, got {epsilon_log2}"
        )));
    }
    let m = (k + 2.0 * epsilon_log2).floor();
    if !(m >= 1.0) {
        return Err(Error::sizing(format!(
            "insufficient min-entropy: k = {k} leaves no output at log2(epsilon) = {epsilon_log2}"
        )));
    }
    Ok(m as usize)
}

/// log2 of the security parameter `2^((m - k) / 2)`.
pub fn epsilon_of(k: f64, m: f64) -> Result<f64> {
    if m > k {
        return Err(Error::sizing(format!(
            "output length {m} exceeds min-entropy {k}"
        )));
    }
    Ok((m - k) / 2.0)
}

fn check_lengths(seed: &BitVector, input: &BitVector, m: usize) -> Result<usize> {
    let n = input.len();
    if n == 0 || m == 0 {
        return Err(Error::contract("input and output lengths must be positive"));
    }
    if seed.len() != n + m - 1 {
        return Err(Error::contract(format!(
            "seed has {} bits, a {m}x{n} Toeplitz matrix needs {}",
            seed.len(),
            n + m - 1
        )));
    }
    Ok(n)
}

/// Direct matrix-vector product, one matrix entry at a time.
pub fn extract_naive(seed: &BitVector, input: &BitVector, m: usize) -> Result<BitVector> {
    let n = check_lengths(seed, input, m)?;
    Ok((0..m)
        .map(|i| (0..n).fold(false, |acc, j| acc ^ (seed.get(i + n - 1 - j) & input.get(j))))
        .collect())
}

/// Word-parallel extraction; agrees bit for bit with [`extract_naive`].
pub fn extract(seed: &BitVector, input: &BitVector, m: usize) -> Result<BitVector> {
    check_lengths(seed, input, m)?;
    ToeplitzHasher::new(seed, input.len(), m)?.hash(input)
}

/// A Toeplitz matrix prepared for repeated hashing with one seed.
///
/// Holds 64 copies of the seed, each shifted left by `s` bits, so the
/// `n`-bit window starting at any bit offset is a run of whole words.
#[derive(Clone, Debug)]
pub struct ToeplitzHasher {
    n: usize,
    m: usize,
    in_words: usize,
    shifted: Vec<Vec<u64>>,
}

impl ToeplitzHasher {
    pub fn new(seed: &BitVector, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::contract("input and output lengths must be positive"));
        }
        if seed.len() != n + m - 1 {
            return Err(Error::contract(format!(
                "seed has {} bits, a {m}x{n} Toeplitz matrix needs {}",
                seed.len(),
                n + m - 1
            )));
        }
        let mut words = seed.to_words();
        words.push(0);
        let shifted = (0..64)
            .map(|s| {
                (0..words.len() - 1)
                    .map(|t| {
                        if s == 0 {
                            words[t]
                        } else {
                            (words[t] << s) | (words[t + 1] >> (64 - s))
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            m,
            in_words: n.div_ceil(64),
            shifted,
        })
    }

    pub fn input_len(&self) -> usize {
        self.n
    }

    pub fn output_len(&self) -> usize {
        self.m
    }

    pub fn hash(&self, input: &BitVector) -> Result<BitVector> {
        if input.len() != self.n {
            return Err(Error::contract(format!(
                "input has {} bits, hasher expects {}",
                input.len(),
                self.n
            )));
        }
        let rev = input.reversed().to_words();
        let mut out = vec![0u64; self.m.div_ceil(64)];
        for i in 0..self.m {
            let window = &self.shifted[i % 64][i / 64..i / 64 + self.in_words];
            let acc = window.iter().zip(&rev).fold(0u64, |acc, (w, x)| acc ^ (w & x));
            if acc.count_ones() & 1 == 1 {
                out[i / 64] |= 1 << (63 - i % 64);
            }
        }
        Ok(BitVector::from_words(&out, self.m))
    }

    /// Hashes consecutive `n`-bit blocks of `input` with the same seed and
    /// concatenates the results in block order. Trailing bits that do not
    /// fill a block are ignored; their count is returned.
    pub fn hash_blocks(&self, input: &BitVector, parallel: bool) -> Result<(BitVector, usize)> {
        let blocks = input.len() / self.n;
        let dropped = input.len() - blocks * self.n;
        let run = |b: usize| input.slice(b * self.n, self.n).and_then(|blk| self.hash(&blk));
        let outputs: Vec<BitVector> = if parallel {
            (0..blocks).into_par_iter().map(run).collect::<Result<_>>()?
        } else {
            (0..blocks).map(run).collect::<Result<_>>()?
        };
        let mut out = BitVector::new();
        for o in &outputs {
            out.extend_from(o);
        }
        Ok((out, dropped))
    }
}
