//! Block weak design built from polynomial graphs (Nisan-Wigderson style).
//!
//! With `q = 2^m_d`, the seed is cut into `b` blocks of `q^2` bits, each read
//! as a `q x q` grid. A polynomial `p` over GF(q) selects the cells
//! `(x, p(x))` for the first `2 m_e` field points `x`, giving a set of exactly
//! `2 m_e` seed indices. Block `t` (1-based) uses polynomials of degree below
//! `t`, so two sets in the same block share at most `t - 1` indices.
//!
//! Block capacities are `min(q, n_f)` for block 1 and `n_f / 2^(t-1)` for the
//! later blocks. That keeps `sum_{j<i} 2^|S_i & S_j| <= n_f` within every
//! block.

use serde::Serialize;

use super::params::TrevisanParams;
use crate::error::{Error, Result};
use crate::gf2m::FieldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DesignBlock {
    /// 1-based block number; also the polynomial degree bound.
    pub index: usize,
    /// Output index of the first set in this block.
    pub first_set: usize,
    pub sets: usize,
}

#[derive(Clone, Debug)]
pub struct WeakDesign {
    n_f: usize,
    set_len: usize,
    field: FieldSpec,
    blocks: Vec<DesignBlock>,
    indices: Vec<u32>,
    gf_mults: u64,
}

/// Summary suitable for reports; the full index table is regenerated from
/// the parameters instead of being stored.
#[derive(Clone, Debug, Serialize)]
pub struct DesignSummary {
    pub n_f: usize,
    pub set_len: usize,
    pub field_degree: u32,
    pub seed_len: usize,
    pub blocks: Vec<DesignBlock>,
    pub gf_mults: u64,
}

impl WeakDesign {
    pub fn build(params: &TrevisanParams) -> Result<Self> {
        Self::build_raw(params.n_f, params.m_e, params.m_d, params.b)
    }

    /// Design with `n_f` sets of `2 m_e` indices over `b` blocks of GF(2^m_d).
    pub fn build_raw(n_f: usize, m_e: u32, m_d: u32, b: usize) -> Result<Self> {
        let field = FieldSpec::standard(m_d)?;
        let q = 1usize << m_d;
        let set_len = 2 * m_e as usize;
        if set_len > q {
            return Err(Error::Construction(format!(
                "design field GF(2^{m_d}) has {q} points, sets need {set_len}"
            )));
        }
        if b == 0 || (q * q).checked_mul(b).is_none_or(|d| d > u32::MAX as usize) {
            return Err(Error::Construction(format!("invalid block count {b}")));
        }

        let mut blocks = Vec::with_capacity(b);
        let mut placed = 0;
        for t in 1..=b {
            let polys = q.checked_pow(t as u32).unwrap_or(usize::MAX);
            let cap = if t == 1 { q.min(n_f) } else { polys.min(n_f >> (t - 1)) };
            let sets = cap.min(n_f - placed);
            blocks.push(DesignBlock {
                index: t,
                first_set: placed,
                sets,
            });
            placed += sets;
        }
        if placed < n_f {
            return Err(Error::Construction(format!(
                "block capacities hold {placed} sets, {} short of n_f = {n_f}",
                n_f - placed
            )));
        }
        blocks.retain(|blk| blk.sets > 0);

        let mut indices = Vec::with_capacity(n_f * set_len);
        let mut gf_mults = 0u64;
        let mut coeffs = Vec::new();
        for blk in &blocks {
            let base = (blk.index - 1) * q * q;
            for local in 0..blk.sets {
                polynomial_digits(local, q, blk.index, &mut coeffs);
                for x in 0..set_len {
                    let (y, mults) = eval_counted(&field, &coeffs, x as u128);
                    gf_mults += mults;
                    indices.push((base + x * q + y as usize) as u32);
                }
            }
        }
        Ok(Self {
            n_f,
            set_len,
            field,
            blocks,
            indices,
            gf_mults,
        })
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn set_len(&self) -> usize {
        self.set_len
    }

    pub fn blocks(&self) -> &[DesignBlock] {
        &self.blocks
    }

    /// Seed indices of output bit `i`, in order.
    pub fn set(&self, i: usize) -> &[u32] {
        &self.indices[i * self.set_len..(i + 1) * self.set_len]
    }

    /// 1-based block hosting output bit `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .find(|b| i < b.first_set + b.sets)
            .map(|b| b.index)
            .expect("set index in range")
    }

    /// Polynomial (constant term first) that generated set `i`.
    pub fn polynomial(&self, i: usize) -> Vec<u128> {
        let blk = self.blocks.iter().find(|b| i < b.first_set + b.sets).expect("set index in range");
        let mut coeffs = Vec::new();
        polynomial_digits(i - blk.first_set, self.q(), blk.index, &mut coeffs);
        coeffs
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn q(&self) -> usize {
        1 << self.field.degree()
    }

    /// Seed bits the design indexes into.
    pub fn seed_len(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.index) * self.q() * self.q()
    }

    /// GF(2^m_d) multiplications spent building the design.
    pub fn gf_mults(&self) -> u64 {
        self.gf_mults
    }

    pub fn summary(&self) -> DesignSummary {
        DesignSummary {
            n_f: self.n_f,
            set_len: self.set_len,
            field_degree: self.field.degree(),
            seed_len: self.seed_len(),
            blocks: self.blocks.clone(),
            gf_mults: self.gf_mults,
        }
    }

    pub(crate) fn matches(&self, params: &TrevisanParams) -> bool {
        self.n_f == params.n_f
            && self.set_len == params.set_len()
            && self.field.degree() == params.m_d
            && self.seed_len() <= params.d
    }
}

/// Base-q digits of `e`, least significant first, as `len` coefficients.
fn polynomial_digits(mut e: usize, q: usize, len: usize, out: &mut Vec<u128>) {
    out.clear();
    for _ in 0..len {
        out.push((e % q) as u128);
        e /= q;
    }
}

/// Horner evaluation starting from the leading coefficient; returns the
/// value and the number of multiplications performed.
fn eval_counted(field: &FieldSpec, coeffs: &[u128], x: u128) -> (u128, u64) {
    let mut it = coeffs.iter().rev();
    let mut acc = *it.next().unwrap_or(&0);
    let mut mults = 0;
    for &c in it {
        acc = field.mul(acc, x) ^ c;
        mults += 1;
    }
    (acc, mults)
}
