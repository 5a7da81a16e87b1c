use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::MAX_DEGREE;

/// Reed-Solomon field degree used when no security parameter is requested.
pub const DEFAULT_RS_DEGREE: u32 = 128;

/// Complete parameter bundle for one Trevisan extractor instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrevisanParams {
    /// Input bits.
    pub n_i: usize,
    /// Output bits.
    pub n_f: usize,
    /// Min-entropy of the input, bits.
    pub k: f64,
    pub epsilon_log2: f64,
    /// Degree of the Reed-Solomon field GF(2^m_e).
    pub m_e: u32,
    /// Degree of the design field GF(2^m_d).
    pub m_d: u32,
    /// Number of seed blocks.
    pub b: usize,
    /// Seed length, bits.
    pub d: usize,
    /// Extraction ratio; below 1 the output is longer than the certified
    /// extractable entropy.
    pub rho: f64,
    /// log2 of the concatenated codeword length, `2 * m_e`.
    pub n_bar_log2: u32,
}

fn exact_log2(v: usize, what: &str) -> Result<u32> {
    if v == 0 || !v.is_power_of_two() {
        return Err(Error::contract(format!("{what} = {v} must be a power of two")));
    }
    Ok(v.trailing_zeros())
}

/// Solves the parameter set for an `n_i`-bit input with min-entropy `k`
/// and `n_f` output bits.
///
/// With an explicit `epsilon_log2` the Reed-Solomon degree is the smallest
/// `m_e` satisfying `m_e >= log n_i + 2 log n_f - 2 log eps + 4`. Without
/// one, `m_e` is [`DEFAULT_RS_DEGREE`] and epsilon follows from
/// `eps = sqrt(2^(4 - m_e) * n_i * n_f^2)`.
pub fn solve_params(n_i: usize, n_f: usize, k: f64, epsilon_log2: Option<f64>) -> Result<TrevisanParams> {
    let log_ni = exact_log2(n_i, "n_i")?;
    let log_nf = exact_log2(n_f, "n_f")?;
    if n_f >= n_i {
        return Err(Error::contract(format!(
            "output length n_f = {n_f} must be below input length n_i = {n_i}"
        )));
    }
    let fixed = (log_ni + 2 * log_nf + 4) as f64;
    let (m_e, eps) = match epsilon_log2 {
        Some(eps) => {
            if !(eps < 0.0) {
                return Err(Error::sizing(format!("log2(epsilon) must be < 0, got {eps}")));
            }
            let m_e = (fixed - 2.0 * eps).ceil();
            if m_e > MAX_DEGREE as f64 {
                return Err(Error::sizing(format!(
                    "code field degree {m_e} needed for log2(epsilon) = {eps} exceeds {MAX_DEGREE}"
                )));
            }
            (m_e as u32, eps)
        }
        None => {
            let m_e = DEFAULT_RS_DEGREE;
            let eps = (fixed - m_e as f64) / 2.0;
            if eps >= 0.0 {
                return Err(Error::sizing(format!(
                    "no epsilon < 1 reachable with m_e <= {MAX_DEGREE} for n_i = {n_i}, n_f = {n_f}"
                )));
            }
            (m_e, eps)
        }
    };
    // the code degree must close the relation it was solved from
    debug_assert!((fixed - 2.0 * eps).ceil() as u32 <= m_e);
    with_rs_degree(n_i, n_f, k, eps, m_e)
}

/// Builds a parameter set for a fixed Reed-Solomon degree. Used directly for
/// small instances that do not follow the power-of-two regime.
pub fn with_rs_degree(n_i: usize, n_f: usize, k: f64, epsilon_log2: f64, m_e: u32) -> Result<TrevisanParams> {
    if !(1..=MAX_DEGREE).contains(&m_e) {
        return Err(Error::sizing(format!("code field degree {m_e} outside 1..={MAX_DEGREE}")));
    }
    if n_i == 0 || n_f == 0 {
        return Err(Error::contract("input and output lengths must be positive"));
    }
    if n_f as f64 > k {
        return Err(Error::sizing(format!(
            "output length n_f = {n_f} exceeds the input min-entropy k = {k}"
        )));
    }
    let chunks_needed = n_i.div_ceil(m_e as usize);
    if m_e < 64 && chunks_needed > (1usize << m_e) {
        return Err(Error::sizing(format!(
            "a {n_i}-bit message does not fit a Reed-Solomon code over GF(2^{m_e})"
        )));
    }
    let m_d = ceil_log2(2 * m_e as usize);
    let b = (ceil_log2(n_f) as i64 - m_d as i64 + 1).max(1) as usize;
    let block_len = 1usize << (2 * m_d);
    let d = block_len
        .checked_mul(b)
        .filter(|&d| d <= u32::MAX as usize)
        .ok_or_else(|| Error::sizing("seed length overflows"))?;
    Ok(TrevisanParams {
        n_i,
        n_f,
        k,
        epsilon_log2,
        m_e,
        m_d,
        b,
        d,
        rho: rho(k, n_f, epsilon_log2, d),
        n_bar_log2: 2 * m_e,
    })
}

/// `rho = [k - 3 log2(n_f / eps) - d - 3] / n_f`.
pub fn rho(k: f64, n_f: usize, epsilon_log2: f64, d: usize) -> f64 {
    let nf = n_f as f64;
    (k - 3.0 * (nf.log2() - epsilon_log2) - d as f64 - 3.0) / nf
}

fn ceil_log2(v: usize) -> u32 {
    assert!(v > 0);
    usize::BITS - (v - 1).leading_zeros()
}

impl TrevisanParams {
    /// Seed bits per design block, `2^(2 m_d)`.
    pub fn block_seed_len(&self) -> usize {
        1 << (2 * self.m_d)
    }

    /// Bits selected from the seed for one output bit.
    pub fn set_len(&self) -> usize {
        2 * self.m_e as usize
    }

    /// Reed-Solomon message symbols per input block.
    pub fn message_symbols(&self) -> usize {
        self.n_i.div_ceil(self.m_e as usize)
    }

    /// Operator-facing caveats about this parameter set.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.rho < 1.0 {
            out.push(format!(
                "rho = {:.4} < 1: output length exceeds the certified extractable min-entropy",
                self.rho
            ));
        }
        if self.d > self.n_f {
            out.push(format!(
                "seed ({} bits) is longer than the output ({} bits); a hashing extractor would be needed to recycle it",
                self.d, self.n_f
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_parameter_set() {
        let p = solve_params(1 << 15, 1 << 14, (1 << 15) as f64, None).unwrap();
        assert_eq!((p.m_e, p.m_d, p.b, p.d), (128, 8, 7, 458_752));
        assert_eq!(p.d, 4 * 128 * 128 * 7);
        assert_eq!(p.epsilon_log2, -40.5);
        assert_eq!(p.n_bar_log2, 256);
        // the relation closes exactly at m_e = 128
        assert_eq!((15.0 + 28.0 - 2.0 * p.epsilon_log2 + 4.0f64).ceil(), 128.0);
        assert!(p.rho < 1.0);
        assert!(!p.warnings().is_empty());
    }

    #[test]
    fn explicit_epsilon_sets_code_degree() {
        let p = solve_params(1 << 15, 1 << 14, 1e6, Some(-40.5)).unwrap();
        assert_eq!(p.m_e, 128);
        let p = solve_params(1 << 10, 1 << 6, 1e4, Some(-10.0)).unwrap();
        assert_eq!(p.m_e, 10 + 12 + 20 + 4);
        assert_eq!(p.m_d, 7);
        assert!(matches!(
            solve_params(1 << 15, 1 << 14, 1e6, Some(-50.0)),
            Err(Error::Sizing(_))
        ));
    }

    #[test]
    fn guards() {
        assert!(matches!(
            solve_params(1 << 15, 1 << 14, 1000.0, None),
            Err(Error::Sizing(_))
        ));
        assert!(matches!(solve_params(1000, 1 << 8, 1e4, None), Err(Error::Contract(_))));
        assert!(matches!(solve_params(1 << 8, 1 << 8, 1e4, None), Err(Error::Contract(_))));
    }

    #[test]
    fn rho_examples() {
        let (nf, eps, d) = (1024usize, -20.0, 5000usize);
        let k = nf as f64 + 3.0 * (10.0 + 20.0) + d as f64 + 3.0;
        assert!((rho(k, nf, eps, d) - 1.0).abs() < 1e-12);
        assert!(rho(k - nf as f64, nf, eps, d).abs() < 1e-12);
        // input min-entropy equal to the full input length at the reference set
        let r = rho(32768.0, 1 << 14, -40.5, 458_752);
        let direct = (32768.0 - 3.0 * (14.0 + 40.5) - 458_752.0 - 3.0) / 16384.0;
        assert!((r - direct).abs() < 1e-12 && r < 1.0);
    }

    #[test]
    fn toy_field() {
        let p = with_rs_degree(4, 8, 8.0, -1.0, 2).unwrap();
        assert_eq!((p.m_d, p.b, p.d), (2, 2, 32));
        assert!(with_rs_degree(9, 2, 8.0, -1.0, 2).is_err());
    }

    proptest! {
        #[test]
        fn seed_length_bound(log_ni in 4u32..24, dn in 1u32..10, eps in -60.0f64..-0.5, use_eps: bool) {
            prop_assume!(dn < log_ni);
            let (n_i, n_f) = (1usize << log_ni, 1usize << (log_ni - dn));
            let e = if use_eps { Some(eps) } else { None };
            if let Ok(p) = solve_params(n_i, n_f, n_i as f64, e) {
                let log_nbar = p.n_bar_log2 as usize;
                prop_assert!(p.d >= log_nbar * log_nbar * p.b);
                prop_assert!(1usize << p.m_d >= 2 * p.m_e as usize);
            }
        }
    }
}
