//! Arithmetic in binary extension fields GF(2^m), 1 <= m <= 128.
//!
//! Elements are `u128` values read as polynomials over GF(2): bit `i` is the
//! coefficient of `x^i`. A field is fixed by an irreducible polynomial of
//! degree `m`, stored *without* its leading `x^m` term so that it fits in `m`
//! bits. For example GF(2^8) with `x^8 + x^4 + x^3 + x + 1` has `poly = 0x1B`.
//!
//! Multiplication has two paths that must agree bit for bit: a shift-and-XOR
//! reference and a carry-less multiply followed by folding reduction. The
//! latter uses `PCLMULQDQ` when the CPU has it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 128;

/// Built-in reduction polynomials (low terms only).
const STANDARD_POLYS: &[(u32, u128)] = &[
    (2, 0b11),          // x^2 + x + 1
    (4, 0b11),          // x^4 + x + 1
    (8, 0x1B),          // x^8 + x^4 + x^3 + x + 1 (AES)
    (16, 0x100B),       // x^16 + x^12 + x^3 + x + 1
    (32, 0x40_0007),    // x^32 + x^22 + x^2 + x + 1
    (64, 0x1B),         // x^64 + x^4 + x^3 + x + 1
    (128, 0x87),        // x^128 + x^7 + x^2 + x + 1 (GCM)
];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    degree: u32,
    poly: u128,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; x^{} + {:#x})", self.degree, self.degree, self.poly)
    }
}

impl FieldSpec {
    /// Field defined by `x^degree + poly`. Irreducibility is checked: by
    /// trial division for degree <= 16, by Rabin's test above that.
    pub fn new(degree: u32, poly: u128) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::contract(format!(
                "field degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        if poly & !mask(degree) != 0 {
            return Err(Error::contract(format!(
                "reduction polynomial {poly:#x} has terms at or above x^{degree}"
            )));
        }
        if !is_irreducible(degree, poly) {
            return Err(Error::contract(format!(
                "x^{degree} + {poly:#x} is not irreducible"
            )));
        }
        Ok(Self { degree, poly })
    }

    /// The built-in field of the given degree. Degrees without a table entry
    /// get the irreducible polynomial of lowest weight, then lowest value.
    pub fn standard(degree: u32) -> Result<Self> {
        if let Some(&(_, poly)) = STANDARD_POLYS.iter().find(|(d, _)| *d == degree) {
            return Ok(Self { degree, poly });
        }
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::contract(format!(
                "field degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let poly = find_irreducible(degree)
            .ok_or_else(|| Error::contract(format!("no sparse irreducible of degree {degree}")))?;
        Ok(Self { degree, poly })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Reduction polynomial without the leading term.
    pub fn poly(&self) -> u128 {
        self.poly
    }

    /// Mask of the `degree` low bits.
    pub fn mask(&self) -> u128 {
        mask(self.degree)
    }

    pub fn element(&self, value: u128) -> Result<FieldElement> {
        if value & !self.mask() != 0 {
            return Err(Error::contract(format!(
                "value {value:#x} does not fit in GF(2^{})",
                self.degree
            )));
        }
        Ok(FieldElement { spec: *self, value })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { spec: *self, value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { spec: *self, value: 1 }
    }

    /// Product of two reduced values, shift-and-XOR.
    pub fn mul_reference(&self, a: u128, b: u128) -> u128 {
        let top = 1u128 << (self.degree - 1);
        let mask = self.mask();
        let (mut a, mut b, mut r) = (a, b, 0u128);
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            let carry = a & top != 0;
            a = (a << 1) & mask;
            if carry {
                a ^= self.poly;
            }
        }
        r
    }

    /// Product of two reduced values via carry-less multiplication.
    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        debug_assert!(a & !self.mask() == 0 && b & !self.mask() == 0);
        if self.degree <= 64 {
            self.reduce_narrow(clmul64(a as u64, b as u64))
        } else {
            let (hi, lo) = clmul128(a, b);
            self.reduce_wide(hi, lo)
        }
    }

    pub fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut acc = 1u128;
        let mut sq = base;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        acc
    }

    /// Horner evaluation of `coeffs` (constant term first) at `x`.
    #[inline]
    pub fn horner(&self, coeffs: &[u128], x: u128) -> u128 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    #[inline]
    fn reduce_narrow(&self, mut p: u128) -> u128 {
        let m = self.degree;
        let mask = self.mask();
        loop {
            let hi = p >> m;
            if hi == 0 {
                return p;
            }
            p = (p & mask) ^ clmul64(hi as u64, self.poly as u64);
        }
    }

    #[inline]
    fn reduce_wide(&self, mut hi: u128, mut lo: u128) -> u128 {
        let m = self.degree;
        let mask = self.mask();
        loop {
            let h = if m == 128 { hi } else { (hi << (128 - m)) | (lo >> m) };
            if h == 0 {
                return lo & mask;
            }
            let (fh, fl) = if self.poly >> 64 == 0 {
                mul_128_by_64(h, self.poly as u64)
            } else {
                clmul128(h, self.poly)
            };
            hi = fh;
            lo = (lo & mask) ^ fl;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u128,
}

impl FieldElement {
    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x} in GF(2^{})", self.value, self.spec.degree)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) -> Result<FieldSpec> {
    if a.spec != b.spec {
        return Err(Error::contract(format!(
            "field mismatch: {:?} vs {:?}",
            a.spec, b.spec
        )));
    }
    Ok(a.spec)
}

pub fn gf_add(a: FieldElement, b: FieldElement) -> Result<FieldElement> {
    let spec = same_field(&a, &b)?;
    Ok(FieldElement {
        spec,
        value: a.value ^ b.value,
    })
}

pub fn gf_mul(a: FieldElement, b: FieldElement) -> Result<FieldElement> {
    let spec = same_field(&a, &b)?;
    Ok(FieldElement {
        spec,
        value: spec.mul(a.value, b.value),
    })
}

/// Evaluates `sum coeffs[i] * x^i`. An empty coefficient list is the zero
/// polynomial and evaluates to zero.
pub fn poly_eval(coeffs: &[FieldElement], x: FieldElement) -> Result<FieldElement> {
    let spec = x.spec;
    let mut raw = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        same_field(c, &x)?;
        raw.push(c.value);
    }
    Ok(FieldElement {
        spec,
        value: spec.horner(&raw, x.value),
    })
}

fn mask(degree: u32) -> u128 {
    if degree >= 128 {
        u128::MAX
    } else {
        (1u128 << degree) - 1
    }
}

#[inline]
fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: feature presence checked above.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi64_si128};
    let r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(a as i64), _mm_cvtsi64_si128(b as i64), 0);
    std::mem::transmute::<_, u128>(r)
}

/// Portable carry-less multiply with a 4-bit window.
fn clmul64_soft(a: u64, b: u64) -> u128 {
    let mut table = [0u128; 16];
    table[1] = a as u128;
    for i in 2..16 {
        table[i] = if i % 2 == 0 {
            table[i / 2] << 1
        } else {
            table[i - 1] ^ a as u128
        };
    }
    (0..16).rev().fold(0u128, |acc, i| (acc << 4) ^ table[((b >> (4 * i)) & 15) as usize])
}

/// Full 256-bit carry-less product as (high, low).
#[inline]
fn clmul128(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0);
    let hi = clmul64(a1, b1);
    let mid = clmul64(a0 ^ a1, b0 ^ b1) ^ lo ^ hi;
    (hi ^ (mid >> 64), lo ^ (mid << 64))
}

#[inline]
fn mul_128_by_64(a: u128, b: u64) -> (u128, u128) {
    let lo = clmul64(a as u64, b);
    let hi = clmul64((a >> 64) as u64, b);
    (hi >> 64, lo ^ (hi << 64))
}

/// Irreducibility of `x^degree + poly` over GF(2).
pub fn is_irreducible(degree: u32, poly: u128) -> bool {
    if degree == 0 || degree > MAX_DEGREE || poly & !mask(degree) != 0 {
        return false;
    }
    if degree == 1 {
        return true;
    }
    if poly & 1 == 0 {
        return false;
    }
    if degree <= 16 {
        irreducible_by_trial_division(degree, poly)
    } else {
        irreducible_by_rabin(degree, poly)
    }
}

fn irreducible_by_trial_division(degree: u32, poly: u128) -> bool {
    let f = (1u32 << degree) | poly as u32;
    (2u32..1 << (degree / 2 + 1)).all(|g| poly_mod_u128(f as u128, g as u128) != 0)
}

/// Rabin: f of degree m is irreducible iff x^(2^m) = x mod f and
/// gcd(x^(2^(m/p)) - x, f) = 1 for every prime p dividing m.
fn irreducible_by_rabin(degree: u32, poly: u128) -> bool {
    let spec = FieldSpec { degree, poly };
    let x = 2u128;
    let frobenius = |times: u32| (0..times).fold(x, |acc, _| spec.mul_reference(acc, acc));
    if frobenius(degree) != x {
        return false;
    }
    prime_factors(degree).into_iter().all(|p| {
        let h = frobenius(degree / p) ^ x;
        h != 0 && gcd_with_modulus(degree, poly, h) == 1
    })
}

/// gcd(x^degree + poly, h) for nonzero h of degree < `degree`.
fn gcd_with_modulus(degree: u32, poly: u128, h: u128) -> u128 {
    if h == 1 {
        return 1;
    }
    let dh = 127 - h.leading_zeros();
    // x^degree mod h by repeated shifting; stays below x^dh, so no overflow.
    let mut r = 1u128;
    for _ in 0..degree {
        r <<= 1;
        if r >> dh & 1 == 1 {
            r ^= h;
        }
    }
    let r = r ^ poly_mod_u128(poly, h);
    poly_gcd(h, r)
}

fn poly_mod_u128(mut a: u128, b: u128) -> u128 {
    debug_assert!(b != 0);
    let db = 127 - b.leading_zeros();
    while a != 0 {
        let da = 127 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod_u128(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lowest-weight irreducible for `degree`: trinomials first, then pentanomials,
/// each in increasing order of value.
fn find_irreducible(degree: u32) -> Option<u128> {
    if degree == 1 {
        return Some(1);
    }
    let trinomials = (1..degree).map(|a| (1u128 << a) | 1);
    let pentanomials = (3..degree).flat_map(move |a| {
        (2..a).flat_map(move |b| (1..b).map(move |c| (1u128 << a) | (1u128 << b) | (1u128 << c) | 1))
    });
    let mut candidates: Vec<u128> = trinomials.collect();
    if let Some(p) = candidates.iter().copied().find(|&p| is_irreducible(degree, p)) {
        return Some(p);
    }
    candidates = pentanomials.collect();
    candidates.sort_unstable();
    candidates.into_iter().find(|&p| is_irreducible(degree, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(spec: FieldSpec, v: u128) -> FieldElement {
        spec.element(v).unwrap()
    }

    /// Shift-and-XOR over plain integers: product then long division.
    fn oracle_mul(degree: u32, poly: u128, a: u128, b: u128) -> u128 {
        // 256-bit product as two halves
        let (mut hi, mut lo) = (0u128, 0u128);
        for i in 0..128 {
            if b >> i & 1 == 1 {
                lo ^= a << i;
                if i > 0 {
                    hi ^= a >> (128 - i);
                }
            }
        }
        for bit in (degree..256).rev() {
            let set = if bit >= 128 { hi >> (bit - 128) & 1 } else { lo >> bit & 1 };
            if set == 1 {
                // subtract f * x^(bit - degree)
                let shift = bit - degree;
                let f_lo_terms = poly;
                // leading term
                if bit >= 128 {
                    hi ^= 1 << (bit - 128);
                } else {
                    lo ^= 1 << bit;
                }
                if shift < 128 {
                    lo ^= f_lo_terms << shift;
                    if shift > 0 {
                        hi ^= f_lo_terms >> (128 - shift);
                    }
                } else {
                    hi ^= f_lo_terms << (shift - 128);
                }
            }
        }
        lo
    }

    fn fields() -> Vec<FieldSpec> {
        let mut v: Vec<FieldSpec> = STANDARD_POLYS
            .iter()
            .map(|&(d, _)| FieldSpec::standard(d).unwrap())
            .collect();
        for d in [1, 3, 5, 7, 12, 13, 24, 96, 127] {
            v.push(FieldSpec::standard(d).unwrap());
        }
        v
    }

    #[test]
    fn add_examples() {
        let f = FieldSpec::standard(2).unwrap();
        assert_eq!(gf_add(fe(f, 2), fe(f, 3)).unwrap().value(), 1);
        assert!(gf_add(fe(f, 3), fe(f, 3)).unwrap().is_zero());
        assert_eq!(gf_add(fe(f, 3), f.zero()).unwrap().value(), 3);
    }

    #[test]
    fn mul_examples() {
        let f2 = FieldSpec::standard(2).unwrap();
        assert_eq!(gf_mul(fe(f2, 2), fe(f2, 3)).unwrap().value(), 1);
        assert_eq!(oracle_mul(2, 0b11, 2, 3), 1);
        let f8 = FieldSpec::standard(8).unwrap();
        assert_eq!(gf_mul(fe(f8, 0x53), fe(f8, 0xCA)).unwrap().value(), 0x01);
        assert_eq!(oracle_mul(8, 0x1B, 0x53, 0xCA), 0x01);
        for f in fields() {
            let a = fe(f, 0x5A5A_5A5A_5A5A_5A5A_5A5A_5A5A_5A5A_5A5A & f.mask());
            assert_eq!(gf_mul(a, f.one()).unwrap(), a);
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = FieldSpec::standard(4).unwrap().one();
        let b = FieldSpec::standard(8).unwrap().one();
        assert!(matches!(gf_add(a, b), Err(Error::Contract(_))));
        assert!(matches!(gf_mul(a, b), Err(Error::Contract(_))));
        assert!(matches!(poly_eval(&[a], b), Err(Error::Contract(_))));
    }

    #[test]
    fn poly_eval_examples() {
        let f = FieldSpec::standard(2).unwrap();
        let x = fe(f, 3);
        assert_eq!(poly_eval(&[fe(f, 2)], x).unwrap().value(), 2);
        assert_eq!(poly_eval(&[f.zero(), f.one()], x).unwrap(), x);
        assert!(poly_eval(&[], x).unwrap().is_zero());
        // 1 + 2*3 = 1 + 1 = 0
        let expected = 1 ^ oracle_mul(2, 0b11, 2, 3);
        assert_eq!(expected, 0);
        assert_eq!(poly_eval(&[fe(f, 1), fe(f, 2)], x).unwrap().value(), expected);
    }

    #[test]
    fn construction_checks() {
        assert!(FieldSpec::new(0, 0).is_err());
        assert!(FieldSpec::new(129, 1).is_err());
        assert!(FieldSpec::new(4, 0b10011).is_err()); // includes leading term
        assert!(FieldSpec::new(4, 0b0101).is_err()); // x^4+x^2+1 = (x^2+x+1)^2
        assert!(FieldSpec::new(8, 0x1B).is_ok());
        assert!(FieldSpec::new(8, 0x1D).is_ok());
        assert!(FieldSpec::new(128, 0x87).is_ok());
        assert!(FieldSpec::new(128, 0x85).is_err());
        assert!(fe(FieldSpec::standard(4).unwrap(), 15).value() == 15);
        assert!(FieldSpec::standard(4).unwrap().element(16).is_err());
    }

    #[test]
    fn table_entries_are_irreducible() {
        for &(d, p) in STANDARD_POLYS {
            assert!(is_irreducible(d, p), "degree {d}");
        }
    }

    #[test]
    fn trial_division_agrees_with_rabin_up_to_16() {
        for d in 2..=12u32 {
            for p in 0..(1u128 << d) {
                assert_eq!(
                    irreducible_by_trial_division(d, p),
                    p & 1 == 1 && irreducible_by_rabin(d, p),
                    "degree {d} poly {p:#x}"
                );
            }
        }
    }

    /// Independent Rabin test over arbitrary-precision integers used as
    /// GF(2)[x] polynomials.
    fn biguint_rabin(degree: u32, poly: u128) -> bool {
        use num_bigint::BigUint;
        let f = (BigUint::from(1u8) << degree as usize) | BigUint::from(poly);
        let deg = |a: &BigUint| a.bits().saturating_sub(1);
        let modp = |mut a: BigUint, b: &BigUint| {
            while a.bits() >= b.bits() && a.bits() > 0 {
                let shift = (deg(&a) - deg(b)) as usize;
                a ^= b << shift;
            }
            a
        };
        let mulmod = |a: &BigUint, b: &BigUint| {
            let mut acc = BigUint::default();
            for i in 0..b.bits() {
                if b.bit(i) {
                    acc ^= a << i as usize;
                }
            }
            modp(acc, &f)
        };
        let x = BigUint::from(2u8);
        let frob = |k: u32| (0..k).fold(x.clone(), |acc, _| mulmod(&acc, &acc));
        if frob(degree) != x {
            return false;
        }
        prime_factors(degree).into_iter().all(|p| {
            let mut a = f.clone();
            let mut b = frob(degree / p) ^ &x;
            while b.bits() > 0 {
                let r = modp(a, &b);
                a = b;
                b = r;
            }
            a == BigUint::from(1u8)
        })
    }

    #[test]
    fn large_table_entries_pass_independent_rabin() {
        for &(d, p) in STANDARD_POLYS.iter().filter(|(d, _)| *d > 16) {
            assert!(biguint_rabin(d, p), "degree {d}");
        }
        assert!(!biguint_rabin(128, 0x85));
        for d in [24, 96, 127] {
            assert!(biguint_rabin(d, FieldSpec::standard(d).unwrap().poly()));
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of irreducible polynomials of degree 8 over GF(2) is 30
        let count = (0..256u128).filter(|&p| is_irreducible(8, p)).count();
        assert_eq!(count, 30);
        let count = (0..16u128).filter(|&p| is_irreducible(4, p)).count();
        assert_eq!(count, 3);
    }

    #[test]
    fn multiplicative_order_exhaustive_small() {
        for d in 1..=8u32 {
            let f = FieldSpec::standard(d).unwrap();
            let order = (1u128 << d) - 1;
            for a in 1..=f.mask() {
                assert_eq!(f.pow(a, order), 1, "degree {d} a={a}");
            }
        }
    }

    #[test]
    fn multiplicative_order_sampled_large() {
        let mut state = 0x0123_4567_89AB_CDEFu64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state
        };
        for f in fields().into_iter().filter(|f| f.degree() > 8) {
            let order = f.mask();
            for _ in 0..50 {
                let a = ((next() as u128) << 64 | next() as u128) & f.mask();
                if a != 0 {
                    assert_eq!(f.pow(a, order), 1, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn fast_path_matches_reference() {
        let mut state = 0xDEAD_BEEF_CAFE_F00Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for f in fields() {
            for _ in 0..100_000 {
                let a = ((next() as u128) << 64 | next() as u128) & f.mask();
                let b = ((next() as u128) << 64 | next() as u128) & f.mask();
                assert_eq!(f.mul(a, b), f.mul_reference(a, b), "{f:?} {a:#x} {b:#x}");
            }
        }
    }

    #[test]
    fn soft_clmul_matches_dispatch() {
        let pairs = [(0u64, 0u64), (u64::MAX, u64::MAX), (0x53, 0xCA), (1 << 63, 3)];
        for (a, b) in pairs {
            assert_eq!(clmul64_soft(a, b), clmul64(a, b));
        }
    }

    #[test]
    fn reference_matches_integer_oracle() {
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(0x5851_F42D_4C95_7F2D).wrapping_add(11);
            state
        };
        for f in fields() {
            for _ in 0..2000 {
                let a = ((next() as u128) << 64 | next() as u128) & f.mask();
                let b = ((next() as u128) << 64 | next() as u128) & f.mask();
                assert_eq!(f.mul_reference(a, b), oracle_mul(f.degree(), f.poly(), a, b));
            }
        }
    }

    fn arb_triple(f: FieldSpec) -> impl Strategy<Value = (u128, u128, u128)> {
        let m = f.mask();
        (any::<u128>(), any::<u128>(), any::<u128>()).prop_map(move |(a, b, c)| (a & m, b & m, c & m))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn axioms_gf2_8((a, b, c) in arb_triple(FieldSpec::standard(8).unwrap())) {
            check_axioms(FieldSpec::standard(8).unwrap(), a, b, c)?;
        }

        #[test]
        fn axioms_gf2_64((a, b, c) in arb_triple(FieldSpec::standard(64).unwrap())) {
            check_axioms(FieldSpec::standard(64).unwrap(), a, b, c)?;
        }

        #[test]
        fn axioms_gf2_128((a, b, c) in arb_triple(FieldSpec::standard(128).unwrap())) {
            check_axioms(FieldSpec::standard(128).unwrap(), a, b, c)?;
        }

        #[test]
        fn axioms_gf2_13((a, b, c) in arb_triple(FieldSpec::standard(13).unwrap())) {
            check_axioms(FieldSpec::standard(13).unwrap(), a, b, c)?;
        }
    }

    fn check_axioms(f: FieldSpec, a: u128, b: u128, c: u128) -> std::result::Result<(), TestCaseError> {
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        Ok(())
    }
}
