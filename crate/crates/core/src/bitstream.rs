//! Packed bit sequences and their on-disk formats.
//!
//! Bit `i` of a [`BitVector`] lives in byte `i / 8` at bit position
//! `7 - i % 8`, i.e. the first bit of a stream is the most significant bit of
//! the first byte. Every other module inherits this convention.
//!
//! Two file formats are supported:
//!
//! * native: the magic bytes `RXBV`, the bit length as an unsigned 64-bit
//!   little-endian integer, then the payload bytes;
//! * raw: payload bytes only, for external test suites. Only whole bytes can
//!   be written in this mode.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NATIVE_MAGIC: &[u8; 4] = b"RXBV";
const HEADER_LEN: usize = NATIVE_MAGIC.len() + 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    #[default]
    Native,
    Raw,
}

impl std::str::FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "native" => Ok(FileFormat::Native),
            "raw" => Ok(FileFormat::Raw),
            other => Err(Error::format(format!("unknown file format {other:?}"))),
        }
    }
}

impl fmt::Display for FileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileFormat::Native => "native",
            FileFormat::Raw => "raw",
        })
    }
}

/// A packed, MSB-first sequence of bits.
///
/// Unused bits of the final byte are always zero, so two vectors are equal
/// exactly when their lengths and payloads are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    bytes: Vec<u8>,
}

impl BitVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            bytes: vec![0; len.div_ceil(8)],
        }
    }

    /// Wraps whole bytes; the length is `8 * bytes.len()`.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self {
            len: bytes.len() * 8,
            bytes,
        }
    }

    /// Wraps a payload holding `len` bits. The payload must be exactly
    /// `ceil(len / 8)` bytes with zero padding bits.
    pub fn from_payload(bytes: Vec<u8>, len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::format(format!(
                "payload of {} bytes cannot hold exactly {len} bits",
                bytes.len()
            )));
        }
        let v = Self { len, bytes };
        if v.padding_mask() & v.bytes.last().copied().unwrap_or(0) != 0 {
            return Err(Error::format("nonzero padding bits in final byte"));
        }
        Ok(v)
    }

    /// Parses a string of `0`/`1` characters; `_` and whitespace are ignored.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format(format!("invalid bit character {other:?}"))),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range ({})", self.len);
        self.bytes[i >> 3] >> (7 - (i & 7)) & 1 == 1
    }

    pub fn try_get(&self, i: usize) -> Result<bool> {
        if i < self.len {
            Ok(self.get(i))
        } else {
            Err(Error::Index {
                position: i,
                len: self.len,
            })
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range ({})", self.len);
        let mask = 0x80u8 >> (i & 7);
        if bit {
            self.bytes[i >> 3] |= mask;
        } else {
            self.bytes[i >> 3] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    /// Appends all bits of `other`.
    pub fn extend_from(&mut self, other: &BitVector) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
        } else {
            for b in other.iter() {
                self.push(b);
            }
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        let end = start.checked_add(len).filter(|&e| e <= self.len).ok_or(Error::Index {
            position: start.saturating_add(len).saturating_sub(1),
            len: self.len,
        })?;
        if start.is_multiple_of(8) {
            let mut bytes = self.bytes[start / 8..end.div_ceil(8)].to_vec();
            if let Some(last) = bytes.last_mut() {
                *last &= !Self::mask_for(len);
            }
            return Ok(Self { len, bytes });
        }
        let mut out = Self::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Bitwise XOR of two equal-length vectors.
    pub fn xor(&self, other: &BitVector) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::contract(format!(
                "xor of vectors with {} and {} bits",
                self.len, other.len
            )));
        }
        Ok(Self {
            len: self.len,
            bytes: self.bytes.iter().zip(&other.bytes).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Selects the bits at `positions`, in order. Repeated positions are allowed.
    pub fn gather(&self, positions: &[usize]) -> Result<Self> {
        let mut out = Self::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.try_get(p)? {
                out.set(j, true);
            }
        }
        Ok(out)
    }

    /// Reads up to 128 bits starting at `start` as an integer whose most
    /// significant bit is the first bit read.
    pub fn read_uint(&self, start: usize, width: usize) -> Result<u128> {
        if width > 128 {
            return Err(Error::contract(format!("cannot read {width} bits into a u128")));
        }
        if start + width > self.len {
            return Err(Error::Index {
                position: start + width - 1,
                len: self.len,
            });
        }
        Ok((start..start + width).fold(0u128, |acc, i| (acc << 1) | self.get(i) as u128))
    }

    /// Packs the bits into MSB-first 64-bit words; bit `i` is bit `63 - i % 64`
    /// of word `i / 64`. Padding bits are zero.
    pub fn to_words(&self) -> Vec<u64> {
        self.bytes
            .chunks(8)
            .map(|chunk| {
                let mut buf = [0u8; 8];
                buf[..chunk.len()].copy_from_slice(chunk);
                u64::from_be_bytes(buf)
            })
            .collect()
    }

    /// Inverse of [`to_words`](Self::to_words).
    pub fn from_words(words: &[u64], len: usize) -> Self {
        assert!(len <= words.len() * 64);
        let mut bytes: Vec<u8> = words.iter().flat_map(|w| w.to_be_bytes()).collect();
        bytes.truncate(len.div_ceil(8));
        if let Some(last) = bytes.last_mut() {
            *last &= !Self::mask_for(len);
        }
        Self { len, bytes }
    }

    /// Bits in reverse order.
    pub fn reversed(&self) -> Self {
        let mut out = Self::zeros(self.len);
        for i in 0..self.len {
            if self.get(i) {
                out.set(self.len - 1 - i, true);
            }
        }
        out
    }

    fn padding_mask(&self) -> u8 {
        Self::mask_for(self.len)
    }

    /// Mask of the unused low bits in the final byte of a `len`-bit vector.
    fn mask_for(len: usize) -> u8 {
        match len % 8 {
            0 => 0,
            r => 0xFFu8 >> r,
        }
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut v = BitVector::new();
        for b in iter {
            v.push(b);
        }
        v
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
            write!(f, "BitVector({}: {s})", self.len)
        } else {
            write!(f, "BitVector({} bits)", self.len)
        }
    }
}

/// Parity of the bitwise AND of `a` and `b`.
pub fn inner_product_gf2(a: &BitVector, b: &BitVector) -> Result<bool> {
    if a.len != b.len {
        return Err(Error::contract(format!(
            "inner product of vectors with {} and {} bits",
            a.len, b.len
        )));
    }
    let ones: u32 = a.bytes.iter().zip(&b.bytes).map(|(x, y)| (x & y).count_ones()).sum();
    Ok(ones & 1 == 1)
}

pub fn encode_native(v: &BitVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + v.bytes.len());
    out.extend_from_slice(NATIVE_MAGIC);
    out.extend_from_slice(&(v.len as u64).to_le_bytes());
    out.extend_from_slice(&v.bytes);
    out
}

pub fn decode_native(data: &[u8]) -> Result<BitVector> {
    if data.len() < HEADER_LEN {
        return Err(Error::format(format!(
            "truncated header: {} bytes, need {HEADER_LEN}",
            data.len()
        )));
    }
    if &data[..4] != NATIVE_MAGIC {
        return Err(Error::format("missing RXBV magic"));
    }
    let len = u64::from_le_bytes(data[4..HEADER_LEN].try_into().expect("8-byte slice"));
    let len = usize::try_from(len).map_err(|_| Error::format("bit length overflows usize"))?;
    BitVector::from_payload(data[HEADER_LEN..].to_vec(), len)
}

pub fn write_bits(v: &BitVector, path: impl AsRef<Path>, format: FileFormat) -> Result<()> {
    let data = match format {
        FileFormat::Native => encode_native(v),
        FileFormat::Raw => {
            if !v.len.is_multiple_of(8) {
                return Err(Error::format(format!(
                    "raw format needs a whole number of bytes, got {} bits",
                    v.len
                )));
            }
            v.bytes.clone()
        }
    };
    let mut f = fs::File::create(path)?;
    f.write_all(&data)?;
    Ok(())
}

pub fn read_bits(path: impl AsRef<Path>, format: FileFormat) -> Result<BitVector> {
    let data = fs::read(path)?;
    match format {
        FileFormat::Native => decode_native(&data),
        FileFormat::Raw => Ok(BitVector::from_bytes(data)),
    }
}
