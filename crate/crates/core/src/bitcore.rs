//! Bit-vector primitives, the Hamming metric, and the deterministic
//! randomness used by every stochastic component.
//!
//! Positions are 0-based. Bit `i` of a [`Bitword`] is stored most-significant
//! first inside 64-bit limbs, so the derived ordering on equal-length words is
//! the lexicographic ordering of their `0`/`1` strings. Codebooks rely on this
//! to answer prefix queries with a binary search.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Limbs = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn limbs_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
fn mask_bit(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

/// A fixed-length binary vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitword {
    len: usize,
    limbs: Limbs,
}

impl Bitword {
    /// The all-zero word of length `len`.
    pub fn zeros(len: usize) -> Self {
        Bitword {
            len,
            limbs: SmallVec::from_elem(0, limbs_for(len)),
        }
    }

    /// The all-one word of length `len`.
    pub fn ones(len: usize) -> Self {
        Self::from_fn(len, |_| true)
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                w.limbs[i / 64] |= mask_bit(i);
            }
        }
        w
    }

    /// Builds a word from a slice of `0`/`1` values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some((i, b)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::Parse(format!(
                "value {b} at position {i} is not a bit"
            )));
        }
        Ok(Self::from_fn(bits.len(), |i| bits[i] == 1))
    }

    /// Reassembles a word from packed limbs; bits past `len` must be zero.
    pub(crate) fn from_limbs(len: usize, limbs: &[u64]) -> Self {
        debug_assert_eq!(limbs.len(), limbs_for(len));
        Bitword {
            len,
            limbs: SmallVec::from_slice(limbs),
        }
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 0-based position `i`.
    ///
    /// Panics if `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        ((self.limbs[i / 64] & mask_bit(i)) != 0) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Positions holding a one, ascending.
    pub fn ones_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i) == 1).collect()
    }

    /// Bitwise XOR of two equal-length words.
    pub fn xor(&self, other: &Bitword) -> Result<Bitword> {
        check_same_len(self, other)?;
        let limbs = self
            .limbs
            .iter()
            .zip(other.limbs.iter())
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Bitword {
            len: self.len,
            limbs,
        })
    }

    /// A copy with the listed positions flipped.
    pub fn with_flips(&self, positions: &[usize]) -> Result<Bitword> {
        let mut out = self.clone();
        for &i in positions {
            if i >= self.len {
                return Err(Error::Dimension(format!(
                    "flip position {i} outside word of length {}",
                    self.len
                )));
            }
            out.limbs[i / 64] ^= mask_bit(i);
        }
        Ok(out)
    }

    /// A copy extended by one bit at the end.
    pub fn pushed(&self, bit: u8) -> Bitword {
        let mut out = self.clone();
        let i = out.len;
        out.len += 1;
        if out.limbs.len() < limbs_for(out.len) {
            out.limbs.push(0);
        }
        if bit != 0 {
            out.limbs[i / 64] |= mask_bit(i);
        }
        out
    }
}

#[inline]
pub(crate) fn distance_limbs(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Compares the first `len` bits of `a` against the first `len` bits of `b`.
pub(crate) fn cmp_prefix(a: &[u64], b: &[u64], len: usize) -> std::cmp::Ordering {
    let full = len / 64;
    for k in 0..full {
        match a[k].cmp(&b[k]) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    let rem = len % 64;
    if rem == 0 {
        return std::cmp::Ordering::Equal;
    }
    let mask = !(u64::MAX >> rem);
    (a[full] & mask).cmp(&(b[full] & mask))
}

fn check_same_len(a: &Bitword, b: &Bitword) -> Result<()> {
    if a.len != b.len {
        return Err(Error::Dimension(format!(
            "word lengths differ: {} vs {}",
            a.len, b.len
        )));
    }
    Ok(())
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &Bitword, b: &Bitword) -> Result<usize> {
    check_same_len(a, b)?;
    Ok(distance_limbs(&a.limbs, &b.limbs))
}

/// The first `ell` bits of `a`.
pub fn prefix(a: &Bitword, ell: usize) -> Result<Bitword> {
    if ell > a.len {
        return Err(Error::Dimension(format!(
            "prefix length {ell} exceeds word length {}",
            a.len
        )));
    }
    let mut limbs: Limbs = SmallVec::from_slice(&a.limbs[..limbs_for(ell)]);
    if !ell.is_multiple_of(64) {
        let last = limbs.len() - 1;
        limbs[last] &= !(u64::MAX >> (ell % 64));
    }
    Ok(Bitword { len: ell, limbs })
}

/// `n` independent uniform bits drawn from `src`.
pub fn random_bitword(src: &mut RandomSource, n: usize) -> Bitword {
    let mut w = Bitword::zeros(n);
    let nl = w.limbs.len();
    for k in 0..nl {
        w.limbs[k] = src.next_u64();
    }
    if !n.is_multiple_of(64) {
        w.limbs[nl - 1] &= !(u64::MAX >> (n % 64));
    }
    w
}

impl fmt::Display for Bitword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitword({self})")
    }
}

impl FromStr for Bitword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .enumerate()
            .map(|(i, c)| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::Parse(format!(
                    "invalid character {:?} at position {i} in bitstring",
                    c as char
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Bitword::from_bits(&bits)
    }
}

/// Deterministic, counter-based random stream keyed by `(seed, stream)`.
///
/// Two sources with the same key produce the same sequence on every platform.
/// Parallel work takes distinct stream ids rather than sharing one source.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh source on another stream of the same seed.
    pub fn sibling(&self, stream: u64) -> RandomSource {
        RandomSource::new(self.seed, stream)
    }

    pub fn bit(&mut self) -> u8 {
        (self.rng.next_u32() & 1) as u8
    }

    /// `true` with probability `p` (clamped to `[0, 1]`).
    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.rng.random_bool(p)
        }
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.rng.random_range(0..n)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Index drawn proportionally to non-negative `weights`.
    ///
    /// Returns `None` when all weights are zero.
    pub fn weighted_index(&mut self, weights: &[f64]) -> Option<usize> {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || weights.is_empty() {
            return None;
        }
        let target = self.unit() * total;
        let mut acc = 0.0;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if target < acc {
                return Some(i);
            }
        }
        weights.iter().rposition(|&w| w > 0.0)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
