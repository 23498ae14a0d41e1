//! Exact probability arithmetic and entropy helpers.
//!
//! Masses are kept as arbitrary-precision rationals. Decimal input such as
//! `0.15` is read exactly as `3/20`, so tiny instances can be evaluated with
//! no rounding at all.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact probability (or any exact rational quantity).
pub type Prob = BigRational;

pub fn ratio(num: i64, den: i64) -> Prob {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: u64) -> Prob {
    BigRational::from_integer(BigInt::from(v))
}

/// `2^-k`.
pub fn half_pow(k: u32) -> Prob {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<Prob> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

/// The rational written by the shortest decimal that round-trips to `x`,
/// so `0.15` becomes `3/20` rather than the nearest binary fraction.
pub fn from_decimal_f64(x: f64) -> Result<Prob> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("{x} is not finite")));
    }
    parse_prob(&format!("{x}"))
}

pub fn to_f64(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

/// Parses `a/b`, an integer, or a plain decimal like `0.125`.
pub fn parse_prob(s: &str) -> Result<Prob> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational or decimal: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().all(|c| c.is_ascii_digit()) || !frac.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = Pow::pow(BigInt::from(10u32), frac.len());
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

/// Canonical text form: `a/b`, or `a` for integers.
pub fn format_prob(p: &Prob) -> String {
    if p.is_integer() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

/// Short text form: a terminating decimal when one exists (`0.15`),
/// otherwise `a/b`. Parses back to the same value with [`parse_prob`].
pub fn format_short(p: &Prob) -> String {
    let mut den = p.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() || p.is_integer() {
        return format_prob(p);
    }
    let digits = twos.max(fives);
    let scaled =
        (p * BigRational::from_integer(Pow::pow(BigInt::from(10u32), digits))).to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (whole, frac) = s.split_at(s.len() - digits);
    format!("{}{whole}.{frac}", if neg { "-" } else { "" })
}

pub fn is_probability(p: &Prob) -> bool {
    !p.is_negative() && *p <= Prob::one()
}

pub fn sum<'a>(it: impl IntoIterator<Item = &'a Prob>) -> Prob {
    it.into_iter().fold(Prob::zero(), |acc, p| acc + p)
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Shannon entropy in bits of a (not necessarily normalized) weight vector,
/// taken after normalization. Zero weights contribute nothing.
pub fn entropy_bits(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h: f64 = weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum();
    // A point mass gives -0.0; report it as 0.
    h + 0.0
}

/// Entropy in bits of a distribution given as exact masses.
pub fn entropy_exact(weights: &[Prob]) -> f64 {
    let v: Vec<f64> = weights.iter().map(to_f64).collect();
    entropy_bits(&v)
}

/// Numeric type used for likelihoods and posteriors.
///
/// [`Prob`] gives exact answers (ties are detected exactly); `f64` is used by
/// the Monte Carlo engine where speed matters more.
pub trait Weight:
    Clone
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_prob(p: &Prob) -> Self;
    fn half_pow(k: u32) -> Self;
    fn as_f64(&self) -> f64;
    /// Equality used for tie detection.
    fn ties_with(&self, other: &Self) -> bool;

    fn powi(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Weight for Prob {
    fn from_prob(p: &Prob) -> Self {
        p.clone()
    }

    fn half_pow(k: u32) -> Self {
        half_pow(k)
    }

    fn as_f64(&self) -> f64 {
        to_f64(self)
    }

    fn ties_with(&self, other: &Self) -> bool {
        self == other
    }
}

/// Relative tolerance for calling two floating-point posteriors tied.
pub const F64_TIE_TOLERANCE: f64 = 1e-12;

impl Weight for f64 {
    fn from_prob(p: &Prob) -> Self {
        to_f64(p)
    }

    fn half_pow(k: u32) -> Self {
        (-(k as f64)).exp2()
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn ties_with(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs());
        (self - other).abs() <= F64_TIE_TOLERANCE * scale
    }

    fn powi(&self, k: usize) -> Self {
        f64::powi(*self, k as i32)
    }
}
