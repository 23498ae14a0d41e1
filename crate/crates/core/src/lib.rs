//! Simulation lab for binary channels with a causal, power-limited jammer.
//!
//! Alice sends an `n`-bit codeword, Calvin watches it one bit at a time and
//! may flip up to `floor(p n)` bits, Bob decodes what arrives. The crate
//! provides codes, the referee that enforces causality and the flip budget,
//! jamming strategies, decoders (including an exact Bayes decoder), bound
//! curves and combinatorial checks, and Monte Carlo and exact experiment
//! engines.

pub mod adversary;
pub mod analysis;
pub mod bitcore;
pub mod channel;
pub mod codebook;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod prob;

pub use bitcore::{hamming_distance, prefix, random_bitword, Bitword, RandomSource};
pub use codebook::{Code, ConsistentSet, DeterministicCode, ProbabilisticCode};
pub use error::{Error, Result};
pub use prob::Prob;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bits.md")]
    mod bits {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/decoders.md")]
    mod decoders {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
