//! The random-code ensemble at block lengths where no code fits in memory.
//!
//! When the `M` codewords are drawn independently and uniformly, the `M - 1`
//! words Alice did not send are independent of what she sent and of the
//! noise. Against an adversary that ignores the code, nearest-codeword
//! decoding with uniform tie-breaking then succeeds with a probability that
//! depends only on the number `d` of flips:
//!
//! `(1 - a)^(M-1) * (1 - (1 - f')^M) / (M f')`
//!
//! where `a = P[Bin(n, 1/2) < d]`, `f = P[Bin(n, 1/2) = d]` and
//! `f' = f / (1 - a)`. The simulation draws the sent word and the channel as
//! usual and replaces the decode by a coin with that success probability.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::adversary::{Strategy, StrategyKind};
use crate::bitcore::{random_bitword, RandomSource};
use crate::channel::{run_channel, ChannelParams};
use crate::codebook::message_bits;
use crate::error::{Error, Result};
use crate::prob::{self, binomial, Prob};

use super::estimate::{Diagnostics, ErrorEstimate};
use super::spec::{CodeSpec, ExperimentSpec, Mode};
use super::stats::wilson;

fn binomial_ratio(num: BigUint, n: usize) -> f64 {
    let r = Prob::new(num.into(), (BigUint::one() << n).into());
    r.to_f64().unwrap_or(0.0)
}

/// Probability that nearest-codeword decoding over a random code with
/// `2^message_bits` words recovers the sent word after `d` flips.
pub fn correct_probability(n: usize, message_bits: u32, d: usize) -> f64 {
    assert!(d <= n, "{d} flips in a word of length {n}");
    if message_bits == 0 {
        return 1.0;
    }
    let (mut below, mut tail) = (BigUint::zero(), BigUint::zero());
    for j in 0..=n {
        let c = binomial(n as u64, j as u64);
        if j < d {
            below += c;
        } else {
            tail += c;
        }
    }
    let at = binomial(n as u64, d as u64);
    let a = binomial_ratio(below, n);
    // ln(1 - a) from whichever side keeps precision.
    let ln_keep = if a < 0.5 {
        (-a).ln_1p()
    } else {
        binomial_ratio(tail.clone(), n).ln()
    };
    let fp = Prob::new(at.into(), tail.into()).to_f64().unwrap_or(0.0);
    let m = (message_bits as f64).exp2();
    let keep = ((m - 1.0) * ln_keep).exp();
    let tie = if fp == 0.0 {
        1.0
    } else {
        -(m * (-fp).ln_1p()).exp_m1() / (m * fp)
    };
    (keep * tie).clamp(0.0, 1.0)
}

/// Law of the number of flips a code-blind adversary applies.
fn flip_law(kind: &StrategyKind, params: &ChannelParams) -> Result<Vec<Prob>> {
    let b = params.budget();
    let n = params.n();
    let mut law = vec![Prob::zero(); b + 1];
    match kind {
        StrategyKind::Passive => law[0] = Prob::one(),
        StrategyKind::Fixed { positions } => {
            let mut pos = positions.clone();
            pos.sort_unstable();
            pos.dedup();
            law[pos.len().min(b)] = Prob::one();
        }
        StrategyKind::BscSim { .. } => {
            // min(Bin(n, q), b): flipping stops once the budget is spent.
            let q = kind.bsc_flip_prob(params).expect("bsc kind");
            let keep = Prob::one() - &q;
            let mut rest = Prob::one();
            for (k, slot) in law.iter_mut().enumerate().take(b) {
                let c = Prob::from_integer(binomial(n as u64, k as u64).into());
                *slot = c * num_traits::pow(q.clone(), k) * num_traits::pow(keep.clone(), n - k);
                rest -= &*slot;
            }
            law[b] = rest;
        }
        _ => return Err(Error::Config(format!("{kind} depends on the code"))),
    }
    Ok(law)
}

/// Ensemble-average error probability, by summing over the flip count.
pub fn ensemble_error(spec: &ExperimentSpec) -> Result<f64> {
    let (params, k) = check(spec)?;
    let law = flip_law(&spec.adversary, &params)?;
    Ok(law
        .iter()
        .enumerate()
        .map(|(d, p)| prob::to_f64(p) * (1.0 - correct_probability(spec.n, k, d)))
        .sum())
}

fn check(spec: &ExperimentSpec) -> Result<(ChannelParams, u32)> {
    let params = spec.validate()?;
    let CodeSpec::Ensemble { rate } = spec.code else {
        return Err(Error::Config("not an ensemble experiment".into()));
    };
    let k = message_bits(spec.n, rate)?;
    Ok((params, k))
}

/// Monte Carlo over the ensemble, with the same per-trial streams as the
/// ordinary engine.
pub fn run_ensemble(spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    let (params, k) = check(spec)?;
    let budget = params.budget();
    let success: Vec<f64> = (0..=budget)
        .map(|d| correct_probability(spec.n, k, d))
        .collect();
    let template = Strategy::without_code(&spec.adversary, &params)?;
    let (errors, diag) = (0..spec.trials)
        .into_par_iter()
        .try_fold(
            || (0u64, Diagnostics::new(budget)),
            |(mut errors, mut diag), t| -> Result<(u64, Diagnostics)> {
                let mut alice = RandomSource::new(spec.seed, 3 * t);
                let mut coins = RandomSource::new(spec.seed, 3 * t + 1);
                let mut bob = RandomSource::new(spec.seed, 3 * t + 2);
                let x = random_bitword(&mut alice, spec.n);
                let mut adversary = template.clone();
                let trace = run_channel(&x, &mut adversary, &params, &mut coins)?;
                let d = trace.flips.len();
                errors += (bob.unit() >= success[d]) as u64;
                diag.flip_histogram[d] += 1;
                diag.budget_exhausted += trace.budget_exhausted() as u64;
                diag.clamped += (trace.clamped > 0) as u64;
                Ok((errors, diag))
            },
        )
        .try_reduce(
            || (0, Diagnostics::new(budget)),
            |a, b| Ok((a.0 + b.0, a.1.merge(b.1))),
        )?;
    Ok(ErrorEstimate {
        mode: Mode::MonteCarlo,
        rate: k as f64 / spec.n as f64,
        trials: spec.trials,
        errors,
        interval: wilson(errors, spec.trials),
        diagnostics: diag,
        exact: None,
    })
}
