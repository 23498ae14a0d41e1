//! Exact evaluation by enumeration.
//!
//! Every code entry, every adversary target and every coin sequence is
//! visited once with its exact probability, and the decoder's uniform
//! tie-break is averaged rather than sampled. All sums are exact rationals.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::adversary::{disagreements, outcome_bound, output_distribution, wait_length_for};
use crate::bitcore::{prefix, Bitword};
use crate::codebook::Code;
use crate::decoder::{map_posterior, AttackModel, Candidates, Decoder, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::prob::{self, Prob};

use super::estimate::{Diagnostics, ErrorEstimate, ExactDetail};
use super::spec::{ExperimentSpec, Mode};
use super::stats::Interval;
use super::ClaimProbe;

/// Probability that a uniform pick from `c` misses `u`; an empty list
/// always misses.
fn miss_probability(c: &Candidates, u: u32) -> Prob {
    let (hit, len) = c.hit_probability(u);
    if len == 0 {
        Prob::one()
    } else {
        Prob::one() - prob::ratio(hit as i64, len as i64)
    }
}

/// Rejects instances whose enumeration would exceed [`ENUMERATION_LIMIT`].
pub fn check_guard(code: &Code, spec: &ExperimentSpec) -> Result<()> {
    let params = spec.params()?;
    let per_entry = outcome_bound(code, &spec.adversary, &params);
    let states = per_entry.saturating_mul(code.num_entries() as u128);
    if states > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            states,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

struct Partial {
    error: Prob,
    flips: Vec<Prob>,
    exhaustion: Prob,
    small: Prob,
    close: Prob,
    message_errors: Vec<(u32, Prob)>,
    outcomes: u64,
}

/// Exact error probability of `code` under `spec`.
pub fn exact_on(code: &Code, spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    let params = spec.validate()?;
    check_guard(code, spec)?;
    let decoder = Decoder::new(&spec.decoder, code, &spec.adversary, &params, true)?;
    let probe = ClaimProbe::new(code, &spec.adversary, &params);
    let budget = params.budget();
    let cache: RwLock<HashMap<Bitword, Candidates>> = RwLock::new(HashMap::new());
    let decode = |y: &Bitword| -> Result<Candidates> {
        if let Some(c) = cache.read().expect("decode cache").get(y) {
            return Ok(c.clone());
        }
        let c = decoder.candidates(code, y)?;
        cache
            .write()
            .expect("decode cache")
            .insert(y.clone(), c.clone());
        Ok(c)
    };

    let parts: Vec<Partial> = (0..code.num_entries())
        .into_par_iter()
        .map(|entry| -> Result<Partial> {
            let mass = code.entry_mass(entry);
            let u = code.entry_message(entry);
            let x = code.entry_word(entry);
            let mut part = Partial {
                error: Prob::zero(),
                flips: vec![Prob::zero(); budget + 1],
                exhaustion: Prob::zero(),
                small: Prob::zero(),
                close: Prob::zero(),
                message_errors: Vec::new(),
                outcomes: 0,
            };
            let small = probe.active
                && probe.is_small(code.table().prefix_range(&prefix(&x, probe.ell)?).len());
            if small {
                part.small = mass.clone();
            }
            let mut conditional_error = Prob::zero();
            for o in output_distribution(code, &spec.adversary, &params, entry)? {
                let miss = miss_probability(&decode(&o.y)?, u);
                let w = &mass * &o.prob;
                conditional_error += &o.prob * &miss;
                part.error += &w * &miss;
                part.flips[o.flips] += &w;
                if budget > 0 && o.flips == budget {
                    part.exhaustion += &w;
                }
                if probe.active && !small {
                    if let Some(t) = o.target {
                        if probe.is_close(&x, &code.entry_word(t)) {
                            part.close += &w;
                        }
                    }
                }
                part.outcomes += 1;
            }
            let share = &mass / code.message_prob(u as usize);
            part.message_errors.push((u, share * conditional_error));
            Ok(part)
        })
        .collect::<Result<_>>()?;

    let mut detail = ExactDetail {
        error: Prob::zero(),
        flip_distribution: vec![Prob::zero(); budget + 1],
        exhaustion: Prob::zero(),
        small_consistent: probe.active.then(Prob::zero),
        close_target: probe.active.then(Prob::zero),
        message_errors: vec![Prob::zero(); code.num_messages()],
        outcomes: 0,
    };
    for p in parts {
        detail.error += p.error;
        for (a, b) in detail.flip_distribution.iter_mut().zip(p.flips) {
            *a += b;
        }
        detail.exhaustion += p.exhaustion;
        if let Some(s) = detail.small_consistent.as_mut() {
            *s += p.small;
        }
        if let Some(c) = detail.close_target.as_mut() {
            *c += p.close;
        }
        for (u, e) in p.message_errors {
            detail.message_errors[u as usize] += e;
        }
        detail.outcomes += p.outcomes;
    }
    Ok(ErrorEstimate {
        mode: Mode::Exact,
        rate: code.rate(),
        trials: 0,
        errors: 0,
        interval: Interval::point(prob::to_f64(&detail.error)),
        diagnostics: Diagnostics::new(budget),
        exact: Some(detail),
    })
}

/// Exact law of the number of applied flips, `0..=budget`.
pub fn flip_count_distribution(code: &Code, spec: &ExperimentSpec) -> Result<Vec<Prob>> {
    let params = spec.validate()?;
    check_guard(code, spec)?;
    let mut dist = vec![Prob::zero(); params.budget() + 1];
    for entry in 0..code.num_entries() {
        let mass = code.entry_mass(entry);
        for o in output_distribution(code, &spec.adversary, &params, entry)? {
            dist[o.flips] += &mass * &o.prob;
        }
    }
    Ok(dist)
}

/// The event in which the adversary pushes towards a different codeword
/// and never runs into its budget, whichever of the two words was sent:
/// `k < budget` flips out of `d` disagreements with `d - k < budget`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfusableEvent {
    pub probability: Prob,
    /// Decoding error probability conditioned on the event.
    pub error: Prob,
    /// Received words in the event with `p(y | sender) != p(y | target)`.
    pub asymmetric_likelihoods: Vec<Bitword>,
    /// Received words whose posteriors for the sender's and the target's
    /// messages differ.
    pub asymmetric_posteriors: Vec<Bitword>,
}

/// Exact analysis of the confusable event for a push attack.
pub fn confusable_event(code: &Code, spec: &ExperimentSpec) -> Result<ConfusableEvent> {
    let params = spec.validate()?;
    let eps = match spec.adversary.eps() {
        Some(e) if spec.adversary.is_push() => e.clone(),
        _ => {
            return Err(Error::Config(
                "the confusable event needs a push attack".into(),
            ))
        }
    };
    check_guard(code, spec)?;
    let ell = wait_length_for(code, &eps);
    let budget = params.budget();
    let decoder = Decoder::new(&spec.decoder, code, &spec.adversary, &params, true)?;
    let model = AttackModel::new(code, &spec.adversary, &params)?;

    // p(y | entry) for every entry, as a map per entry.
    let mut likelihood: Vec<HashMap<Bitword, Prob>> = Vec::with_capacity(code.num_entries());
    let mut outcomes = Vec::with_capacity(code.num_entries());
    for entry in 0..code.num_entries() {
        let dist = output_distribution(code, &spec.adversary, &params, entry)?;
        let mut map: HashMap<Bitword, Prob> = HashMap::new();
        for o in &dist {
            *map.entry(o.y.clone()).or_insert_with(Prob::zero) += &o.prob;
        }
        likelihood.push(map);
        outcomes.push(dist);
    }

    let mut event = ConfusableEvent {
        probability: Prob::zero(),
        error: Prob::zero(),
        asymmetric_likelihoods: Vec::new(),
        asymmetric_posteriors: Vec::new(),
    };
    for (entry, dist) in outcomes.iter().enumerate() {
        let x = code.entry_word(entry);
        let mass = code.entry_mass(entry);
        let u = code.entry_message(entry);
        for o in dist {
            let Some(t) = o.target else { continue };
            let tw = code.entry_word(t);
            if tw == x {
                continue;
            }
            let d = disagreements(&x, &tw, ell).len();
            if !(o.flips < budget && d - o.flips < budget) {
                continue;
            }
            let w = &mass * &o.prob;
            event.probability += &w;
            event.error += &w * miss_probability(&decoder.candidates(code, &o.y)?, u);
            let zero = Prob::zero();
            let lx = likelihood[entry].get(&o.y).unwrap_or(&zero);
            let lt = likelihood[t].get(&o.y).unwrap_or(&zero);
            if lx != lt {
                event.asymmetric_likelihoods.push(o.y.clone());
            }
            let post: Vec<Prob> = map_posterior(code, &o.y, &model)?;
            if post[u as usize] != post[code.entry_message(t) as usize] {
                event.asymmetric_posteriors.push(o.y.clone());
            }
        }
    }
    if !event.probability.is_zero() {
        event.error = &event.error / &event.probability;
    }
    event.asymmetric_likelihoods.sort();
    event.asymmetric_likelihoods.dedup();
    event.asymmetric_posteriors.sort();
    event.asymmetric_posteriors.dedup();
    Ok(event)
}

/// Largest list the list decoder returns on any word the adversary can
/// produce from any entry, by enumeration.
pub fn max_list_size(code: &Code, spec: &ExperimentSpec) -> Result<usize> {
    let params = spec.validate()?;
    check_guard(code, spec)?;
    let decoder = Decoder::new(&spec.decoder, code, &spec.adversary, &params, true)?;
    let mut seen: HashMap<Bitword, usize> = HashMap::new();
    for entry in 0..code.num_entries() {
        for o in output_distribution(code, &spec.adversary, &params, entry)? {
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(o.y) {
                let len = decoder.candidates(code, slot.key())?.messages.len();
                slot.insert(len);
            }
        }
    }
    Ok(seen.values().copied().max().unwrap_or(0))
}
