//! Bob's decoders.
//!
//! Each decoder first narrows the messages down to a set of equally good
//! candidates and then picks one uniformly at random. The candidate sets are
//! exposed so the exact evaluator can average over the tie-break instead of
//! sampling it.
//!
//! The MAP decoder knows the attack, including its margin. Its likelihoods
//! are closed forms of the strategies' coin trees:
//!
//! * BSC imitation with per-bit probability `q`, budget `b`, error pattern
//!   `e = x ^ y` of weight `k`: `q^k (1-q)^(n-k)` when `k < b`, and
//!   `q^b (1-q)^(j+1-b)` when `k = b` with `j` the last flipped position
//!   (no coins are tossed after the budget is spent).
//! * Push towards `t` after `ell` bits, with `D` the positions `>= ell` where
//!   `x` and `t` differ: zero unless `e` lies inside `D`; `2^-|D|` when
//!   `k < b`; `2^-(m+1)` when `k = b` and the last flip is the `m`-th
//!   (0-based) element of `D`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::adversary::{wait_length_for, StrategyKind};
use crate::bitcore::{prefix, Bitword, RandomSource};
use crate::channel::ChannelParams;
use crate::codebook::Code;
use crate::error::{Error, Result};
use crate::prob::{Prob, Weight};

/// Largest number of likelihood evaluations an exact decode may perform.
pub const ENUMERATION_LIMIT: u128 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    MinDist,
    Map,
    List { radius: usize },
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderKind::MinDist => f.write_str("mindist"),
            DecoderKind::Map => f.write_str("map"),
            DecoderKind::List { radius } => write!(f, "list:{radius}"),
        }
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "mindist" => Ok(DecoderKind::MinDist),
            None if s == "map" => Ok(DecoderKind::Map),
            Some(("list", r)) => r
                .parse()
                .map(|radius| DecoderKind::List { radius })
                .map_err(|_| Error::Config(format!("bad list radius in {s:?}"))),
            _ => Err(Error::Config(format!("unknown decoder {s:?}"))),
        }
    }
}

/// Outcome of one decode.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub message: u32,
    /// Distance for `mindist`, posterior probability for `map`, list size
    /// for `list`.
    pub score: f64,
    /// Number of candidates the message was drawn from.
    pub ties: usize,
}

/// Messages a decoder considers equally good for one received word.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidates {
    /// Sorted message ids. Empty only for a list decoder that found nothing.
    pub messages: Vec<u32>,
    pub score: f64,
}

impl Candidates {
    /// Probability that the uniform pick equals `u`.
    pub fn hit_probability(&self, u: u32) -> (usize, usize) {
        let hit = self.messages.binary_search(&u).is_ok() as usize;
        (hit, self.messages.len())
    }

    pub fn pick(&self, src: &mut RandomSource) -> Option<DecodeResult> {
        if self.messages.is_empty() {
            return None;
        }
        let i = if self.messages.len() == 1 {
            0
        } else {
            src.below(self.messages.len() as u64) as usize
        };
        Some(DecodeResult {
            message: self.messages[i],
            score: self.score,
            ties: self.messages.len(),
        })
    }
}

fn check_len(code: &Code, y: &Bitword) -> Result<()> {
    if y.len() != code.n() {
        return Err(Error::Dimension(format!(
            "received word has length {}, code has n = {}",
            y.len(),
            code.n()
        )));
    }
    Ok(())
}

/// Messages whose closest codeword is nearest to `y`, with that distance.
pub fn min_distance_candidates(code: &Code, y: &Bitword) -> Result<Candidates> {
    check_len(code, y)?;
    let table = code.table();
    let mut best = usize::MAX;
    let mut messages = Vec::new();
    for u in 0..code.num_messages() {
        let d = code
            .entries_of(u)
            .map(|i| table.distance_to(i, y))
            .min()
            .unwrap_or(usize::MAX);
        if d < best {
            best = d;
            messages.clear();
        }
        if d == best {
            messages.push(u as u32);
        }
    }
    Ok(Candidates {
        messages,
        score: best as f64,
    })
}

/// Nearest-codeword decoding with uniform tie-breaking.
pub fn min_distance_decode(
    code: &Code,
    y: &Bitword,
    src: &mut RandomSource,
) -> Result<DecodeResult> {
    let c = min_distance_candidates(code, y)?;
    Ok(c.pick(src).expect("a code has at least one message"))
}

/// All messages with a codeword within `radius` of `y`, ascending.
pub fn list_decode(code: &Code, y: &Bitword, radius: usize) -> Result<Vec<u32>> {
    check_len(code, y)?;
    let table = code.table();
    Ok((0..code.num_messages())
        .filter(|&u| {
            code.entries_of(u)
                .any(|i| table.distance_to(i, y) <= radius)
        })
        .map(|u| u as u32)
        .collect())
}

/// Bob's model of the attack: everything needed to evaluate `p(y | x)`.
#[derive(Clone, Debug)]
pub struct AttackModel {
    kind: StrategyKind,
    n: usize,
    budget: usize,
    ell: usize,
    q: Prob,
}

impl AttackModel {
    pub fn new(code: &Code, kind: &StrategyKind, params: &ChannelParams) -> Result<Self> {
        kind.validate(params)?;
        if code.n() != params.n() {
            return Err(Error::Dimension(format!(
                "code length {} does not match block length {}",
                code.n(),
                params.n()
            )));
        }
        let ell = match kind.eps() {
            Some(e) if kind.is_push() => wait_length_for(code, e),
            _ => 0,
        };
        Ok(AttackModel {
            kind: kind.clone(),
            n: params.n(),
            budget: params.budget(),
            ell,
            q: kind.bsc_flip_prob(params).unwrap_or_else(Prob::zero),
        })
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    pub fn wait_length(&self) -> usize {
        self.ell
    }

    /// Likelihood evaluations a decode of one word costs against `code`.
    pub fn decode_cost(&self, code: &Code, y: &Bitword) -> Result<u128> {
        Ok(match &self.kind {
            StrategyKind::WaitPush { .. } | StrategyKind::WaitPushProb { .. }
                if self.ell < self.n =>
            {
                let s = code.table().prefix_range(&prefix(y, self.ell)?).len() as u128;
                s * s
            }
            _ => code.num_entries() as u128,
        })
    }
}

/// Index of the last set bit in MSB-first limbs.
fn last_set(limbs: &[u64]) -> Option<usize> {
    limbs
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &l)| l != 0)
        .map(|(k, &l)| k * 64 + 63 - l.trailing_zeros() as usize)
}

/// Set bits at positions `<= last`.
fn count_through(limbs: &[u64], last: usize) -> usize {
    let full = last / 64;
    let mut c: usize = limbs[..full].iter().map(|l| l.count_ones() as usize).sum();
    let r = last % 64;
    let keep = if r == 63 {
        u64::MAX
    } else {
        !(u64::MAX >> (r + 1))
    };
    c += (limbs[full] & keep).count_ones() as usize;
    c
}

/// Mask of positions `>= ell` in MSB-first limbs.
fn tail_mask(stride: usize, ell: usize) -> Vec<u64> {
    (0..stride)
        .map(|k| {
            let lo = k * 64;
            if ell <= lo {
                u64::MAX
            } else if ell >= lo + 64 {
                0
            } else {
                u64::MAX >> (ell - lo)
            }
        })
        .collect()
}

/// `p(y | x)` for the BSC imitation.
pub fn bsc_likelihood<W: Weight>(x: &[u64], y: &[u64], n: usize, q: &W, budget: usize) -> W {
    let e: Vec<u64> = x.iter().zip(y).map(|(a, b)| a ^ b).collect();
    let k: usize = e.iter().map(|l| l.count_ones() as usize).sum();
    let keep = W::one() - q.clone();
    if k > budget {
        W::zero()
    } else if k < budget {
        q.powi(k) * keep.powi(n - k)
    } else if budget == 0 {
        W::one()
    } else {
        let last = last_set(&e).expect("k > 0");
        q.powi(k) * keep.powi(last + 1 - k)
    }
}

/// `p(y | x, target t)` for the push stage starting at `ell`.
pub fn push_likelihood<W: Weight>(x: &[u64], t: &[u64], y: &[u64], ell: usize, budget: usize) -> W {
    let mask = tail_mask(x.len(), ell);
    let mut d = Vec::with_capacity(x.len());
    let mut k = 0usize;
    let mut dn = 0usize;
    for i in 0..x.len() {
        let dk = (x[i] ^ t[i]) & mask[i];
        let ek = x[i] ^ y[i];
        if ek & !dk != 0 {
            return W::zero();
        }
        k += ek.count_ones() as usize;
        dn += dk.count_ones() as usize;
        d.push(dk);
    }
    if k > budget {
        W::zero()
    } else if k < budget {
        W::half_pow(dn as u32)
    } else if budget == 0 {
        W::one()
    } else {
        let e: Vec<u64> = x.iter().zip(y).map(|(a, b)| a ^ b).collect();
        let last = last_set(&e).expect("k > 0");
        W::half_pow(count_through(&d, last) as u32)
    }
}

/// Unnormalized posterior mass per message, sorted by message; messages
/// with zero likelihood are absent.
fn posterior_terms<W: Weight>(
    code: &Code,
    y: &Bitword,
    model: &AttackModel,
) -> Result<Vec<(u32, W)>> {
    check_len(code, y)?;
    let table = code.table();
    let yl = y.limbs();
    let mut terms: Vec<(u32, W)> = Vec::new();
    let mut add = |entry: usize, lik: W| {
        if lik > W::zero() {
            let m = W::from_prob(&code.entry_mass(entry));
            terms.push((code.entry_message(entry), m * lik));
        }
    };
    match &model.kind {
        StrategyKind::Passive => {
            for &i in table.prefix_range(y) {
                add(i as usize, W::one());
            }
        }
        StrategyKind::Fixed { positions } => {
            let mut pos = positions.clone();
            pos.sort_unstable();
            pos.dedup();
            pos.truncate(model.budget);
            for i in 0..code.num_entries() {
                if code.entry_word(i).with_flips(&pos)? == *y {
                    add(i, W::one());
                }
            }
        }
        StrategyKind::BscSim { .. } => {
            let q = W::from_prob(&model.q);
            for i in 0..code.num_entries() {
                add(
                    i,
                    bsc_likelihood(table.limbs(i), yl, model.n, &q, model.budget),
                );
            }
        }
        StrategyKind::WaitPush { .. } | StrategyKind::WaitPushProb { .. } => {
            if model.ell >= model.n {
                for &i in table.prefix_range(y) {
                    add(i as usize, W::one());
                }
            } else {
                // No flips happen before `ell`, so sender and target both agree
                // with y on that prefix.
                let mut set: Vec<usize> = table
                    .prefix_range(&prefix(y, model.ell)?)
                    .iter()
                    .map(|&i| i as usize)
                    .collect();
                set.sort_unstable();
                let weights: Vec<W> = match model.kind {
                    StrategyKind::WaitPush { .. } => {
                        let w = W::one() / W::from_prob(&crate::prob::int(set.len() as u64));
                        vec![w; set.len()]
                    }
                    _ => {
                        let masses: Vec<W> = set
                            .iter()
                            .map(|&i| W::from_prob(&code.entry_mass(i)))
                            .collect();
                        let total = masses.iter().cloned().fold(W::zero(), |a, b| a + b);
                        masses.into_iter().map(|m| m / total.clone()).collect()
                    }
                };
                for &x in &set {
                    let mut lik = W::zero();
                    for (&t, w) in set.iter().zip(&weights) {
                        let l: W = push_likelihood(
                            table.limbs(x),
                            table.limbs(t),
                            yl,
                            model.ell,
                            model.budget,
                        );
                        if l > W::zero() {
                            lik = lik + w.clone() * l;
                        }
                    }
                    add(x, lik);
                }
            }
        }
    }
    terms.sort_by_key(|(u, _)| *u);
    let mut merged: Vec<(u32, W)> = Vec::with_capacity(terms.len());
    for (u, w) in terms {
        match merged.last_mut() {
            Some((v, acc)) if *v == u => *acc = acc.clone() + w,
            _ => merged.push((u, w)),
        }
    }
    Ok(merged)
}

/// Posterior `p(u | y)` for every message under the attack model.
///
/// When `y` is impossible under the model every entry is zero.
pub fn map_posterior<W: Weight>(code: &Code, y: &Bitword, model: &AttackModel) -> Result<Vec<W>> {
    let terms: Vec<(u32, W)> = posterior_terms(code, y, model)?;
    let total = terms.iter().fold(W::zero(), |a, (_, w)| a + w.clone());
    let mut post = vec![W::zero(); code.num_messages()];
    for (u, w) in terms {
        post[u as usize] = w / total.clone();
    }
    Ok(post)
}

/// Messages of maximal posterior, with that posterior as the score. If `y`
/// has zero likelihood under every message all messages are tied.
pub fn map_candidates<W: Weight>(
    code: &Code,
    y: &Bitword,
    model: &AttackModel,
) -> Result<Candidates> {
    let terms: Vec<(u32, W)> = posterior_terms(code, y, model)?;
    if terms.is_empty() {
        return Ok(Candidates {
            messages: (0..code.num_messages() as u32).collect(),
            score: 0.0,
        });
    }
    let total = terms.iter().fold(W::zero(), |a, (_, w)| a + w.clone());
    let best = terms
        .iter()
        .map(|(_, w)| w.clone())
        .fold(W::zero(), |a, b| if b > a { b } else { a });
    let messages: Vec<u32> = terms
        .iter()
        .filter(|(_, w)| w.ties_with(&best))
        .map(|(u, _)| *u)
        .collect();
    Ok(Candidates {
        messages,
        score: (best / total).as_f64(),
    })
}

/// Exact MAP decoding in rational arithmetic, guarded against blow-up.
pub fn map_decode_exact(
    code: &Code,
    y: &Bitword,
    model: &AttackModel,
    src: &mut RandomSource,
) -> Result<DecodeResult> {
    check_len(code, y)?;
    let states = model.decode_cost(code, y)?;
    if states > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            states,
            limit: ENUMERATION_LIMIT,
        });
    }
    let c = map_candidates::<Prob>(code, y, model)?;
    Ok(c.pick(src).expect("MAP always has candidates"))
}

/// MAP decoding in double precision, ties within a relative `1e-12`.
pub fn map_decode_fast(
    code: &Code,
    y: &Bitword,
    model: &AttackModel,
    src: &mut RandomSource,
) -> Result<DecodeResult> {
    let c = map_candidates::<f64>(code, y, model)?;
    Ok(c.pick(src).expect("MAP always has candidates"))
}

/// A configured decoder for repeated use.
#[derive(Clone, Debug)]
pub struct Decoder {
    kind: DecoderKind,
    model: Option<AttackModel>,
    exact: bool,
}

impl Decoder {
    /// `exact` selects rational arithmetic for MAP.
    pub fn new(
        kind: &DecoderKind,
        code: &Code,
        attack: &StrategyKind,
        params: &ChannelParams,
        exact: bool,
    ) -> Result<Self> {
        let model = match kind {
            DecoderKind::Map => Some(AttackModel::new(code, attack, params)?),
            _ => None,
        };
        Ok(Decoder {
            kind: kind.clone(),
            model,
            exact,
        })
    }

    pub fn kind(&self) -> &DecoderKind {
        &self.kind
    }

    pub fn candidates(&self, code: &Code, y: &Bitword) -> Result<Candidates> {
        match &self.kind {
            DecoderKind::MinDist => min_distance_candidates(code, y),
            DecoderKind::List { radius } => {
                let messages = list_decode(code, y, *radius)?;
                let score = messages.len() as f64;
                Ok(Candidates { messages, score })
            }
            DecoderKind::Map => {
                let model = self.model.as_ref().expect("map decoder holds a model");
                if self.exact {
                    let states = model.decode_cost(code, y)?;
                    if states > ENUMERATION_LIMIT {
                        return Err(Error::Capacity {
                            states,
                            limit: ENUMERATION_LIMIT,
                        });
                    }
                    map_candidates::<Prob>(code, y, model)
                } else {
                    map_candidates::<f64>(code, y, model)
                }
            }
        }
    }

    /// Decodes `y`; `None` when a list decoder returns an empty list.
    pub fn decode(
        &self,
        code: &Code,
        y: &Bitword,
        src: &mut RandomSource,
    ) -> Result<Option<DecodeResult>> {
        Ok(self.candidates(code, y)?.pick(src))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::output_distribution;
    use crate::codebook::{
        make_random_code, make_repetition_code, DeterministicCode, MessageBook, ProbabilisticCode,
    };
    use crate::prob::{self, ratio};
    use num_traits::{One, Zero};
    use std::collections::HashMap;

    fn w(s: &str) -> Bitword {
        s.parse().unwrap()
    }

    #[test]
    fn tokens() {
        for t in ["mindist", "map", "list:3"] {
            assert_eq!(t.parse::<DecoderKind>().unwrap().to_string(), t);
        }
        assert!("list".parse::<DecoderKind>().is_err());
        assert!("list:-1".parse::<DecoderKind>().is_err());
        assert!("ml".parse::<DecoderKind>().is_err());
    }

    #[test]
    fn min_distance_examples() {
        let rep: Code = make_repetition_code(3).unwrap().into();
        let mut src = RandomSource::new(0, 0);
        let r = min_distance_decode(&rep, &w("001"), &mut src).unwrap();
        assert_eq!((r.message, r.ties, r.score), (0, 1, 1.0));
        let r = min_distance_decode(&rep, &w("111"), &mut src).unwrap();
        assert_eq!((r.message, r.ties, r.score), (1, 1, 0.0));
        assert!(min_distance_decode(&rep, &w("11"), &mut src).is_err());
    }

    #[test]
    fn min_distance_ties_are_fair() {
        let code: Code = DeterministicCode::new(2, vec![w("00"), w("11")])
            .unwrap()
            .into();
        let mut src = RandomSource::new(1, 0);
        let trials = 10_000;
        let zeros = (0..trials)
            .filter(|_| {
                min_distance_decode(&code, &w("01"), &mut src)
                    .unwrap()
                    .message
                    == 0
            })
            .count();
        let f = zeros as f64 / trials as f64;
        // sd = 0.005.
        assert!((f - 0.5).abs() < 0.025, "{f}");
    }

    #[test]
    fn list_decoding_examples() {
        let code: Code = make_random_code(&mut RandomSource::new(2, 0), 8, 0.5)
            .unwrap()
            .into();
        let x = code.entry_word(3);
        assert_eq!(list_decode(&code, &x, 0).unwrap(), vec![3]);
        assert_eq!(
            list_decode(&code, &x, 8).unwrap(),
            (0..16).collect::<Vec<u32>>()
        );
        let mut prev = Vec::new();
        for r in 0..=8 {
            let l = list_decode(&code, &x, r).unwrap();
            assert!(prev.iter().all(|u| l.contains(u)));
            prev = l;
        }
    }

    #[test]
    fn last_set_and_counts() {
        let a = Bitword::from_fn(130, |i| i == 3 || i == 64 || i == 127);
        assert_eq!(last_set(a.limbs()), Some(127));
        assert_eq!(count_through(a.limbs(), 63), 1);
        assert_eq!(count_through(a.limbs(), 64), 2);
        assert_eq!(count_through(a.limbs(), 127), 3);
        assert_eq!(count_through(a.limbs(), 3), 1);
        assert_eq!(count_through(a.limbs(), 2), 0);
        assert_eq!(last_set(Bitword::zeros(70).limbs()), None);
        let m = tail_mask(2, 70);
        assert_eq!(m, vec![0, u64::MAX >> 6]);
    }

    /// Closed-form likelihoods against the strategies' enumerated coin trees.
    fn check_model_against_enumeration(code: &Code, kind: &StrategyKind, params: &ChannelParams) {
        let model = AttackModel::new(code, kind, params).unwrap();
        let mut joint: HashMap<Bitword, Vec<Prob>> = HashMap::new();
        for e in 0..code.num_entries() {
            let mass = code.entry_mass(e);
            for o in output_distribution(code, kind, params, e).unwrap() {
                let v = joint
                    .entry(o.y)
                    .or_insert_with(|| vec![Prob::zero(); code.num_messages()]);
                let u = code.entry_message(e) as usize;
                v[u] = &v[u] + &mass * &o.prob;
            }
        }
        for (y, v) in joint {
            let total = prob::sum(v.iter());
            let post: Vec<Prob> = map_posterior(code, &y, &model).unwrap();
            for u in 0..v.len() {
                assert_eq!(post[u], &v[u] / &total, "y={y} u={u} kind={kind}");
            }
            let fpost: Vec<f64> = map_posterior(code, &y, &model).unwrap();
            for u in 0..v.len() {
                assert!((fpost[u] - prob::to_f64(&post[u])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn likelihoods_match_enumeration_deterministic() {
        let code: Code = make_random_code(&mut RandomSource::new(7, 0), 10, 0.5)
            .unwrap()
            .into();
        let params = ChannelParams::new(10, 0.3).unwrap();
        for k in [
            "passive",
            "bsc:0.1",
            "bsc:0.3",
            "waitpush:0.2",
            "waitpush:0.9",
            "fixed:1,4,9,2",
        ] {
            check_model_against_enumeration(&code, &k.parse().unwrap(), &params);
        }
    }

    #[test]
    fn likelihoods_match_enumeration_probabilistic() {
        let books = vec![
            MessageBook {
                prob: ratio(1, 2),
                codewords: vec![(w("000000"), ratio(1, 3)), (w("001111"), ratio(2, 3))],
            },
            MessageBook {
                prob: ratio(1, 4),
                codewords: vec![(w("011010"), ratio(1, 1))],
            },
            MessageBook {
                prob: ratio(1, 4),
                codewords: vec![(w("000111"), ratio(1, 2)), (w("111000"), ratio(1, 2))],
            },
        ];
        let code: Code = ProbabilisticCode::new(6, books, None).unwrap().into();
        let params = ChannelParams::new(6, 0.5).unwrap();
        for k in ["waitpush:0.1", "waitpushprob:0.1", "bsc:0.25"] {
            check_model_against_enumeration(&code, &k.parse().unwrap(), &params);
        }
    }

    #[test]
    fn passive_posterior_is_a_point_mass() {
        let code: Code = make_random_code(&mut RandomSource::new(7, 0), 10, 0.5)
            .unwrap()
            .into();
        let params = ChannelParams::new(10, 0.3).unwrap();
        let model = AttackModel::new(&code, &StrategyKind::Passive, &params).unwrap();
        let post: Vec<Prob> = map_posterior(&code, &code.entry_word(9), &model).unwrap();
        assert!(post[9].is_one());
        let r = map_decode_exact(
            &code,
            &code.entry_word(9),
            &model,
            &mut RandomSource::new(0, 0),
        )
        .unwrap();
        assert_eq!((r.message, r.ties), (9, 1));
    }

    /// Repetition code n=2, p=1/2 (budget 1), flip probability q = 1/2 - eps.
    /// Hand table: from 00, y=00 w.p. (1-q)^2, 10 w.p. q, 01 w.p. (1-q)q.
    #[test]
    fn bsc_posterior_hand_table() {
        let code: Code = make_repetition_code(2).unwrap().into();
        let params = ChannelParams::new(2, 0.5).unwrap();
        let eps = ratio(1, 1000);
        let q = ratio(1, 2) - &eps;
        let model = AttackModel::new(&code, &StrategyKind::BscSim { eps }, &params).unwrap();
        let one = Prob::one();
        let keep = &one - &q;
        // y = 10: from 00 needs a flip at 0 (q); from 11 needs a flip at 1
        // after keeping bit 0 ((1-q) q).
        let a = q.clone();
        let b = &keep * &q;
        let post: Vec<Prob> = map_posterior(&code, &w("10"), &model).unwrap();
        assert_eq!(post[0], &a / (&a + &b));
        assert_eq!(post[1], &b / (&a + &b));
        let post: Vec<Prob> = map_posterior(&code, &w("00"), &model).unwrap();
        assert!(post[0].is_one());
    }

    #[test]
    fn impossible_word_ties_everything() {
        let code: Code = make_repetition_code(4).unwrap().into();
        let params = ChannelParams::new(4, 0.25).unwrap();
        let model = AttackModel::new(&code, &StrategyKind::Passive, &params).unwrap();
        let c = map_candidates::<Prob>(&code, &w("0110"), &model).unwrap();
        assert_eq!(c.messages, vec![0, 1]);
    }

    #[test]
    fn decode_cost_counts_likelihood_evaluations() {
        let code: Code = make_random_code(&mut RandomSource::new(1, 1), 16, 0.5)
            .unwrap()
            .into();
        let params = ChannelParams::new(16, 0.1).unwrap();
        let bsc = AttackModel::new(&code, &"bsc:0.05".parse().unwrap(), &params).unwrap();
        assert_eq!(bsc.decode_cost(&code, &Bitword::zeros(16)).unwrap(), 256);
        let push = AttackModel::new(&code, &"waitpush:0.5".parse().unwrap(), &params).unwrap();
        assert_eq!(push.wait_length(), 4);
        let y = code.entry_word(0);
        let s = code.consistent_set(&prefix(&y, 4).unwrap()).unwrap().len() as u128;
        assert_eq!(push.decode_cost(&code, &y).unwrap(), s * s);
    }
}
