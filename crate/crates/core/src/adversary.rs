//! Jamming strategies.
//!
//! * `passive` never flips.
//! * `bsc:<eps>` flips each bit with probability `p - eps` until the budget
//!   runs out, imitating a binary symmetric channel.
//! * `waitpush:<eps>` watches the first `ell = floor((R - eps/2) n)` bits,
//!   picks a target uniformly among the code entries that agree with them,
//!   then flips each later bit where the sent word and the target differ with
//!   probability 1/2, while budget remains.
//! * `waitpushprob:<eps>` is the same attack with the target drawn according
//!   to the code's own transmission probabilities.
//! * `fixed:<i,j,..>` flips the listed positions (0-based) while budget
//!   remains. Useful for hand-checked fixtures.
//!
//! The module also enumerates each strategy's behaviour exactly, for the
//! exhaustive evaluator.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::bitcore::{prefix, Bitword, RandomSource};
use crate::channel::{Adversary, ChannelParams, StrategyReport};
use crate::codebook::Code;
use crate::error::{Error, Result};
use crate::prob::{self, Prob};

/// A strategy and its parameters, as named by a command-line token.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyKind {
    Passive,
    BscSim { eps: Prob },
    WaitPush { eps: Prob },
    WaitPushProb { eps: Prob },
    Fixed { positions: Vec<usize> },
}

impl StrategyKind {
    pub fn eps(&self) -> Option<&Prob> {
        match self {
            StrategyKind::BscSim { eps }
            | StrategyKind::WaitPush { eps }
            | StrategyKind::WaitPushProb { eps } => Some(eps),
            _ => None,
        }
    }

    /// The same strategy with its margin replaced; margin-free kinds are
    /// returned unchanged.
    pub fn with_eps(&self, new: Prob) -> StrategyKind {
        match self {
            StrategyKind::BscSim { .. } => StrategyKind::BscSim { eps: new },
            StrategyKind::WaitPush { .. } => StrategyKind::WaitPush { eps: new },
            StrategyKind::WaitPushProb { .. } => StrategyKind::WaitPushProb { eps: new },
            other => other.clone(),
        }
    }

    pub fn is_push(&self) -> bool {
        matches!(
            self,
            StrategyKind::WaitPush { .. } | StrategyKind::WaitPushProb { .. }
        )
    }

    /// Checks the parameters against a channel.
    pub fn validate(&self, params: &ChannelParams) -> Result<()> {
        match self {
            StrategyKind::BscSim { eps } => {
                if !eps.is_positive() || eps > params.p() {
                    return Err(Error::Config(format!(
                        "bsc margin {eps} must lie in (0, p] with p = {}",
                        params.p()
                    )));
                }
            }
            StrategyKind::WaitPush { eps } | StrategyKind::WaitPushProb { eps } => {
                if !eps.is_positive() {
                    return Err(Error::Config(format!("push margin {eps} must be positive")));
                }
            }
            StrategyKind::Fixed { positions } => {
                if let Some(i) = positions.iter().find(|&&i| i >= params.n()) {
                    return Err(Error::Config(format!(
                        "fixed flip position {i} outside block length {}",
                        params.n()
                    )));
                }
            }
            StrategyKind::Passive => {}
        }
        Ok(())
    }

    /// Per-bit flip probability of the BSC imitation, `p - eps`.
    pub fn bsc_flip_prob(&self, params: &ChannelParams) -> Option<Prob> {
        match self {
            StrategyKind::BscSim { eps } => Some(params.p() - eps),
            _ => None,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Passive => f.write_str("passive"),
            StrategyKind::BscSim { eps } => write!(f, "bsc:{}", prob::format_short(eps)),
            StrategyKind::WaitPush { eps } => write!(f, "waitpush:{}", prob::format_short(eps)),
            StrategyKind::WaitPushProb { eps } => {
                write!(f, "waitpushprob:{}", prob::format_short(eps))
            }
            StrategyKind::Fixed { positions } => {
                let list: Vec<String> = positions.iter().map(|i| i.to_string()).collect();
                write!(f, "fixed:{}", list.join(","))
            }
        }
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let eps = || -> Result<Prob> {
            let a = arg
                .ok_or_else(|| Error::Config(format!("{name} needs a margin, e.g. {name}:0.05")))?;
            prob::parse_prob(a).map_err(|_| Error::Config(format!("bad margin in {s:?}")))
        };
        match name {
            "passive" if arg.is_none() => Ok(StrategyKind::Passive),
            "bsc" => Ok(StrategyKind::BscSim { eps: eps()? }),
            "waitpush" => Ok(StrategyKind::WaitPush { eps: eps()? }),
            "waitpushprob" => Ok(StrategyKind::WaitPushProb { eps: eps()? }),
            "fixed" => {
                let positions = arg
                    .unwrap_or("")
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Config(format!("bad position list in {s:?}")))?;
                Ok(StrategyKind::Fixed { positions })
            }
            _ => Err(Error::Config(format!("unknown adversary {s:?}"))),
        }
    }
}

/// Length of the observation stage, `floor(message_bits - eps n / 2)`
/// clamped to `[0, n]`. `message_bits` is `R n`, i.e. `H(p_U)`.
pub fn wait_length(message_bits: f64, eps: &Prob, n: usize) -> usize {
    let v = message_bits - prob::to_f64(eps) * n as f64 / 2.0;
    // Tolerance absorbs float noise when the value is an exact integer.
    let l = (v + 1e-9).floor();
    if l <= 0.0 {
        0
    } else {
        (l as usize).min(n)
    }
}

/// Observation length used against `code`.
pub fn wait_length_for(code: &Code, eps: &Prob) -> usize {
    wait_length(code.message_entropy(), eps, code.n())
}

/// A running strategy instance. One per transmission; never shared.
#[derive(Clone)]
pub struct Strategy<'c> {
    kind: StrategyKind,
    code: Option<&'c Code>,
    flip_prob: f64,
    ell: usize,
    budget: usize,
    used: usize,
    pos: usize,
    observed: Vec<u8>,
    target: Option<usize>,
    target_word: Option<Bitword>,
    consistent_size: Option<usize>,
    degraded: bool,
}

impl<'c> Strategy<'c> {
    pub fn new(kind: &StrategyKind, code: &'c Code, params: &ChannelParams) -> Result<Self> {
        let mut s = Self::without_code(&StrategyKind::Passive, params)?;
        kind.validate(params)?;
        if code.n() != params.n() {
            return Err(Error::Dimension(format!(
                "code length {} does not match block length {}",
                code.n(),
                params.n()
            )));
        }
        s.kind = kind.clone();
        s.code = Some(code);
        s.flip_prob = kind.bsc_flip_prob(params).map_or(0.0, |q| prob::to_f64(&q));
        s.ell = kind
            .eps()
            .filter(|_| kind.is_push())
            .map_or(0, |e| wait_length_for(code, e));
        Ok(s)
    }

    /// A strategy that does not consult a code: `passive`, `bsc`, or `fixed`.
    pub fn without_code(kind: &StrategyKind, params: &ChannelParams) -> Result<Self> {
        if kind.is_push() {
            return Err(Error::Config(format!("{kind} needs the code")));
        }
        kind.validate(params)?;
        Ok(Strategy {
            kind: kind.clone(),
            code: None,
            flip_prob: kind.bsc_flip_prob(params).map_or(0.0, |q| prob::to_f64(&q)),
            ell: 0,
            budget: params.budget(),
            used: 0,
            pos: 0,
            observed: Vec::new(),
            target: None,
            target_word: None,
            consistent_size: None,
            degraded: false,
        })
    }

    pub fn wait_length(&self) -> usize {
        self.ell
    }

    fn select_target(&mut self, rng: &mut RandomSource) {
        let seen = Bitword::from_bits(&self.observed).expect("observed bits");
        let code = self.code.expect("push strategies hold a code");
        let mut idx: Vec<usize> = code
            .table()
            .prefix_range(&seen)
            .iter()
            .map(|&i| i as usize)
            .collect();
        idx.sort_unstable();
        self.consistent_size = Some(idx.len());
        if idx.is_empty() {
            self.degraded = true;
            return;
        }
        let pick = match self.kind {
            StrategyKind::WaitPushProb { .. } => {
                let w: Vec<f64> = idx.iter().map(|&i| code.entry_mass_f64(i)).collect();
                rng.weighted_index(&w).unwrap_or(0)
            }
            _ => rng.below(idx.len() as u64) as usize,
        };
        self.target = Some(idx[pick]);
        self.target_word = Some(code.entry_word(idx[pick]));
    }
}

impl Adversary for Strategy<'_> {
    fn begin(&mut self, params: &ChannelParams) -> Result<()> {
        self.budget = params.budget();
        self.used = 0;
        self.pos = 0;
        self.observed.clear();
        self.target = None;
        self.target_word = None;
        self.consistent_size = None;
        self.degraded = false;
        Ok(())
    }

    fn step(&mut self, bit: u8, rng: &mut RandomSource) -> u8 {
        let i = self.pos;
        self.pos += 1;
        let room = self.used < self.budget;
        let flip = match &self.kind {
            StrategyKind::Passive => false,
            StrategyKind::BscSim { .. } => room && rng.bernoulli(self.flip_prob),
            StrategyKind::Fixed { positions } => room && positions.contains(&i),
            StrategyKind::WaitPush { .. } | StrategyKind::WaitPushProb { .. } => {
                if i < self.ell {
                    self.observed.push(bit);
                    false
                } else {
                    if i == self.ell {
                        self.select_target(rng);
                    }
                    match &self.target_word {
                        Some(t) => room && t.get(i) != bit && rng.bit() == 1,
                        None => false,
                    }
                }
            }
        };
        if flip {
            self.used += 1;
        }
        flip as u8
    }

    fn report(&self) -> StrategyReport {
        StrategyReport {
            target_entry: self.target,
            target_word: self.target_word.clone(),
            consistent_size: self.consistent_size,
            degraded: self.degraded,
        }
    }
}

/// Exact target law of a push strategy after observing `seen`.
///
/// `waitpush` is uniform over consistent entries; `waitpushprob` weights each
/// entry by its mass. Other kinds have no target and yield an empty list.
pub fn target_distribution(
    code: &Code,
    kind: &StrategyKind,
    seen: &Bitword,
) -> Result<Vec<(usize, Prob)>> {
    let set = code.consistent_set(seen)?;
    if set.is_empty() {
        return Ok(Vec::new());
    }
    Ok(match kind {
        StrategyKind::WaitPush { .. } => {
            let w = prob::ratio(1, set.len() as i64);
            set.members().iter().map(|m| (m.entry, w.clone())).collect()
        }
        StrategyKind::WaitPushProb { .. } => set
            .members()
            .iter()
            .zip(set.selection_weights())
            .map(|(m, w)| (m.entry, w))
            .collect(),
        _ => Vec::new(),
    })
}

/// Positions `>= ell` where `x` and `target` differ.
pub fn disagreements(x: &Bitword, target: &Bitword, ell: usize) -> Vec<usize> {
    (ell..x.len())
        .filter(|&i| x.get(i) != target.get(i))
        .collect()
}

/// Every flip pattern of the push stage with its probability.
///
/// A fair coin is tossed at each disagreement position in order until
/// `budget` flips have happened.
pub fn push_flip_patterns(
    x: &Bitword,
    target: &Bitword,
    ell: usize,
    budget: usize,
) -> Vec<(Vec<usize>, Prob)> {
    let d = disagreements(x, target, ell);
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((k, flips)) = stack.pop() {
        if k == d.len() || flips.len() == budget {
            out.push((flips, prob::half_pow(k as u32)));
            continue;
        }
        let mut with = flips.clone();
        with.push(d[k]);
        stack.push((k + 1, flips));
        stack.push((k + 1, with));
    }
    out.sort();
    out
}

/// Every flip pattern of the BSC imitation over `n` bits with per-bit
/// probability `q`, stopping once `budget` flips have happened.
pub fn bsc_flip_patterns(n: usize, q: &Prob, budget: usize) -> Vec<(Vec<usize>, Prob)> {
    let keep = Prob::one() - q;
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new(), Prob::one())];
    while let Some((i, flips, p)) = stack.pop() {
        if i == n || flips.len() == budget {
            out.push((flips, p));
            continue;
        }
        if !keep.is_zero() {
            stack.push((i + 1, flips.clone(), &p * &keep));
        }
        if !q.is_zero() {
            let mut with = flips;
            with.push(i);
            stack.push((i + 1, with, &p * q));
        }
    }
    out.sort();
    out
}

/// One way a transmission can come out, with its probability.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub y: Bitword,
    pub flips: usize,
    pub prob: Prob,
    /// Push target entry, when the strategy has one.
    pub target: Option<usize>,
}

/// Exact distribution of received words when code entry `entry` is sent.
pub fn output_distribution(
    code: &Code,
    kind: &StrategyKind,
    params: &ChannelParams,
    entry: usize,
) -> Result<Vec<Outcome>> {
    kind.validate(params)?;
    let x = code.entry_word(entry);
    let budget = params.budget();
    let single = |flips: Vec<usize>| -> Result<Vec<Outcome>> {
        Ok(vec![Outcome {
            y: x.with_flips(&flips)?,
            flips: flips.len(),
            prob: Prob::one(),
            target: None,
        }])
    };
    match kind {
        StrategyKind::Passive => single(Vec::new()),
        StrategyKind::Fixed { positions } => {
            let mut pos = positions.clone();
            pos.sort_unstable();
            pos.dedup();
            pos.truncate(budget);
            single(pos)
        }
        StrategyKind::BscSim { .. } => {
            let q = kind.bsc_flip_prob(params).expect("bsc kind");
            bsc_flip_patterns(x.len(), &q, budget)
                .into_iter()
                .map(|(f, p)| {
                    Ok(Outcome {
                        y: x.with_flips(&f)?,
                        flips: f.len(),
                        prob: p,
                        target: None,
                    })
                })
                .collect()
        }
        StrategyKind::WaitPush { eps } | StrategyKind::WaitPushProb { eps } => {
            let ell = wait_length_for(code, eps);
            if ell >= x.len() {
                return single(Vec::new());
            }
            let seen = prefix(&x, ell)?;
            let mut out = Vec::new();
            for (t, wt) in target_distribution(code, kind, &seen)? {
                let tw = code.entry_word(t);
                for (f, p) in push_flip_patterns(&x, &tw, ell, budget) {
                    out.push(Outcome {
                        y: x.with_flips(&f)?,
                        flips: f.len(),
                        prob: &wt * &p,
                        target: Some(t),
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Upper bound on the number of outcomes [`output_distribution`] produces
/// per entry, for guarding enumeration size.
pub fn outcome_bound(code: &Code, kind: &StrategyKind, params: &ChannelParams) -> u128 {
    let n = params.n() as u64;
    let b = params.budget() as u64;
    match kind {
        StrategyKind::Passive | StrategyKind::Fixed { .. } => 1,
        StrategyKind::BscSim { .. } => (0..=b.min(n))
            .map(|k| {
                let c = prob::binomial(n, k);
                u128::try_from(c).unwrap_or(u128::MAX)
            })
            .fold(0u128, |a, c| a.saturating_add(c)),
        StrategyKind::WaitPush { eps } | StrategyKind::WaitPushProb { eps } => {
            let ell = wait_length_for(code, eps);
            let tail = (params.n() - ell.min(params.n())) as u32;
            let leaves: u128 = if tail >= 127 {
                u128::MAX
            } else {
                1u128 << tail
            };
            let largest = code.table().largest_prefix_group(ell) as u128;
            largest.saturating_mul(leaves)
        }
    }
}
