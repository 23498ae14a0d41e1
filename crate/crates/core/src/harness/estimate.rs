//! Results of one experiment.

use std::collections::BTreeMap;

use crate::prob::{self, Prob};

use super::spec::{ExperimentSpec, Mode, ResultRow};
use super::stats::{wilson, Interval};

/// Counters gathered over Monte Carlo trials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Trials by number of applied flips, `0..=budget`.
    pub flip_histogram: Vec<u64>,
    pub budget_exhausted: u64,
    /// Trials in which a flip request was dropped by the referee.
    pub clamped: u64,
    /// Push trials that found no consistent entry and stayed passive.
    pub degraded: u64,
    /// Consistent-set sizes seen by a push adversary when choosing a target.
    pub consistent_sizes: BTreeMap<usize, u64>,
    /// Trials whose consistent set had fewer than `2^(eps n / 4)` entries.
    pub small_consistent: u64,
    /// Trials past that test whose target was a different word closer than
    /// `2pn - eps n / 8` to the sent one.
    pub close_target: u64,
    /// `(errors, trials)` per message, when requested.
    pub per_message: BTreeMap<u32, (u64, u64)>,
}

impl Diagnostics {
    pub fn new(budget: usize) -> Self {
        Diagnostics {
            flip_histogram: vec![0; budget + 1],
            ..Default::default()
        }
    }

    pub fn merge(mut self, other: Diagnostics) -> Self {
        for (a, b) in self.flip_histogram.iter_mut().zip(&other.flip_histogram) {
            *a += b;
        }
        self.budget_exhausted += other.budget_exhausted;
        self.clamped += other.clamped;
        self.degraded += other.degraded;
        for (k, v) in other.consistent_sizes {
            *self.consistent_sizes.entry(k).or_default() += v;
        }
        self.small_consistent += other.small_consistent;
        self.close_target += other.close_target;
        for (u, (e, t)) in other.per_message {
            let slot = self.per_message.entry(u).or_default();
            slot.0 += e;
            slot.1 += t;
        }
        self
    }

    /// Trials in which a consistent-set size was recorded.
    pub fn consistent_observed(&self) -> u64 {
        self.consistent_sizes.values().sum()
    }

    /// Frequency of a small consistent set among observed trials.
    pub fn small_consistent_rate(&self) -> Interval {
        wilson(self.small_consistent, self.consistent_observed())
    }

    /// Frequency of a close target among trials with a large consistent set.
    pub fn close_target_rate(&self) -> Interval {
        wilson(
            self.close_target,
            self.consistent_observed() - self.small_consistent,
        )
    }

    /// Message with the highest empirical error rate.
    pub fn worst_message(&self) -> Option<(u32, f64)> {
        self.per_message
            .iter()
            .map(|(&u, &(e, t))| (u, e as f64 / t as f64))
            .fold(None, |best, c| match best {
                Some((_, r)) if r >= c.1 => best,
                _ => Some(c),
            })
    }
}

/// Exact quantities from full enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDetail {
    pub error: Prob,
    /// Law of the number of applied flips, `0..=budget`.
    pub flip_distribution: Vec<Prob>,
    pub exhaustion: Prob,
    /// Probability of a small consistent set (push attacks only).
    pub small_consistent: Option<Prob>,
    /// Probability of a large consistent set together with a close target.
    pub close_target: Option<Prob>,
    /// Error probability conditioned on each message.
    pub message_errors: Vec<Prob>,
    /// Number of `(entry, outcome)` pairs enumerated.
    pub outcomes: u64,
}

impl ExactDetail {
    pub fn worst_message(&self) -> Option<(u32, &Prob)> {
        self.message_errors
            .iter()
            .enumerate()
            .fold(None, |best: Option<(u32, &Prob)>, (u, e)| match best {
                Some((_, b)) if b >= e => best,
                _ => Some((u as u32, e)),
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorEstimate {
    pub mode: Mode,
    /// Rate of the code used (`log2 M / n`, or `H(U) / n` for stochastic codes).
    pub rate: f64,
    /// Monte Carlo trials; zero for exact evaluation.
    pub trials: u64,
    pub errors: u64,
    pub interval: Interval,
    pub diagnostics: Diagnostics,
    pub exact: Option<ExactDetail>,
}

impl ErrorEstimate {
    pub fn estimate(&self) -> f64 {
        self.interval.estimate
    }

    pub fn budget_exhaust_rate(&self) -> f64 {
        match &self.exact {
            Some(d) => prob::to_f64(&d.exhaustion),
            None if self.trials == 0 => 0.0,
            None => self.diagnostics.budget_exhausted as f64 / self.trials as f64,
        }
    }

    pub fn row(&self, spec: &ExperimentSpec) -> ResultRow {
        ResultRow {
            n: spec.n,
            rate: self.rate,
            p: spec.p.clone(),
            eps: spec.adversary.eps().cloned(),
            adversary: spec.adversary.clone(),
            decoder: spec.decoder.clone(),
            mode: self.mode,
            trials: self.trials,
            err: self.interval.estimate,
            lo: self.interval.lo,
            hi: self.interval.hi,
            budget_exhaust_rate: self.budget_exhaust_rate(),
        }
    }
}
