//! Two-level dyadic partition of a consistent set.
//!
//! Level one groups members by `mass / prefix_mass` into cells
//! `(2^-3i, 2^-3i+3]` for `i < n`, with cell `n` catching everything at or
//! below `2^-3n+3`. Level two splits each level-one cell the same way by the
//! message probability conditioned on that cell. Inside a cell all masses
//! agree up to the factor 8 of the dyadic width.

use num_traits::{Signed, Zero};

use crate::codebook::ConsistentSet;
use crate::error::{Error, Result};
use crate::prob::{self, entropy_exact, Prob};

/// Dyadic cell of a ratio in `[0, 1]`: the `i < n` with
/// `2^-3i < ratio <= 2^-3i+3`, else `n`.
pub fn dyadic_index(ratio: &Prob, n: usize) -> usize {
    for i in 1..n {
        if ratio > &prob::half_pow(3 * i as u32) {
            return i;
        }
    }
    n
}

/// `sum_k share_k H_k >= H - H(share)`, evaluated on one instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregation {
    /// `sum_k share_k H_k`.
    pub weighted: f64,
    /// Entropy of the message distribution before splitting.
    pub entropy: f64,
    /// Entropy of the cell shares.
    pub share_entropy: f64,
}

impl Aggregation {
    pub fn holds(&self) -> bool {
        self.weighted >= self.entropy - self.share_entropy - 1e-9
    }
}

/// A nonempty cell at either level.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub index: usize,
    /// Positions in the consistent set's member list.
    pub members: Vec<usize>,
    /// Joint mass of the members.
    pub mass: Prob,
    /// Mass relative to the parent (the prefix for level one).
    pub share: Prob,
    /// Message distribution inside the cell, sorted by message.
    pub messages: Vec<(u32, Prob)>,
    pub message_entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level1 {
    pub cell: Cell,
    /// Nonempty level-two cells, by index.
    pub children: Vec<Cell>,
    pub aggregation: Aggregation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicPartition {
    /// Codeword length, which is also the number of cells per level.
    pub n: usize,
    pub prefix_mass: Prob,
    pub message_entropy: f64,
    /// Nonempty level-one cells, by index.
    pub cells: Vec<Level1>,
    pub aggregation: Aggregation,
}

impl DyadicPartition {
    pub fn cell(&self, i: usize, j: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.cell.index == i)?
            .children
            .iter()
            .find(|c| c.index == j)
    }
}

fn message_distribution(cset: &ConsistentSet, members: &[usize], mass: &Prob) -> Vec<(u32, Prob)> {
    let mut out: Vec<(u32, Prob)> = Vec::new();
    let mut sorted: Vec<usize> = members.to_vec();
    sorted.sort_by_key(|&k| cset.members()[k].message);
    for k in sorted {
        let m = &cset.members()[k];
        match out.last_mut() {
            Some((u, p)) if *u == m.message => *p += &m.mass,
            _ => out.push((m.message, m.mass.clone())),
        }
    }
    for (_, p) in out.iter_mut() {
        *p = &*p / mass;
    }
    out
}

fn make_cell(cset: &ConsistentSet, index: usize, members: Vec<usize>, parent_mass: &Prob) -> Cell {
    let mass = prob::sum(members.iter().map(|&k| &cset.members()[k].mass));
    let messages = message_distribution(cset, &members, &mass);
    let probs: Vec<Prob> = messages.iter().map(|(_, p)| p.clone()).collect();
    Cell {
        index,
        share: &mass / parent_mass,
        message_entropy: entropy_exact(&probs),
        members,
        mass,
        messages,
    }
}

/// Splits `members` into nonempty cells keyed by `key`, ordered by index.
fn group(
    members: impl Iterator<Item = usize>,
    key: impl Fn(usize) -> usize,
) -> Vec<(usize, Vec<usize>)> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for k in members {
        let i = key(k);
        match groups.iter_mut().find(|(g, _)| *g == i) {
            Some((_, v)) => v.push(k),
            None => groups.push((i, vec![k])),
        }
    }
    groups.sort_by_key(|(i, _)| *i);
    groups
}

fn aggregation(parts: &[&Cell], entropy: f64) -> Aggregation {
    let shares: Vec<Prob> = parts.iter().map(|c| c.share.clone()).collect();
    Aggregation {
        weighted: parts
            .iter()
            .map(|c| prob::to_f64(&c.share) * c.message_entropy)
            .sum(),
        entropy,
        share_entropy: entropy_exact(&shares),
    }
}

pub fn build_dyadic_partition(cset: &ConsistentSet) -> Result<DyadicPartition> {
    let total = cset.mass().clone();
    if !total.is_positive() {
        return Err(Error::Validation("consistent set has zero mass".into()));
    }
    let n = cset.members()[0].word.len();
    let all: Vec<usize> = (0..cset.len()).collect();
    let top = make_cell(cset, 0, all, &total);

    let mut cells = Vec::new();
    for (i, members) in group(0..cset.len(), |k| {
        dyadic_index(&(&cset.members()[k].mass / &total), n)
    }) {
        let cell = make_cell(cset, i, members, &total);
        let conditional = |u: u32| {
            cell.messages
                .iter()
                .find(|(v, _)| *v == u)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(Prob::zero)
        };
        let children: Vec<Cell> = group(cell.members.iter().copied(), |k| {
            dyadic_index(&conditional(cset.members()[k].message), n)
        })
        .into_iter()
        .map(|(j, m)| make_cell(cset, j, m, &cell.mass))
        .collect();
        let aggregation = aggregation(&children.iter().collect::<Vec<_>>(), cell.message_entropy);
        cells.push(Level1 {
            cell,
            children,
            aggregation,
        });
    }
    let aggregation = aggregation(
        &cells.iter().map(|c| &c.cell).collect::<Vec<_>>(),
        top.message_entropy,
    );
    Ok(DyadicPartition {
        n,
        prefix_mass: total,
        message_entropy: top.message_entropy,
        cells,
        aggregation,
    })
}

/// A level-two cell with enough message entropy and enough mass.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodCell {
    pub i: usize,
    pub j: usize,
    pub entropy: f64,
    pub mass: Prob,
    /// `eps n / 64`.
    pub entropy_threshold: f64,
    /// `prefix_mass / n^4`.
    pub mass_threshold: Prob,
}

/// The qualifying level-two cell with the largest conditional message
/// entropy (lowest `(i, j)` among equals), if any.
pub fn select_good_cell(partition: &DyadicPartition, eps: f64) -> Option<GoodCell> {
    let n = partition.n;
    let entropy_threshold = eps * n as f64 / 64.0;
    let mass_threshold = &partition.prefix_mass / prob::int((n as u64).pow(4));
    let mut best: Option<GoodCell> = None;
    for l1 in &partition.cells {
        for c in &l1.children {
            if c.message_entropy < entropy_threshold || c.mass < mass_threshold {
                continue;
            }
            if best
                .as_ref()
                .is_some_and(|b| b.entropy >= c.message_entropy)
            {
                continue;
            }
            best = Some(GoodCell {
                i: l1.cell.index,
                j: c.index,
                entropy: c.message_entropy,
                mass: c.mass.clone(),
                entropy_threshold,
                mass_threshold: mass_threshold.clone(),
            });
        }
    }
    best
}
