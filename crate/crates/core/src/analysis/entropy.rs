//! The grouping inequality `H(A) <= sum_i q(i) H(A_i) + H(q)` for a mixture
//! `A` that picks component `A_i` with probability `q(i)`.

use crate::error::{Error, Result};
use crate::prob::entropy_bits;

/// Tolerance for probability vectors given as floats.
const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupedEntropy {
    /// Entropy of the mixture.
    pub lhs: f64,
    /// `sum_i q(i) H(A_i) + H(q)`.
    pub rhs: f64,
    /// The supports of the components with `q(i) > 0` are pairwise disjoint,
    /// which is exactly when `lhs == rhs`.
    pub equality: bool,
}

impl GroupedEntropy {
    pub fn gap(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn check_distribution(what: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Validation(format!("{what} is empty")));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::Validation(format!("{what} has invalid entry {x}")));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Validation(format!("{what} sums to {s}, not 1")));
    }
    Ok(())
}

/// Evaluates both sides for mixture weights `q` and components over a
/// shared alphabet (component `i` gives the probability of each symbol;
/// shorter vectors are zero-padded).
pub fn grouped_entropy_check(q: &[f64], components: &[Vec<f64>]) -> Result<GroupedEntropy> {
    check_distribution("mixture weights", q)?;
    if q.len() != components.len() {
        return Err(Error::Validation(format!(
            "{} weights for {} components",
            q.len(),
            components.len()
        )));
    }
    for (i, c) in components.iter().enumerate() {
        check_distribution(&format!("component {i}"), c)?;
    }
    let width = components.iter().map(Vec::len).max().unwrap_or(0);
    let mut mixture = vec![0.0; width];
    for (qi, c) in q.iter().zip(components) {
        for (m, x) in mixture.iter_mut().zip(c) {
            *m += qi * x;
        }
    }
    let lhs = entropy_bits(&mixture);
    let rhs = q
        .iter()
        .zip(components)
        .map(|(qi, c)| qi * entropy_bits(c))
        .sum::<f64>()
        + entropy_bits(q);
    let mut owner: Vec<Option<usize>> = vec![None; width];
    let mut equality = true;
    for (i, (qi, c)) in q.iter().zip(components).enumerate() {
        if *qi <= 0.0 {
            continue;
        }
        for (s, x) in c.iter().enumerate() {
            if *x > 0.0 {
                match owner[s] {
                    Some(j) if j != i => equality = false,
                    _ => owner[s] = Some(i),
                }
            }
        }
    }
    Ok(GroupedEntropy { lhs, rhs, equality })
}
