//! Consistency graphs: code entries sharing an observed prefix, joined when
//! their words are closer than a distance threshold.
//!
//! An independent set is a sub-code whose minimum distance is at least the
//! threshold, so its size is capped by Plotkin; Turán gives a lower bound
//! on it from the average degree. Sandwiching the exact maximum between the
//! two is what makes a random pair of consistent entries likely to be close.

use crate::bitcore::{hamming_distance, Bitword};
use crate::codebook::ConsistentSet;

/// Largest vertex count for which the exact independence number is computed.
pub const EXACT_MIS_LIMIT: usize = 20;

/// `|V| / (avg_degree + 1)`; zero for an empty graph.
pub fn turan_independent_lower(num_vertices: usize, avg_degree: f64) -> f64 {
    if num_vertices == 0 {
        return 0.0;
    }
    num_vertices as f64 / (avg_degree + 1.0)
}

#[derive(Clone, Debug)]
pub struct ConsistencyGraph {
    /// Code entry behind each vertex (empty when built from bare words).
    pub entries: Vec<usize>,
    pub words: Vec<Bitword>,
    /// Edges join vertices at distance strictly below this.
    pub threshold: usize,
    pub adjacency: Vec<Vec<usize>>,
    pub edges: usize,
    /// Independence number, for graphs of at most [`EXACT_MIS_LIMIT`] vertices.
    pub max_independent: Option<usize>,
    /// Size of a greedily built independent set (a lower bound).
    pub greedy_independent: usize,
    /// `|V|` minus a maximal matching (an upper bound).
    pub matching_upper: usize,
}

impl ConsistencyGraph {
    pub fn num_vertices(&self) -> usize {
        self.words.len()
    }

    /// `2|E| / |V|`.
    pub fn avg_degree(&self) -> f64 {
        if self.words.is_empty() {
            0.0
        } else {
            2.0 * self.edges as f64 / self.num_vertices() as f64
        }
    }

    /// `|E| / |V|^2`.
    pub fn density(&self) -> f64 {
        if self.words.is_empty() {
            0.0
        } else {
            self.edges as f64 / (self.num_vertices() as f64).powi(2)
        }
    }

    /// Probability that two independent uniform draws from the vertices are
    /// distinct and adjacent: `2|E| / |V|^2`.
    pub fn pair_hit_probability(&self) -> f64 {
        2.0 * self.density()
    }

    pub fn turan_lower(&self) -> f64 {
        turan_independent_lower(self.num_vertices(), self.avg_degree())
    }
}

/// Graph on the members of `cset` with edges below distance `d`.
pub fn build_consistency_graph(cset: &ConsistentSet, d: usize) -> ConsistencyGraph {
    let entries = cset.members().iter().map(|m| m.entry).collect();
    let words = cset.members().iter().map(|m| m.word.clone()).collect();
    let mut g = graph_from_words(words, d);
    g.entries = entries;
    g
}

/// Graph on arbitrary equal-length words with edges below distance `d`.
pub fn graph_from_words(words: Vec<Bitword>, d: usize) -> ConsistencyGraph {
    let v = words.len();
    let mut adjacency = vec![Vec::new(); v];
    let mut edges = 0;
    for a in 0..v {
        for b in a + 1..v {
            let dist = hamming_distance(&words[a], &words[b]).expect("equal-length words");
            if dist < d {
                adjacency[a].push(b);
                adjacency[b].push(a);
                edges += 1;
            }
        }
    }
    let max_independent = (v <= EXACT_MIS_LIMIT).then(|| {
        let masks: Vec<u32> = adjacency
            .iter()
            .map(|nb| nb.iter().fold(0u32, |m, &j| m | 1 << j))
            .collect();
        max_independent_set(&masks)
    });
    ConsistencyGraph {
        entries: Vec::new(),
        words,
        threshold: d,
        greedy_independent: greedy_independent(&adjacency),
        matching_upper: v - maximal_matching(&adjacency),
        adjacency,
        edges,
        max_independent,
    }
}

/// Independence number of a graph on at most 32 vertices given as
/// neighbour bitmasks, by branch and bound.
pub fn max_independent_set(adj: &[u32]) -> usize {
    assert!(
        adj.len() <= 32,
        "bitmask search handles at most 32 vertices"
    );
    fn go(cand: u32, adj: &[u32], cur: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(cur);
            return;
        }
        if cur + cand.count_ones() as usize <= *best {
            return;
        }
        // Branch on the candidate with the most candidate neighbours.
        let mut v = cand.trailing_zeros() as usize;
        let mut deg = 0;
        let mut rest = cand;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let du = (adj[u] & cand).count_ones();
            if du > deg {
                deg = du;
                v = u;
            }
        }
        let bit = 1u32 << v;
        if deg == 0 {
            *best = (*best).max(cur + cand.count_ones() as usize);
            return;
        }
        go(cand & !bit & !adj[v], adj, cur + 1, best);
        go(cand & !bit, adj, cur, best);
    }
    let all = if adj.len() == 32 {
        u32::MAX
    } else {
        (1u32 << adj.len()) - 1
    };
    let mut best = 0;
    go(all, adj, 0, &mut best);
    best
}

fn greedy_independent(adj: &[Vec<usize>]) -> usize {
    let mut order: Vec<usize> = (0..adj.len()).collect();
    order.sort_by_key(|&v| (adj[v].len(), v));
    let mut blocked = vec![false; adj.len()];
    let mut size = 0;
    for v in order {
        if !blocked[v] {
            size += 1;
            blocked[v] = true;
            for &u in &adj[v] {
                blocked[u] = true;
            }
        }
    }
    size
}

fn maximal_matching(adj: &[Vec<usize>]) -> usize {
    let mut used = vec![false; adj.len()];
    let mut size = 0;
    for v in 0..adj.len() {
        if used[v] {
            continue;
        }
        if let Some(&u) = adj[v].iter().find(|&&u| !used[u]) {
            used[u] = true;
            used[v] = true;
            size += 1;
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::RandomSource;
    use crate::codebook::{make_random_code, Code};

    fn w(s: &str) -> Bitword {
        s.parse().unwrap()
    }

    /// All subsets, largest independent one.
    fn brute_mis(adj: &[u32]) -> usize {
        let v = adj.len();
        (0u32..1 << v)
            .filter(|&s| (0..v).all(|i| s >> i & 1 == 0 || adj[i] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn turan_examples() {
        assert_eq!(turan_independent_lower(7, 0.0), 7.0);
        assert_eq!(turan_independent_lower(6, 5.0), 1.0);
        let c5 = [0b10010u32, 0b00101, 0b01010, 0b10100, 0b01001];
        assert_eq!(max_independent_set(&c5), 2);
        assert!(turan_independent_lower(5, 2.0) <= 2.0);
        assert!((turan_independent_lower(5, 2.0) - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        let mut src = RandomSource::new(12, 0);
        for _ in 0..60 {
            let v = 1 + src.below(12) as usize;
            let mut adj = vec![0u32; v];
            for a in 0..v {
                for b in a + 1..v {
                    if src.bernoulli(0.4) {
                        adj[a] |= 1 << b;
                        adj[b] |= 1 << a;
                    }
                }
            }
            assert_eq!(max_independent_set(&adj), brute_mis(&adj));
        }
    }

    #[test]
    fn far_apart_words_give_no_edges() {
        let g = graph_from_words(vec![w("0000"), w("1110"), w("0111")], 2);
        assert_eq!(g.edges, 0);
        assert_eq!(g.density(), 0.0);
        assert_eq!(g.max_independent, Some(3));
    }

    #[test]
    fn duplicate_words_are_adjacent() {
        let g = graph_from_words(vec![w("0101"), w("0101")], 1);
        assert_eq!(g.edges, 1);
        assert_eq!(g.max_independent, Some(1));
    }

    /// Six words of length 4 at threshold 2: edges are the distance-1 pairs.
    #[test]
    fn six_vertex_fixture() {
        let words = ["0000", "0001", "0011", "0111", "1111", "1100"]
            .map(w)
            .to_vec();
        let g = graph_from_words(words, 2);
        // Distance-1 pairs: 0000-0001, 0001-0011, 0011-0111, 0111-1111.
        assert_eq!(g.edges, 4);
        assert!((g.avg_degree() - 8.0 / 6.0).abs() < 1e-15);
        assert!((g.density() - 4.0 / 36.0).abs() < 1e-15);
        // A path on five vertices plus an isolated one: alpha = 3 + 1.
        assert_eq!(g.max_independent, Some(4));
        assert!(g.greedy_independent <= 4 && g.matching_upper >= 4);
        assert!((g.turan_lower() - 6.0 / (8.0 / 6.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn pair_probability_matches_enumeration() {
        let code: Code = make_random_code(&mut RandomSource::new(8, 0), 12, 0.6)
            .unwrap()
            .into();
        let cset = code.consistent_set(&w("01")).unwrap();
        let g = build_consistency_graph(&cset, 5);
        let m = cset.members();
        let mut hits = 0usize;
        for a in m {
            for b in m {
                if a.entry != b.entry && hamming_distance(&a.word, &b.word).unwrap() < 5 {
                    hits += 1;
                }
            }
        }
        let exact = hits as f64 / (m.len() * m.len()) as f64;
        assert!((g.pair_hit_probability() - exact).abs() < 1e-15);
        assert_eq!(g.entries.len(), m.len());
    }

    #[test]
    fn large_graphs_report_bounds_only() {
        let words: Vec<Bitword> = (0..25u32)
            .map(|i| Bitword::from_fn(6, |b| i >> b & 1 == 1))
            .collect();
        let g = graph_from_words(words, 2);
        assert_eq!(g.max_independent, None);
        assert!(g.greedy_independent <= g.matching_upper);
    }
}
