//! Plain-text reports for the `graph` and `partition` subcommands, one
//! `key=value` fact per line.

use std::fmt::Write as _;
use std::path::PathBuf;

use causal_channel::analysis::{
    build_consistency_graph, build_dyadic_partition, plotkin_instance, plotkin_max,
    select_good_cell, Cell, EXACT_MIS_LIMIT,
};
use causal_channel::codebook::{consistent_set, read_code_file, Code, ConsistentSet};
use causal_channel::prob::{self, format_prob, parse_prob, Prob};
use causal_channel::Bitword;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJob {
    pub code: PathBuf,
    pub prefix: String,
    /// Edge threshold: entries closer than this are joined.
    pub d: usize,
    /// Channel parameter and margin, for the closed-form Plotkin instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionJob {
    pub code: PathBuf,
    pub prefix: String,
    pub eps: String,
}

fn load(path: &PathBuf, prefix: &str) -> CliResult<(Code, ConsistentSet)> {
    let code = read_code_file(path).map_err(|e| match e {
        causal_channel::Error::Io(io) => CliError::io(path.display(), io),
        other => other.into(),
    })?;
    let prefix: Bitword = prefix.parse()?;
    let cset = consistent_set(&code, &prefix)?;
    Ok((code, cset))
}

fn rational(s: &str) -> CliResult<Prob> {
    parse_prob(s).map_err(|_| CliError::Usage(format!("{s:?} is not a number or fraction")))
}

pub fn graph_report(job: &GraphJob) -> CliResult<String> {
    let (code, cset) = load(&job.code, &job.prefix)?;
    let g = build_consistency_graph(&cset, job.d);
    let n = code.n();
    let suffix = n - cset.prefix().len();
    let mut r = String::new();
    let _ = writeln!(r, "code={}", job.code.display());
    let _ = writeln!(r, "n={n}");
    let _ = writeln!(r, "prefix={} length={}", job.prefix, cset.prefix().len());
    let _ = writeln!(
        r,
        "threshold={} (edges join entries at distance < threshold)",
        g.threshold
    );
    let _ = writeln!(r, "vertices={}", g.num_vertices());
    let _ = writeln!(r, "edges={}", g.edges);
    let _ = writeln!(r, "avg_degree={}", g.avg_degree());
    let _ = writeln!(r, "density={}", g.density());
    let _ = writeln!(r, "pair_hit_probability={}", g.pair_hit_probability());
    let _ = writeln!(r, "turan_lower={}", g.turan_lower());
    match g.max_independent {
        Some(k) => {
            let _ = writeln!(r, "max_independent={k}");
        }
        None => {
            let _ = writeln!(
                r,
                "max_independent=skipped (more than {EXACT_MIS_LIMIT} vertices)"
            );
        }
    }
    let _ = writeln!(r, "greedy_independent={}", g.greedy_independent);
    let _ = writeln!(r, "matching_upper={}", g.matching_upper);
    let _ = writeln!(r, "suffix_length={suffix}");
    match plotkin_max(suffix as u64, job.d as u64) {
        Ok(cap) => {
            let _ = writeln!(r, "plotkin_cap={cap}");
        }
        Err(_) => {
            let _ = writeln!(r, "plotkin_cap=n/a (needs 2 * threshold > suffix_length)");
        }
    }
    if let (Some(p), Some(eps)) = (&job.p, &job.eps) {
        let (p, eps) = (rational(p)?, rational(eps)?);
        let _ = writeln!(r, "instance_p={}", format_prob(&p));
        let _ = writeln!(r, "instance_eps={}", format_prob(&eps));
        match plotkin_instance(&p, &eps, n as u64) {
            Ok(inst) => {
                let ratio = prob::int(16) * &p / &eps;
                let _ = writeln!(r, "instance_length=4pn-eps*n/2={}", format_prob(&inst.len));
                let _ = writeln!(r, "instance_distance=2pn-eps*n/8={}", format_prob(&inst.d));
                let _ = writeln!(
                    r,
                    "instance_cap=2d/(2d-length)+1={}",
                    format_prob(&inst.cap)
                );
                let _ = writeln!(r, "sixteen_p_over_eps={}", format_prob(&ratio));
                let _ = writeln!(r, "instance_cap_equals_16p/eps={}", inst.cap == ratio);
            }
            Err(e) => {
                let _ = writeln!(r, "instance=n/a ({e})");
            }
        }
    }
    Ok(r)
}

fn cell_line(r: &mut String, indent: &str, label: &str, c: &Cell) {
    let _ = writeln!(
        r,
        "{indent}{label} members={} mass={} share={} message_entropy={}",
        c.members.len(),
        format_prob(&c.mass),
        format_prob(&c.share),
        c.message_entropy
    );
}

pub fn partition_report(job: &PartitionJob) -> CliResult<String> {
    let (code, cset) = load(&job.code, &job.prefix)?;
    let eps = rational(&job.eps)?;
    let n = code.n();
    let mut r = String::new();
    let _ = writeln!(r, "code={}", job.code.display());
    let _ = writeln!(
        r,
        "n={n} type={}",
        if code.is_deterministic() {
            "det"
        } else {
            "prob"
        }
    );
    if code.is_deterministic() {
        let _ = writeln!(
            r,
            "note=deterministic code: equal entry masses give a single cell at each level"
        );
    }
    let _ = writeln!(r, "prefix={} length={}", job.prefix, cset.prefix().len());
    let _ = writeln!(r, "members={}", cset.len());
    let _ = writeln!(r, "prefix_mass={}", format_prob(cset.mass()));
    if cset.is_empty() {
        let _ = writeln!(r, "good_cell=none (empty consistent set)");
        return Ok(r);
    }
    let part = build_dyadic_partition(&cset)?;
    let _ = writeln!(r, "message_entropy={}", part.message_entropy);
    for l1 in &part.cells {
        cell_line(&mut r, "", &format!("cell i={}", l1.cell.index), &l1.cell);
        for c in &l1.children {
            cell_line(
                &mut r,
                "  ",
                &format!("cell i={} j={}", l1.cell.index, c.index),
                c,
            );
        }
        let a = l1.aggregation;
        let _ = writeln!(
            r,
            "  aggregation weighted={} entropy={} share_entropy={} holds={}",
            a.weighted,
            a.entropy,
            a.share_entropy,
            a.holds()
        );
    }
    let a = part.aggregation;
    let _ = writeln!(
        r,
        "aggregation weighted={} entropy={} share_entropy={} holds={}",
        a.weighted,
        a.entropy,
        a.share_entropy,
        a.holds()
    );
    let eps_f = prob::to_f64(&eps);
    let mass_threshold = part.prefix_mass.clone() / prob::int((n as u64).pow(4));
    let _ = writeln!(
        r,
        "entropy_threshold=eps*n/64={}*{n}/64={}",
        format_prob(&eps),
        eps_f * n as f64 / 64.0
    );
    let _ = writeln!(
        r,
        "mass_threshold=prefix_mass/n^4=({})/{}={}",
        format_prob(&part.prefix_mass),
        (n as u64).pow(4),
        format_prob(&mass_threshold)
    );
    match select_good_cell(&part, eps_f) {
        Some(g) => {
            let _ = writeln!(
                r,
                "good_cell=({},{}) message_entropy={} mass={}",
                g.i,
                g.j,
                g.entropy,
                format_prob(&g.mass)
            );
        }
        None => {
            let _ = writeln!(r, "good_cell=none");
        }
    }
    let total = prob::sum(part.cells.iter().map(|c| &c.cell.mass));
    let leaves = prob::sum(
        part.cells
            .iter()
            .flat_map(|c| c.children.iter().map(|k| &k.mass)),
    );
    let _ = writeln!(
        r,
        "mass_conservation level1={} level2={} prefix_mass={} equal={}",
        format_prob(&total),
        format_prob(&leaves),
        format_prob(&part.prefix_mass),
        total == part.prefix_mass && leaves == part.prefix_mass
    );
    Ok(r)
}
