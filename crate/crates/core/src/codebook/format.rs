//! Line-oriented text format for codes.
//!
//! ```text
//! n=4 type=prob
//! u=0 r=0 p=1/4 word=0000
//! u=0 r=1 p=1/4 word=0011
//! u=1 r=0 p=1/2 word=1111
//! ```
//!
//! `p` is the joint mass `p_U(u) * p_X(u)(word)`; for `type=det` every line
//! carries `r=0` and `p=1/M`. Blank lines and lines starting with `#` are
//! ignored. [`write_code`] emits a canonical form, so parse-then-write is
//! byte-for-byte stable on its own output.

use std::fmt::Write as _;
use std::path::Path;

use crate::bitcore::Bitword;
use crate::error::{Error, Result};
use crate::prob::{self, format_prob, parse_prob, Prob};

use super::{Code, DeterministicCode, ProbabilisticCode};

fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("line {line}: expected `{key}=...`")))
}

fn int_field<T: std::str::FromStr>(tok: Option<&str>, key: &str, line: usize) -> Result<T> {
    field(tok, key, line)?.parse().map_err(|_| {
        Error::Parse(format!(
            "line {line}: `{key}` is not a non-negative integer"
        ))
    })
}

/// Parses the text form of a code.
pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut toks = header.split_whitespace();
    let n: usize = int_field(toks.next(), "n", hl)?;
    let kind = field(toks.next(), "type", hl)?;
    if toks.next().is_some() {
        return Err(Error::Parse(format!(
            "line {hl}: trailing tokens in header"
        )));
    }
    if kind != "det" && kind != "prob" {
        return Err(Error::Parse(format!(
            "line {hl}: unknown code type {kind:?}"
        )));
    }

    let mut rows: Vec<(u32, u32, Bitword, Prob)> = Vec::new();
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let u: u32 = int_field(toks.next(), "u", ln)?;
        let r: u32 = int_field(toks.next(), "r", ln)?;
        let p = parse_prob(field(toks.next(), "p", ln)?)
            .map_err(|e| Error::Parse(format!("line {ln}: {e}")))?;
        let word: Bitword = field(toks.next(), "word", ln)?
            .parse()
            .map_err(|e| Error::Parse(format!("line {ln}: {e}")))?;
        if toks.next().is_some() {
            return Err(Error::Parse(format!("line {ln}: trailing tokens")));
        }
        if word.len() != n {
            return Err(Error::Dimension(format!(
                "line {ln}: word has length {}, header says n={n}",
                word.len()
            )));
        }
        rows.push((u, r, word, p));
    }

    if kind == "det" {
        rows.sort_by_key(|row| row.0);
        let m = rows.len() as i64;
        let mut words = Vec::with_capacity(rows.len());
        for (i, (u, r, w, p)) in rows.into_iter().enumerate() {
            if u as usize != i || r != 0 {
                return Err(Error::Parse(format!(
                    "deterministic code entries must be u=0..M-1 with r=0; got u={u} r={r}"
                )));
            }
            if p != prob::ratio(1, m) {
                return Err(Error::Validation(format!(
                    "deterministic code entry u={u} has p={p}, expected 1/{m}"
                )));
            }
            words.push(w);
        }
        Ok(DeterministicCode::new(n, words)?.into())
    } else {
        Ok(ProbabilisticCode::from_joint_entries(n, rows)?.into())
    }
}

/// Canonical text form of `code`.
pub fn write_code(code: &Code) -> String {
    let kind = if code.is_deterministic() {
        "det"
    } else {
        "prob"
    };
    let mut out = format!("n={} type={kind}\n", code.n());
    // Every entry of a deterministic code has the same mass.
    let shared = (code.is_deterministic() && code.num_entries() > 0)
        .then(|| format_prob(&code.entry_mass(0)));
    for i in 0..code.num_entries() {
        let mass = match &shared {
            Some(m) => m.clone(),
            None => format_prob(&code.entry_mass(i)),
        };
        let _ = writeln!(
            out,
            "u={} r={} p={mass} word={}",
            code.entry_message(i),
            code.entry_r(i),
            code.entry_word(i)
        );
    }
    out
}

pub fn read_code_file(path: impl AsRef<Path>) -> Result<Code> {
    parse_code(&std::fs::read_to_string(path)?)
}

pub fn write_code_file(code: &Code, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_code(code))?;
    Ok(())
}
