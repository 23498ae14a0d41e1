//! Deterministic and probabilistic codes, and the prefix-consistency queries
//! an online observer makes against them.

mod format;

use std::ops::Range;

use num_traits::Zero;

use crate::bitcore::{
    cmp_prefix, distance_limbs, limbs_for, random_bitword, Bitword, RandomSource,
};
use crate::error::{Error, Result};
use crate::prob::{self, Prob};

pub use format::{parse_code, read_code_file, write_code, write_code_file};

/// Largest `log2(M)` for which a code is materialized in memory.
pub const MAX_MESSAGE_BITS: u32 = 28;

/// Packed codeword storage plus an index sorted by word value.
///
/// Sorting by value groups words sharing a prefix into one contiguous run, so
/// a prefix query is two binary searches.
#[derive(Clone, Debug)]
pub struct WordTable {
    n: usize,
    stride: usize,
    data: Vec<u64>,
    sorted: Vec<u32>,
}

impl WordTable {
    fn from_words(n: usize, words: &[Bitword]) -> Result<Self> {
        let stride = limbs_for(n);
        let mut data = Vec::with_capacity(words.len() * stride);
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::Dimension(format!(
                    "codeword {i} has length {}, expected {n}",
                    w.len()
                )));
            }
            data.extend_from_slice(w.limbs());
        }
        Ok(Self::from_packed(n, data))
    }

    fn from_packed(n: usize, data: Vec<u64>) -> Self {
        let stride = limbs_for(n);
        let count = data.len().checked_div(stride).unwrap_or(0);
        let mut table = WordTable {
            n,
            stride,
            data,
            sorted: (0..count as u32).collect(),
        };
        if stride == 0 {
            return table;
        }
        if stride == 1 {
            let mut keyed: Vec<(u64, u32)> = table
                .data
                .iter()
                .zip(0u32..)
                .map(|(&v, i)| (v, i))
                .collect();
            keyed.sort_unstable();
            table.sorted = keyed.into_iter().map(|(_, i)| i).collect();
            return table;
        }
        let (data, s) = (&table.data, stride);
        table.sorted.sort_unstable_by(|&a, &b| {
            let (a, b) = (a as usize * s, b as usize * s);
            data[a..a + s].cmp(&data[b..b + s]).then(a.cmp(&b))
        });
        table
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn limbs(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn word(&self, i: usize) -> Bitword {
        Bitword::from_limbs(self.n, self.limbs(i))
    }

    pub fn distance_to(&self, i: usize, y: &Bitword) -> usize {
        distance_limbs(self.limbs(i), y.limbs())
    }

    /// Entry indices whose first `prefix.len()` bits equal `prefix`, in word order.
    pub fn prefix_range(&self, prefix: &Bitword) -> &[u32] {
        let len = prefix.len().min(self.n);
        if len == 0 || self.stride == 0 {
            return &self.sorted;
        }
        let p = prefix.limbs();
        let lo = self
            .sorted
            .partition_point(|&i| cmp_prefix(self.limbs(i as usize), p, len).is_lt());
        let hi = self
            .sorted
            .partition_point(|&i| cmp_prefix(self.limbs(i as usize), p, len).is_le());
        &self.sorted[lo..hi]
    }

    /// Size of the largest group of entries sharing their first `len` bits.
    pub fn largest_prefix_group(&self, len: usize) -> usize {
        let len = len.min(self.n);
        let (mut best, mut run) = (self.sorted.len().min(1), 1);
        for w in self.sorted.windows(2) {
            let same = len == 0
                || cmp_prefix(self.limbs(w[0] as usize), self.limbs(w[1] as usize), len).is_eq();
            run = if same { run + 1 } else { 1 };
            best = best.max(run);
        }
        best
    }

    /// First pair of entries holding the same word, if any.
    fn find_duplicate(&self) -> Option<(usize, usize)> {
        self.sorted.windows(2).find_map(|w| {
            let (a, b) = (w[0] as usize, w[1] as usize);
            (self.limbs(a) == self.limbs(b)).then_some((a.min(b), a.max(b)))
        })
    }
}

/// Uniform-message code with a deterministic encoder `u -> x(u)`.
#[derive(Clone, Debug)]
pub struct DeterministicCode {
    n: usize,
    table: WordTable,
}

impl DeterministicCode {
    /// Builds an injective code; codeword `u` encodes message `u`.
    pub fn new(n: usize, words: Vec<Bitword>) -> Result<Self> {
        let code = Self::new_allowing_duplicates(n, words)?;
        if let Some((a, b)) = code.table.find_duplicate() {
            return Err(Error::Construction(format!(
                "messages {a} and {b} share codeword {}",
                code.table.word(a)
            )));
        }
        Ok(code)
    }

    /// Like [`DeterministicCode::new`] but admits repeated codewords.
    ///
    /// Non-injective codes are never better than injective ones, so this is
    /// only meant for experiments that need such a code on purpose.
    pub fn new_allowing_duplicates(n: usize, words: Vec<Bitword>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Construction("block length must be positive".into()));
        }
        if words.is_empty() {
            return Err(Error::Construction(
                "a code needs at least one codeword".into(),
            ));
        }
        if words.len() > (1usize << MAX_MESSAGE_BITS) {
            return Err(Error::Construction(format!(
                "{} codewords exceed the materialization limit 2^{MAX_MESSAGE_BITS}",
                words.len()
            )));
        }
        let table = WordTable::from_words(n, &words)?;
        Ok(DeterministicCode { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_messages(&self) -> usize {
        self.table.len()
    }

    pub fn word(&self, u: usize) -> Bitword {
        self.table.word(u)
    }

    pub fn words(&self) -> impl Iterator<Item = Bitword> + '_ {
        (0..self.num_messages()).map(|u| self.word(u))
    }

    /// `log2(M) / n`.
    pub fn rate(&self) -> f64 {
        (self.num_messages() as f64).log2() / self.n as f64
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }

    /// Smallest pairwise distance; `None` for single-word codes. Quadratic.
    pub fn min_distance(&self) -> Option<usize> {
        let m = self.num_messages();
        let mut best: Option<usize> = None;
        for a in 0..m {
            for b in a + 1..m {
                let d = distance_limbs(self.table.limbs(a), self.table.limbs(b));
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }
}

/// Number of message bits `ceil(R n)` used for a code of rate `rate`.
pub fn message_bits(n: usize, rate: f64) -> Result<u32> {
    if !(0.0..=1.0).contains(&rate) || !rate.is_finite() {
        return Err(Error::Construction(format!("rate {rate} outside [0, 1]")));
    }
    // Tolerance absorbs float noise such as 0.6 * 40 = 24.000000000000004.
    Ok((rate * n as f64 - 1e-9).ceil().max(0.0) as u32)
}

/// Random code with `2^ceil(R n)` distinct uniformly drawn codewords.
pub fn make_random_code(src: &mut RandomSource, n: usize, rate: f64) -> Result<DeterministicCode> {
    if n == 0 {
        return Err(Error::Construction("block length must be positive".into()));
    }
    let k = message_bits(n, rate)?;
    if k as usize > n {
        return Err(Error::Construction(format!(
            "2^{k} distinct codewords do not fit in {{0,1}}^{n}"
        )));
    }
    if k > MAX_MESSAGE_BITS {
        return Err(Error::Construction(format!(
            "2^{k} codewords exceed the materialization limit 2^{MAX_MESSAGE_BITS}"
        )));
    }
    let m = 1usize << k;
    let stride = limbs_for(n);

    // Dense regime: sample without replacement from a shuffled cube.
    if n <= 24 && 2 * m > (1usize << n) {
        let mut all: Vec<u64> = (0..1u64 << n).collect();
        for i in 0..m {
            let j = i + src.below((all.len() - i) as u64) as usize;
            all.swap(i, j);
        }
        let data = all[..m].iter().map(|&v| v << (64 - n)).collect();
        return Ok(DeterministicCode {
            n,
            table: WordTable::from_packed(n, data),
        });
    }

    let mut data = Vec::with_capacity(m * stride);
    for _ in 0..m {
        data.extend_from_slice(random_bitword(src, n).limbs());
    }
    loop {
        let table = WordTable::from_packed(n, data);
        // Keep the earliest draw of each word, redraw later copies.
        let mut redraw = Vec::new();
        for w in table.sorted.windows(2) {
            let (a, b) = (w[0] as usize, w[1] as usize);
            if table.limbs(a) == table.limbs(b) {
                redraw.push(b);
            }
        }
        if redraw.is_empty() {
            return Ok(DeterministicCode { n, table });
        }
        data = table.data;
        for i in redraw {
            let w = random_bitword(src, n);
            data[i * stride..(i + 1) * stride].copy_from_slice(w.limbs());
        }
    }
}

/// The two-word code `{0^n, 1^n}`.
pub fn make_repetition_code(n: usize) -> Result<DeterministicCode> {
    if n == 0 {
        return Err(Error::Construction("block length must be positive".into()));
    }
    DeterministicCode::new(n, vec![Bitword::zeros(n), Bitword::ones(n)])
}

/// One message's codeword set with its conditional distribution.
#[derive(Clone, Debug)]
pub struct MessageBook {
    pub prob: Prob,
    pub codewords: Vec<(Bitword, Prob)>,
}

#[derive(Clone, Debug)]
struct EntryMeta {
    message: u32,
    r: u32,
    /// Joint mass `p_U(u) p_X(u)(x(u, r))`.
    mass: Prob,
}

/// Code whose messages follow an arbitrary distribution and whose encoder
/// picks a random codeword from a per-message set.
#[derive(Clone, Debug)]
pub struct ProbabilisticCode {
    n: usize,
    rate: f64,
    table: WordTable,
    entries: Vec<EntryMeta>,
    message_probs: Vec<Prob>,
    message_ranges: Vec<Range<usize>>,
    cumulative: Vec<f64>,
}

/// Tolerance for probability vectors summing to one.
pub const SUM_TOLERANCE: f64 = 1e-12;
/// Tolerance between `H(p_U)` and a declared `R n`, in bits.
pub const RATE_TOLERANCE_BITS: f64 = 1e-9;

fn check_distribution(what: &str, probs: &[Prob]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::Validation(format!("{what} is empty")));
    }
    if let Some(p) = probs.iter().find(|p| !prob::is_probability(p)) {
        return Err(Error::Validation(format!(
            "{what} has entry {p} outside [0, 1]"
        )));
    }
    let total = prob::sum(probs);
    if (prob::to_f64(&total) - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Validation(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

impl ProbabilisticCode {
    /// Builds a code from per-message books. `declared_rate`, when given, must
    /// match `H(p_U) / n`.
    pub fn new(n: usize, books: Vec<MessageBook>, declared_rate: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Construction("block length must be positive".into()));
        }
        let message_probs: Vec<Prob> = books.iter().map(|b| b.prob.clone()).collect();
        check_distribution("message distribution", &message_probs)?;
        let mut words = Vec::new();
        let mut entries = Vec::new();
        let mut message_ranges = Vec::new();
        for (u, book) in books.iter().enumerate() {
            let cond: Vec<Prob> = book.codewords.iter().map(|(_, p)| p.clone()).collect();
            check_distribution(&format!("codeword distribution of message {u}"), &cond)?;
            let start = entries.len();
            for (r, (w, p)) in book.codewords.iter().enumerate() {
                if book.codewords[..r].iter().any(|(o, _)| o == w) {
                    return Err(Error::Construction(format!(
                        "message {u} lists codeword {w} twice"
                    )));
                }
                words.push(w.clone());
                entries.push(EntryMeta {
                    message: u as u32,
                    r: r as u32,
                    mass: &book.prob * p,
                });
            }
            message_ranges.push(start..entries.len());
        }
        let table = WordTable::from_words(n, &words)?;
        let h = prob::entropy_exact(&message_probs);
        let rate = match declared_rate {
            Some(rate) => {
                if (h - rate * n as f64).abs() > RATE_TOLERANCE_BITS {
                    return Err(Error::Validation(format!(
                        "H(p_U) = {h} bits but declared rate gives {} bits",
                        rate * n as f64
                    )));
                }
                rate
            }
            None => h / n as f64,
        };
        let mut acc = 0.0;
        let cumulative = entries
            .iter()
            .map(|e| {
                acc += prob::to_f64(&e.mass);
                acc
            })
            .collect();
        Ok(ProbabilisticCode {
            n,
            rate,
            table,
            entries,
            message_probs,
            message_ranges,
            cumulative,
        })
    }

    /// Builds a code from joint `(u, r, word, p_U(u) p_X(u)(word))` entries.
    ///
    /// Messages must be numbered `0..K` and each message's `r` values `0..L_u`.
    pub fn from_joint_entries(n: usize, mut rows: Vec<(u32, u32, Bitword, Prob)>) -> Result<Self> {
        rows.sort_by_key(|(u, r, _, _)| (*u, *r));
        let mut books: Vec<MessageBook> = Vec::new();
        for (u, r, w, p) in rows {
            if u as usize == books.len() {
                books.push(MessageBook {
                    prob: Prob::zero(),
                    codewords: Vec::new(),
                });
            }
            let book = books.get_mut(u as usize).ok_or_else(|| {
                Error::Parse(format!("message ids must be contiguous from 0; got u={u}"))
            })?;
            if r as usize != book.codewords.len() {
                return Err(Error::Parse(format!(
                    "message {u}: codeword indices must be contiguous from 0; got r={r}"
                )));
            }
            book.prob += &p;
            book.codewords.push((w, p));
        }
        for (u, book) in books.iter_mut().enumerate() {
            if book.prob.is_zero() {
                return Err(Error::Validation(format!(
                    "message {u} has zero total mass"
                )));
            }
            let total = book.prob.clone();
            for (_, p) in book.codewords.iter_mut() {
                *p = &*p / &total;
            }
        }
        Self::new(n, books, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn num_messages(&self) -> usize {
        self.message_probs.len()
    }

    pub fn message_prob(&self, u: usize) -> &Prob {
        &self.message_probs[u]
    }

    /// Conditional probability `p_X(u)(x(u, r))` of entry `i`.
    pub fn conditional_prob(&self, i: usize) -> Prob {
        let e = &self.entries[i];
        &e.mass / &self.message_probs[e.message as usize]
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }
}

/// Collapses several deterministic codes sharing `n` and `M` into one
/// probabilistic code: code `r` is used with probability `q[r]`, message `u`
/// with probability `p_msgs[u]`.
///
/// Codewords repeated across codes for the same message are merged and their
/// selection probabilities added; words reachable only through `q[r] = 0` are
/// dropped.
pub fn from_multiple_codebooks(
    codes: &[DeterministicCode],
    q: &[Prob],
    p_msgs: &[Prob],
) -> Result<ProbabilisticCode> {
    let first = codes
        .first()
        .ok_or_else(|| Error::Construction("no codes supplied".into()))?;
    let (n, m) = (first.n(), first.num_messages());
    if let Some(c) = codes.iter().find(|c| c.n() != n || c.num_messages() != m) {
        return Err(Error::Construction(format!(
            "codes disagree on shape: ({n}, {m}) vs ({}, {})",
            c.n(),
            c.num_messages()
        )));
    }
    if q.len() != codes.len() {
        return Err(Error::Construction(format!(
            "{} code weights for {} codes",
            q.len(),
            codes.len()
        )));
    }
    if p_msgs.len() != m {
        return Err(Error::Construction(format!(
            "{} message probabilities for {m} messages",
            p_msgs.len()
        )));
    }
    check_distribution("code weights", q)?;
    check_distribution("message distribution", p_msgs)?;
    let books = (0..m)
        .map(|u| {
            let mut codewords: Vec<(Bitword, Prob)> = Vec::new();
            for (code, qr) in codes.iter().zip(q) {
                if qr.is_zero() {
                    continue;
                }
                let w = code.word(u);
                match codewords.iter_mut().find(|(x, _)| *x == w) {
                    Some((_, p)) => *p += qr,
                    None => codewords.push((w, qr.clone())),
                }
            }
            MessageBook {
                prob: p_msgs[u].clone(),
                codewords,
            }
        })
        .collect();
    ProbabilisticCode::new(n, books, None)
}

/// Either kind of code, behind one entry-oriented interface.
///
/// An *entry* is one `(u, r)` pair with its codeword and joint transmission
/// mass. Deterministic codes have exactly one entry per message.
#[derive(Clone, Debug)]
pub enum Code {
    Deterministic(DeterministicCode),
    Probabilistic(ProbabilisticCode),
}

impl From<DeterministicCode> for Code {
    fn from(c: DeterministicCode) -> Self {
        Code::Deterministic(c)
    }
}

impl From<ProbabilisticCode> for Code {
    fn from(c: ProbabilisticCode) -> Self {
        Code::Probabilistic(c)
    }
}

impl Code {
    pub fn n(&self) -> usize {
        match self {
            Code::Deterministic(c) => c.n,
            Code::Probabilistic(c) => c.n,
        }
    }

    pub fn rate(&self) -> f64 {
        match self {
            Code::Deterministic(c) => c.rate(),
            Code::Probabilistic(c) => c.rate,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, Code::Deterministic(_))
    }

    pub fn table(&self) -> &WordTable {
        match self {
            Code::Deterministic(c) => &c.table,
            Code::Probabilistic(c) => &c.table,
        }
    }

    pub fn num_entries(&self) -> usize {
        self.table().len()
    }

    pub fn num_messages(&self) -> usize {
        match self {
            Code::Deterministic(c) => c.num_messages(),
            Code::Probabilistic(c) => c.num_messages(),
        }
    }

    pub fn entry_message(&self, i: usize) -> u32 {
        match self {
            Code::Deterministic(_) => i as u32,
            Code::Probabilistic(c) => c.entries[i].message,
        }
    }

    pub fn entry_r(&self, i: usize) -> u32 {
        match self {
            Code::Deterministic(_) => 0,
            Code::Probabilistic(c) => c.entries[i].r,
        }
    }

    pub fn entry_word(&self, i: usize) -> Bitword {
        self.table().word(i)
    }

    /// Joint mass of entry `i`.
    pub fn entry_mass(&self, i: usize) -> Prob {
        match self {
            Code::Deterministic(c) => prob::ratio(1, c.num_messages() as i64),
            Code::Probabilistic(c) => c.entries[i].mass.clone(),
        }
    }

    pub fn entry_mass_f64(&self, i: usize) -> f64 {
        match self {
            Code::Deterministic(c) => 1.0 / c.num_messages() as f64,
            Code::Probabilistic(c) => prob::to_f64(&c.entries[i].mass),
        }
    }

    pub fn message_prob(&self, u: usize) -> Prob {
        match self {
            Code::Deterministic(c) => prob::ratio(1, c.num_messages() as i64),
            Code::Probabilistic(c) => c.message_probs[u].clone(),
        }
    }

    /// Entry indices belonging to message `u`.
    pub fn entries_of(&self, u: usize) -> Range<usize> {
        match self {
            Code::Deterministic(_) => u..u + 1,
            Code::Probabilistic(c) => c.message_ranges[u].clone(),
        }
    }

    /// Draws an entry according to the joint transmission distribution.
    pub fn sample_entry(&self, src: &mut RandomSource) -> usize {
        match self {
            Code::Deterministic(c) => src.below(c.num_messages() as u64) as usize,
            Code::Probabilistic(c) => {
                let total = *c.cumulative.last().expect("non-empty code");
                let t = src.unit() * total;
                let i = c.cumulative.partition_point(|&acc| acc <= t);
                i.min(c.entries.len() - 1)
            }
        }
    }

    /// `H(p_U)` in bits.
    pub fn message_entropy(&self) -> f64 {
        match self {
            Code::Deterministic(c) => (c.num_messages() as f64).log2(),
            Code::Probabilistic(c) => prob::entropy_exact(&c.message_probs),
        }
    }

    /// All entries whose codeword starts with `prefix`.
    pub fn consistent_set(&self, prefix: &Bitword) -> Result<ConsistentSet> {
        consistent_set(self, prefix)
    }
}

/// One `(u, r)` entry of a consistent set.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub entry: usize,
    pub message: u32,
    pub r: u32,
    pub word: Bitword,
    /// Joint (unconditioned) transmission mass.
    pub mass: Prob,
}

/// The multiset of code entries agreeing with an observed prefix.
#[derive(Clone, Debug)]
pub struct ConsistentSet {
    prefix: Bitword,
    members: Vec<Member>,
    mass: Prob,
}

impl ConsistentSet {
    pub fn prefix(&self) -> &Bitword {
        &self.prefix
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Probability that the transmitted word starts with the prefix.
    pub fn mass(&self) -> &Prob {
        &self.mass
    }

    /// `mass(member) / mass(set)` for every member, in member order.
    pub fn selection_weights(&self) -> Vec<Prob> {
        self.members.iter().map(|m| &m.mass / &self.mass).collect()
    }

    /// The message distribution conditioned on the prefix, sorted by message.
    pub fn message_distribution(&self) -> Vec<(u32, Prob)> {
        let mut out: Vec<(u32, Prob)> = Vec::new();
        let mut sorted: Vec<&Member> = self.members.iter().collect();
        sorted.sort_by_key(|m| m.message);
        for m in sorted {
            match out.last_mut() {
                Some((u, p)) if *u == m.message => *p += &m.mass,
                _ => out.push((m.message, m.mass.clone())),
            }
        }
        for (_, p) in out.iter_mut() {
            *p = &*p / &self.mass;
        }
        out
    }

    /// Number of distinct messages among the members.
    pub fn distinct_messages(&self) -> usize {
        let mut ids: Vec<u32> = self.members.iter().map(|m| m.message).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

/// The entries of `code` whose first `prefix.len()` bits equal `prefix`.
///
/// An empty result is a valid answer with mass zero.
pub fn consistent_set(code: &Code, prefix: &Bitword) -> Result<ConsistentSet> {
    if prefix.len() > code.n() {
        return Err(Error::Dimension(format!(
            "prefix of length {} is longer than the block length {}",
            prefix.len(),
            code.n()
        )));
    }
    let mut idx: Vec<usize> = code
        .table()
        .prefix_range(prefix)
        .iter()
        .map(|&i| i as usize)
        .collect();
    idx.sort_unstable();
    let members: Vec<Member> = idx
        .into_iter()
        .map(|i| Member {
            entry: i,
            message: code.entry_message(i),
            r: code.entry_r(i),
            word: code.entry_word(i),
            mass: code.entry_mass(i),
        })
        .collect();
    let mass = match code {
        Code::Deterministic(c) => prob::ratio(members.len() as i64, c.num_messages() as i64),
        Code::Probabilistic(_) => prob::sum(members.iter().map(|m| &m.mass)),
    };
    Ok(ConsistentSet {
        prefix: prefix.clone(),
        members,
        mass,
    })
}

/// Fraction of messages whose consistent set at prefix length `ell` has fewer
/// than `threshold` members. Deterministic codes only.
pub fn small_consistent_fraction(code: &DeterministicCode, ell: usize, threshold: f64) -> f64 {
    let m = code.num_messages();
    let table = code.table();
    let mut small = 0usize;
    let mut start = 0usize;
    // Walk the value-sorted index run by run.
    while start < m {
        let head = table.sorted[start] as usize;
        let mut end = start + 1;
        while end < m
            && cmp_prefix(
                table.limbs(table.sorted[end] as usize),
                table.limbs(head),
                ell,
            )
            .is_eq()
        {
            end += 1;
        }
        if ((end - start) as f64) < threshold {
            small += end - start;
        }
        start = end;
    }
    small as f64 / m as f64
}
