//! Exhaustive generation of the minimal inversion sequences of a pattern.
//!
//! The pruned generator builds every candidate around a starting occurrence of
//! the pattern `ρ`. With `m = mdd(ρ)`, `k = |ρ|` and `s` the first saturated
//! position of `ρ`, a minimal sequence `σ` of length `k + n` has the shape
//!
//! ```text
//! σ = π · ρ'[s..k]
//! ```
//!
//! where `ρ'` is `ρ` with `v = n - m` new values slotted in below `ρ'_s`, and
//! `π` is a word of length `n + s - 1` that holds `ρ'_1 .. ρ'_{s-1}` as a
//! subsequence, uses only values below `ρ'_s`, and uses each new value at
//! least twice. Every candidate built this way that is an inversion sequence
//! is then passed through the occurrence-based minimality check, since other
//! occurrences of `ρ` may still break minimality.

pub mod construct;
pub mod families;

use std::fmt;

use serde::Serialize;

use crate::containment::{validate_pattern, Matcher};
use crate::error::{guard, Result};
use crate::minimality::{first_violation, oracle_is_minimal};
use crate::par::{map_ordered, Execution};
use crate::seq::IntSeq;

pub const DEFAULT_MAX_MDD: u32 = 6;
pub const DEFAULT_NAIVE_MAX_LEN: usize = 10;
pub const DEFAULT_ISBT_MAX_LEN: usize = 5;
pub const EXTENDED_ISBT_MAX_LEN: usize = 7;

/// Resource limits and evaluation mode for the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenOptions {
    pub exec: Execution,
    pub max_mdd: u32,
    pub naive_max_len: usize,
    pub isbt_max_len: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            exec: Execution::default(),
            max_mdd: DEFAULT_MAX_MDD,
            naive_max_len: DEFAULT_NAIVE_MAX_LEN,
            isbt_max_len: DEFAULT_ISBT_MAX_LEN,
        }
    }
}

impl GenOptions {
    pub fn sequential() -> Self {
        GenOptions {
            exec: Execution::Sequential,
            ..Self::default()
        }
    }
}

/// The complete set of minimal inversion sequences of one pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalSet {
    pub pattern: IntSeq,
    pub mdd: u32,
    /// Counts by length, from `|ρ| + mdd(ρ)` to `|ρ| + 2 mdd(ρ)`, zeros kept.
    pub isbt: Vec<usize>,
    /// Sorted by length, then lexicographically.
    pub sequences: Vec<IntSeq>,
}

impl MinimalSet {
    fn from_sequences(pattern: &IntSeq, mdd: u32, mut sequences: Vec<IntSeq>) -> Self {
        sequences.sort();
        sequences.dedup();
        let base = pattern.len() + mdd as usize;
        let mut isbt = vec![0; mdd as usize + 1];
        for s in &sequences {
            isbt[s.len() - base] += 1;
        }
        MinimalSet {
            pattern: pattern.clone(),
            mdd,
            isbt,
            sequences,
        }
    }

    /// Minimal sequences of the given length.
    pub fn of_length(&self, len: usize) -> impl Iterator<Item = &IntSeq> {
        self.sequences.iter().filter(move |s| s.len() == len)
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

/// Formats a basis-type vector the way tables print it, e.g. `(6, 5, 0)`.
pub struct IsbtDisplay<'a>(pub &'a [usize]);

impl fmt::Display for IsbtDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn minimal_set(rho: &IntSeq) -> Result<MinimalSet> {
    minimal_set_with(rho, &GenOptions::default())
}

/// Pruned generation of every minimal inversion sequence of `rho`.
pub fn minimal_set_with(rho: &IntSeq, opts: &GenOptions) -> Result<MinimalSet> {
    validate_pattern(rho)?;
    let m = rho.mdd()?;
    guard("mdd", m as usize, opts.max_mdd as usize)?;
    let plan = Plan::new(rho, m);

    let mut jobs = Vec::new();
    for n in m as usize..=2 * m as usize {
        let v = n - m as usize;
        for_each_subset(plan.head as usize + v, v, |w| jobs.push((n, w.to_vec())));
    }

    let found = map_ordered(opts.exec, &jobs, |(n, w)| plan.run(*n, w));
    let sequences = found.into_iter().flatten().map(IntSeq::new).collect();
    Ok(MinimalSet::from_sequences(rho, m, sequences))
}

struct Plan {
    rho: Vec<u32>,
    matcher: Matcher,
    m: usize,
    /// 0-based index of the first saturated entry.
    s: usize,
    /// Value of the first saturated entry in `ρ`.
    head: u32,
}

impl Plan {
    fn new(rho: &IntSeq, m: u32) -> Self {
        let s = rho.sat().expect("nonempty")[0] - 1;
        Plan {
            rho: rho.as_slice().to_vec(),
            matcher: Matcher::new(rho.as_slice()),
            m: m as usize,
            s,
            head: rho.as_slice()[s],
        }
    }

    /// Minimal sequences with `n` inserted entries whose new values are `new_values`.
    fn run(&self, n: usize, new_values: &[u32]) -> Vec<Vec<u32>> {
        let v = new_values.len();
        debug_assert_eq!(n, self.m + v);
        let below = self.head as usize + v;
        let mut is_new = vec![false; below];
        for &w in new_values {
            is_new[w as usize] = true;
        }
        // old values below the head keep their order and skip the new ones
        let old_slots: Vec<u32> = (0..below as u32).filter(|&x| !is_new[x as usize]).collect();
        let lift = |x: u32| {
            if x < self.head {
                old_slots[x as usize]
            } else {
                x + v as u32
            }
        };
        let prefix: Vec<u32> = self.rho[..self.s].iter().map(|&x| lift(x)).collect();
        let suffix: Vec<u32> = self.rho[self.s..].iter().map(|&x| lift(x)).collect();

        let mut search = WordSearch {
            len: n + self.s,
            below: below as u32,
            prefix: &prefix,
            is_new: &is_new,
            counts: vec![0; below],
            deficit: 2 * v,
            word: Vec::with_capacity(n + self.s + suffix.len()),
            suffix: &suffix,
            matcher: &self.matcher,
            out: Vec::new(),
        };
        search.extend(0);
        search.out
    }
}

/// Depth-first search over the words placed before the first saturated entry.
struct WordSearch<'a> {
    len: usize,
    below: u32,
    prefix: &'a [u32],
    is_new: &'a [bool],
    counts: Vec<u32>,
    /// Outstanding uses needed for every new value to reach two.
    deficit: usize,
    word: Vec<u32>,
    suffix: &'a [u32],
    matcher: &'a Matcher,
    out: Vec<Vec<u32>>,
}

impl WordSearch<'_> {
    /// `matched` counts prefix entries already embedded (greedily, leftmost).
    fn extend(&mut self, matched: usize) {
        let pos = self.word.len();
        if pos == self.len {
            if matched == self.prefix.len() && self.deficit == 0 {
                self.finish();
            }
            return;
        }
        let remaining = self.len - pos - 1;
        let top = self.below.min(pos as u32 + 1);
        for x in 0..top {
            let advances = self.prefix.get(matched) == Some(&x);
            let matched_next = matched + usize::from(advances);
            let uses_new = self.is_new[x as usize];
            let deficit_next = if uses_new && self.counts[x as usize] < 2 {
                self.deficit - 1
            } else {
                self.deficit
            };
            if (self.prefix.len() - matched_next) + deficit_next > remaining {
                continue;
            }
            self.counts[x as usize] += 1;
            let saved = self.deficit;
            self.deficit = deficit_next;
            self.word.push(x);
            self.extend(matched_next);
            self.word.pop();
            self.deficit = saved;
            self.counts[x as usize] -= 1;
        }
    }

    fn finish(&mut self) {
        let base = self.word.len();
        self.word.extend_from_slice(self.suffix);
        debug_assert!(crate::seq::is_inversion_sequence(&self.word));
        debug_assert!(crate::seq::is_cayley_permutation(&self.word));
        if first_violation(&self.word, self.matcher).is_none() {
            self.out.push(self.word.clone());
        }
        self.word.truncate(base);
    }
}

/// Calls `f` with each `size`-subset of `0..universe`, in lexicographic order.
fn for_each_subset(universe: usize, size: usize, mut f: impl FnMut(&[u32])) {
    fn rec(start: u32, universe: u32, size: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let need = (size - buf.len()) as u32;
        for x in start..=universe.saturating_sub(need) {
            if x + need > universe {
                break;
            }
            buf.push(x);
            rec(x + 1, universe, size, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(size);
    rec(0, universe as u32, size, &mut buf, &mut f);
}

pub fn minimal_set_naive(rho: &IntSeq) -> Result<MinimalSet> {
    minimal_set_naive_with(rho, &GenOptions::default())
}

/// Filters all of `I ∩ P` in the admissible length range through the
/// subsequence oracle. Independent of the pruned generator.
pub fn minimal_set_naive_with(rho: &IntSeq, opts: &GenOptions) -> Result<MinimalSet> {
    validate_pattern(rho)?;
    let m = rho.mdd()? as usize;
    let k = rho.len();
    guard("naive search length", k + 2 * m, opts.naive_max_len)?;
    let matcher = Matcher::new(rho.as_slice());

    let mut sequences = Vec::new();
    for n in k + m..=k + 2 * m {
        let hosts = families::inversion_cayley_sequences(n);
        let keep = map_ordered(opts.exec, &hosts, |h| {
            matcher.contains(h.as_slice()) && oracle_is_minimal(h.as_slice(), &matcher)
        });
        sequences.extend(
            hosts
                .into_iter()
                .zip(keep)
                .filter_map(|(h, keep)| keep.then_some(h)),
        );
    }
    Ok(MinimalSet::from_sequences(rho, m as u32, sequences))
}

/// Patterns grouped by basis type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsbtTable {
    pub max_len: usize,
    pub rows: Vec<IsbtRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsbtRow {
    pub isbt: Vec<usize>,
    pub patterns: Vec<IntSeq>,
}

impl IsbtTable {
    pub fn pattern_count(&self) -> usize {
        self.rows.iter().map(|r| r.patterns.len()).sum()
    }

    pub fn row(&self, isbt: &[usize]) -> Option<&IsbtRow> {
        self.rows.iter().find(|r| r.isbt == isbt)
    }

    /// Two-column text layout: basis type, then its patterns.
    pub fn to_text(&self) -> String {
        let mut out = String::from("ISBT\tPatterns\n");
        for row in &self.rows {
            let pats: Vec<String> = row.patterns.iter().map(IntSeq::to_string).collect();
            out.push_str(&format!("{}\t{}\n", IsbtDisplay(&row.isbt), pats.join(", ")));
        }
        out
    }
}

pub fn isbt_table(max_len: usize) -> Result<IsbtTable> {
    isbt_table_with(max_len, &GenOptions::default()).map(|(t, _)| t)
}

/// Basis types of every pattern of length `1..=max_len`, together with the
/// minimal sets they were computed from (in pattern order).
pub fn isbt_table_with(max_len: usize, opts: &GenOptions) -> Result<(IsbtTable, Vec<MinimalSet>)> {
    if max_len == 0 {
        return Err(crate::Error::Precondition("max_len must be at least 1".into()));
    }
    guard("isbt table length", max_len, opts.isbt_max_len)?;
    let patterns: Vec<IntSeq> = (1..=max_len).flat_map(families::patterns).collect();
    // parallelism is across patterns here
    let inner = GenOptions {
        exec: Execution::Sequential,
        ..*opts
    };
    let sets = map_ordered(opts.exec, &patterns, |p| minimal_set_with(p, &inner));
    let sets: Vec<MinimalSet> = sets.into_iter().collect::<Result<_>>()?;

    let mut rows: Vec<IsbtRow> = Vec::new();
    let mut order: Vec<&MinimalSet> = sets.iter().collect();
    order.sort_by(|a, b| {
        isbt_cmp(&a.isbt, &b.isbt).then_with(|| a.pattern.cmp(&b.pattern))
    });
    for set in order {
        match rows.last_mut() {
            Some(row) if row.isbt == set.isbt => row.patterns.push(set.pattern.clone()),
            _ => rows.push(IsbtRow {
                isbt: set.isbt.clone(),
                patterns: vec![set.pattern.clone()],
            }),
        }
    }
    Ok((IsbtTable { max_len, rows }, sets))
}

fn isbt_cmp(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Shorthand for a single pattern's basis type.
pub fn isbt(rho: &IntSeq) -> Result<Vec<usize>> {
    minimal_set(rho).map(|s| s.isbt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::canonical_cmp;

    fn is_canonical(v: &[IntSeq]) -> bool {
        v.windows(2)
            .all(|w| canonical_cmp(w[0].as_slice(), w[1].as_slice()).is_lt())
    }

    fn s(text: &str) -> IntSeq {
        text.parse().unwrap()
    }

    fn show(set: &MinimalSet) -> Vec<String> {
        set.sequences.iter().map(IntSeq::to_string).collect()
    }

    #[test]
    fn small_minimal_sets() {
        let ten = minimal_set(&s("10")).unwrap();
        assert_eq!(show(&ten), vec!["010", "0021"]);
        assert_eq!(ten.isbt, vec![1, 1]);

        let p = minimal_set(&s("0201")).unwrap();
        assert_eq!(show(&p), vec!["00201", "01201", "001312", "010312", "011302"]);
        assert_eq!(p.isbt, vec![2, 3]);

        let q = minimal_set(&s("021")).unwrap();
        assert_eq!(show(&q), vec!["0021", "0121"]);
        assert_eq!(q.isbt, vec![2, 0]);
    }

    #[test]
    fn basis_type_spot_values() {
        assert_eq!(isbt(&s("0312")).unwrap(), vec![6, 5, 0]);
        let wide = minimal_set(&s("013542")).unwrap();
        assert_eq!(wide.len(), 34);
        assert!(wide.sequences.iter().all(|x| x.len() == 8));
        assert_eq!(wide.isbt, vec![34, 0, 0]);
    }

    #[test]
    fn inversion_sequence_patterns_are_their_own_basis() {
        let set = minimal_set(&s("00")).unwrap();
        assert_eq!(show(&set), vec!["00"]);
        assert_eq!(set.isbt, vec![1]);
        assert_eq!(minimal_set_naive(&s("00")).unwrap(), set);
    }

    #[test]
    fn naive_agrees_on_examples() {
        for p in ["10", "0312", "021", "0201", "210"] {
            let rho = s(p);
            assert_eq!(minimal_set(&rho).unwrap(), minimal_set_naive(&rho).unwrap(), "{p}");
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let rho = s("24013");
        let a = minimal_set_with(&rho, &GenOptions::sequential()).unwrap();
        let b = minimal_set_with(&rho, &GenOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(is_canonical(&a.sequences));
    }

    #[test]
    fn guards_and_errors() {
        let big = s("70123456");
        assert_eq!(big.mdd().unwrap(), 7);
        assert!(minimal_set(&big).unwrap_err().is_guard());
        assert!(minimal_set_naive(&s("3012")).is_ok());
        assert!(minimal_set_naive(&s("40123")).unwrap_err().is_guard());
        assert!(minimal_set(&s("02")).is_err());
        assert!(isbt_table(6).unwrap_err().is_guard());
    }

    #[test]
    fn isbt_table_length_two() {
        let t = isbt_table(2).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].isbt, vec![1]);
        assert_eq!(t.rows[0].patterns, vec![s("0"), s("00"), s("01")]);
        assert_eq!(t.rows[1].isbt, vec![1, 1]);
        assert_eq!(t.rows[1].patterns, vec![s("10")]);
    }

    #[test]
    fn subsets_in_order() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |w| all.push(w.to_vec()));
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        let mut empty = Vec::new();
        for_each_subset(3, 0, |w| empty.push(w.to_vec()));
        assert_eq!(empty, vec![Vec::<u32>::new()]);
    }
}
