//! Minimal restricted growth functions and minimal ascent sequences.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::containment::{validate_pattern, LastEntryMatcher, Matcher};
use crate::error::{guard, Error, Result};
use crate::minimality::for_each_mask;
use crate::par::{map_ordered, Execution};
use crate::seq::{is_cayley_permutation, reduce_small_into, IntSeq};

/// Default cap on the length explored by [`ascent_minimal_set`].
pub const DEFAULT_MAX_ASCENT_LEN: usize = 13;
/// Default cap on the host length for [`is_minimal_in_family`].
pub const DEFAULT_FAMILY_ORACLE_MAX_LEN: usize = 24;

/// Record values and ascent count of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordProfile {
    pub rec_values: Vec<u32>,
    pub asc_count: usize,
}

impl RecordProfile {
    pub fn of(s: &IntSeq) -> Self {
        let mut rec_values = Vec::new();
        let mut best: Option<u32> = None;
        for &v in s.iter() {
            if best.is_none_or(|b| v > b) {
                rec_values.push(v);
                best = Some(v);
            }
        }
        RecordProfile {
            rec_values,
            asc_count: asc(s.as_slice()),
        }
    }
}

fn asc(s: &[u32]) -> usize {
    s.windows(2).filter(|w| w[0] < w[1]).count()
}

/// Inversion sequence whose record values are exactly `[0, max]`.
pub fn is_rgf(s: &IntSeq) -> bool {
    rgf(s.as_slice())
}

pub(crate) fn rgf(s: &[u32]) -> bool {
    let mut next = 0u32;
    for &v in s {
        if v > next {
            return false;
        }
        if v == next {
            next += 1;
        }
    }
    true
}

/// `σ_1 = 0` and `σ_i <= asc(σ_1 … σ_{i-1}) + 1` for `i >= 2`.
pub fn is_ascent_sequence(s: &IntSeq) -> bool {
    ascent(s.as_slice())
}

pub(crate) fn ascent(s: &[u32]) -> bool {
    let mut ascents = 0u32;
    for (i, &v) in s.iter().enumerate() {
        if i == 0 {
            if v != 0 {
                return false;
            }
            continue;
        }
        if v > ascents + 1 {
            return false;
        }
        if s[i - 1] < v {
            ascents += 1;
        }
    }
    true
}

/// Which restricted family a minimal set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Rgf,
    Ascent,
}

impl Family {
    fn contains(self, s: &[u32]) -> bool {
        match self {
            Family::Rgf => rgf(s),
            Family::Ascent => ascent(s) && is_cayley_permutation(s),
        }
    }
}

/// Is `sigma` minimal among members of `family` containing `rho`?
///
/// Scans every proper subsequence: its reduction must fail to be a family member
/// containing `rho`. Returns the 1-based deleted positions of a smaller member if one exists.
pub fn is_minimal_in_family(
    sigma: &IntSeq,
    rho: &IntSeq,
    family: Family,
) -> Result<Option<Vec<usize>>> {
    validate_pattern(rho)?;
    let n = sigma.len();
    guard("family oracle length", n, DEFAULT_FAMILY_ORACLE_MAX_LEN)?;
    let matcher = Matcher::new(rho.as_slice());
    if !family.contains(sigma.as_slice()) || !matcher.contains(sigma.as_slice()) {
        return Err(Error::Precondition(format!(
            "{sigma} is not a family member containing {rho}"
        )));
    }
    let s = sigma.as_slice();
    let mut sub = Vec::with_capacity(n);
    let mut red = Vec::with_capacity(n);
    let mut found = None;
    for kept in (rho.len()..n).rev() {
        let flow = for_each_mask(n, kept, |mask| {
            sub.clear();
            sub.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]));
            reduce_small_into(&sub, &mut red);
            if family.contains(&red) && matcher.contains(&red) {
                found = Some((0..n).filter(|i| mask >> i & 1 == 0).map(|i| i + 1).collect());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            break;
        }
    }
    Ok(found)
}

/// Minimal sequences of a restricted family, keyed by absolute length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMinimalSet {
    pub family: Family,
    pub pattern: IntSeq,
    /// Present for ascent sequences: only lengths up to this bound were explored.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<usize>,
    /// `(length, count)` for every length with at least one sequence.
    pub lengths: Vec<(usize, usize)>,
    pub sequences: Vec<IntSeq>,
}

impl FamilyMinimalSet {
    fn new(family: Family, pattern: IntSeq, truncated_at: Option<usize>, mut sequences: Vec<IntSeq>) -> Self {
        sequences.sort();
        sequences.dedup();
        let mut lengths: Vec<(usize, usize)> = Vec::new();
        for s in &sequences {
            match lengths.last_mut() {
                Some((l, c)) if *l == s.len() => *c += 1,
                _ => lengths.push((s.len(), 1)),
            }
        }
        FamilyMinimalSet {
            family,
            pattern,
            truncated_at,
            lengths,
            sequences,
        }
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn of_length(&self, len: usize) -> impl Iterator<Item = &IntSeq> {
        self.sequences.iter().filter(move |s| s.len() == len)
    }
}

/// The `ρ`-minimal RGFs: `ρ` with one extra copy of each non-record value
/// inserted so that the result is an RGF.
pub fn rgf_minimal_set(rho: &IntSeq) -> Result<FamilyMinimalSet> {
    validate_pattern(rho)?;
    let profile = RecordProfile::of(rho);
    let max = rho.max_value().unwrap();
    let missing: Vec<u32> = (0..=max).filter(|v| !profile.rec_values.contains(v)).collect();
    let k = rho.len();
    let m = missing.len();
    let n = k + m;
    let r = rho.as_slice();
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    // inserted entries must be records, so they appear in increasing order
    let _ = for_each_mask(n, m, |mask| {
        buf.clear();
        let (mut a, mut b) = (0, 0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                buf.push(missing[a]);
                a += 1;
            } else {
                buf.push(r[b]);
                b += 1;
            }
        }
        if rgf(&buf) {
            out.push(IntSeq::from(buf.as_slice()));
        }
        ControlFlow::Continue(())
    });
    Ok(FamilyMinimalSet::new(Family::Rgf, rho.clone(), None, out))
}

/// Options for [`ascent_minimal_set_with`].
#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    pub exec: Execution,
    pub max_len_limit: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            exec: Execution::default(),
            max_len_limit: DEFAULT_MAX_ASCENT_LEN,
        }
    }
}

/// The `ρ`-minimal Cayley ascent sequences of length at most `max_len`.
///
/// Lengths are explored in increasing order. At length `L`, a Cayley ascent
/// sequence containing `ρ` is minimal exactly when it avoids every minimal
/// sequence already found, since anything below it would sit above a shorter
/// minimal one. Prefixes that already contain a known minimal sequence are cut.
pub fn ascent_minimal_set(rho: &IntSeq, max_len: usize) -> Result<FamilyMinimalSet> {
    ascent_minimal_set_with(rho, max_len, &AscentOptions::default())
}

pub fn ascent_minimal_set_with(
    rho: &IntSeq,
    max_len: usize,
    opts: &AscentOptions,
) -> Result<FamilyMinimalSet> {
    validate_pattern(rho)?;
    guard("ascent search length", max_len, opts.max_len_limit)?;
    let rho_last = LastEntryMatcher::new(rho.as_slice());
    let mut found: Vec<IntSeq> = Vec::new();
    let mut known: Vec<LastEntryMatcher> = Vec::new();
    for len in rho.len()..=max_len {
        let search = AscentSearch {
            len,
            rho: &rho_last,
            known: &known,
        };
        let starts = search.starts();
        let level: Vec<IntSeq> = map_ordered(opts.exec, &starts, |p| search.run(p))
            .into_iter()
            .flatten()
            .collect();
        known.extend(level.iter().map(|s| LastEntryMatcher::new(s.as_slice())));
        found.extend(level);
    }
    Ok(FamilyMinimalSet::new(Family::Ascent, rho.clone(), Some(max_len), found))
}

#[derive(Clone)]
struct Prefix {
    seq: Vec<u32>,
    ascents: u32,
    has_rho: bool,
}

struct AscentSearch<'a> {
    len: usize,
    rho: &'a LastEntryMatcher,
    known: &'a [LastEntryMatcher],
}

impl AscentSearch<'_> {
    /// Extends `p` by `v`, or `None` if the new prefix is cut.
    fn push(&self, p: &Prefix, v: u32) -> Option<Prefix> {
        let mut seq = p.seq.clone();
        let ascents = p.ascents + u32::from(seq.last().is_some_and(|&l| l < v));
        seq.push(v);
        let max = *seq.iter().max().unwrap();
        // values skipped so far must all still fit in the remaining slots
        let mut seen = 0u64;
        for &x in &seq {
            seen |= 1u64 << x;
        }
        let missing = (max + 1) as usize - seen.count_ones() as usize;
        if missing > self.len - seq.len() {
            return None;
        }
        let has_rho = p.has_rho || self.rho.matches(&seq);
        // a prefix avoiding ρ avoids everything that contains ρ
        if has_rho && self.known.iter().any(|k| k.matches(&seq)) {
            return None;
        }
        Some(Prefix {
            seq,
            ascents,
            has_rho,
        })
    }

    fn children(&self, p: &Prefix) -> impl Iterator<Item = Prefix> + '_ {
        let p = p.clone();
        let top = if p.seq.is_empty() { 0 } else { p.ascents + 1 };
        (0..=top).filter_map(move |v| self.push(&p, v))
    }

    /// Work units: all surviving prefixes of a small fixed length.
    fn starts(&self) -> Vec<Prefix> {
        let root = Prefix {
            seq: Vec::new(),
            ascents: 0,
            has_rho: false,
        };
        let depth = self.len.min(6);
        let mut level = vec![root];
        for _ in 0..depth {
            level = level.iter().flat_map(|p| self.children(p).collect::<Vec<_>>()).collect();
        }
        level
    }

    fn run(&self, p: &Prefix) -> Vec<IntSeq> {
        let mut out = Vec::new();
        self.dfs(p, &mut out);
        out
    }

    fn dfs(&self, p: &Prefix, out: &mut Vec<IntSeq>) {
        if p.seq.len() == self.len {
            // the missing-value cut leaves only Cayley permutations at full length
            if p.has_rho {
                out.push(IntSeq::from(p.seq.as_slice()));
            }
            return;
        }
        for c in self.children(p) {
            self.dfs(&c, out);
        }
    }
}

/// Searches length-`|σ|+2` sequences obtained from the given minimal sequences by
/// inserting two entries, keeping Cayley ascent sequences that contain `rho` and
/// avoid every sequence in `known`. With `known` the complete list of minimal
/// sequences of length `<= |σ|+1`, every hit is minimal.
pub fn ascent_two_insertion_witnesses(
    rho: &IntSeq,
    seeds: &[IntSeq],
    known: &[IntSeq],
    exec: Execution,
) -> Result<Vec<IntSeq>> {
    validate_pattern(rho)?;
    let rho_m = Matcher::new(rho.as_slice());
    let known_m: Vec<Matcher> = known.iter().map(|s| Matcher::new(s.as_slice())).collect();
    let per_seed = map_ordered(exec, seeds, |seed| {
        let mut hits = Vec::new();
        let s = seed.as_slice();
        let n = s.len() + 2;
        let top = seed.max_value().unwrap_or(0) + 2;
        // insert two values; the doubled scale lets a new value fall between old ones
        let scaled: Vec<u32> = s.iter().map(|&v| 2 * v + 1).collect();
        let mut buf = Vec::with_capacity(n);
        let mut red = Vec::with_capacity(n);
        for i in 0..n {
            for j in i + 1..n {
                for a in 0..=2 * top {
                    for b in 0..=2 * top {
                        buf.clear();
                        let mut rest = scaled.iter();
                        for p in 0..n {
                            if p == i {
                                buf.push(a);
                            } else if p == j {
                                buf.push(b);
                            } else {
                                buf.push(*rest.next().unwrap());
                            }
                        }
                        reduce_small_into(&buf, &mut red);
                        if Family::Ascent.contains(&red)
                            && rho_m.contains(&red)
                            && !known_m.iter().any(|k| k.contains(&red))
                        {
                            hits.push(IntSeq::from(red.as_slice()));
                        }
                    }
                }
            }
        }
        hits
    });
    let mut out: Vec<IntSeq> = per_seed.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// A minimal ascent sequence of length `k² + 2k - 2` for the decreasing pattern of length `k`.
pub fn construct_decreasing_ascent(k: usize) -> Result<IntSeq> {
    if k < 3 {
        return Err(Error::Precondition(format!("k = {k}, need k >= 3")));
    }
    let mut out = Vec::with_capacity(k * k + 2 * k - 2);
    let mut a = 0u32;
    for size in 2..=k as u32 {
        let b = a + size - 1;
        let middle = (a + 1..b).rev();
        let first: Vec<u32> = middle.clone().chain([a, a]).collect();
        let second: Vec<u32> = [b, b].into_iter().chain(middle).collect();
        for (x, y) in first.into_iter().zip(second) {
            out.push(x);
            out.push(y);
        }
        a = b + 1;
    }
    out.extend((a..a + k as u32).rev());
    Ok(IntSeq::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::families::inversion_sequences;

    fn s(text: &str) -> IntSeq {
        text.parse().unwrap()
    }

    #[test]
    fn predicates() {
        assert!(is_rgf(&s("010")));
        assert!(!is_rgf(&s("0021")));
        assert!(is_rgf(&IntSeq::empty()));
        assert!(is_ascent_sequence(&IntSeq::empty()));
        assert!(is_ascent_sequence(&s("0101342423786857 56CBA9".replace(' ', "").as_str())));
        assert!(is_ascent_sequence(&s("001")));
        assert!(!is_ascent_sequence(&s("0002")));
        assert!(!is_ascent_sequence(&s("1")));
        assert!(is_ascent_sequence(&s("0102")));
        let p = RecordProfile::of(&s("0102"));
        assert_eq!(p.rec_values, vec![0, 1, 2]);
        assert_eq!(p.asc_count, 2);
    }

    /// Definitions taken literally, over all inversion sequences.
    #[test]
    fn predicates_match_definitions() {
        for n in 0..=7 {
            for x in inversion_sequences(n) {
                let prof = RecordProfile::of(&x);
                let rgf_def = prof.rec_values == (0..x.max_value().map_or(0, |m| m + 1)).collect::<Vec<_>>();
                assert_eq!(is_rgf(&x), rgf_def, "{x}");
                let asc_def = (0..n).all(|i| {
                    let bound = if i == 0 { 0 } else { asc(&x.as_slice()[..i]) + 1 };
                    x.as_slice()[i] as usize <= bound
                });
                assert_eq!(is_ascent_sequence(&x), asc_def, "{x}");
                if is_rgf(&x) {
                    assert!(is_ascent_sequence(&x));
                }
            }
        }
    }

    /// Minimal elements among all RGFs up to a length bound, by brute force.
    fn rgf_oracle(rho: &IntSeq, max_len: usize) -> Vec<IntSeq> {
        let m = Matcher::new(rho.as_slice());
        let mut out = Vec::new();
        for n in rho.len()..=max_len {
            for x in inversion_sequences(n) {
                if is_rgf(&x)
                    && m.contains(x.as_slice())
                    && is_minimal_in_family(&x, rho, Family::Rgf).unwrap().is_none()
                {
                    out.push(x);
                }
            }
        }
        out
    }

    #[test]
    fn rgf_examples() {
        assert_eq!(rgf_minimal_set(&s("10")).unwrap().sequences, vec![s("010")]);
        assert_eq!(rgf_minimal_set(&s("012")).unwrap().sequences, vec![s("012")]);
        let set = rgf_minimal_set(&s("021")).unwrap();
        assert_eq!(set.sequences, rgf_oracle(&s("021"), 6));
    }

    #[test]
    fn rgf_matches_oracle() {
        for k in 1..=4 {
            for rho in crate::generate::families::patterns(k) {
                let set = rgf_minimal_set(&rho).unwrap();
                let m = set.sequences[0].len() - k;
                assert_eq!(set.sequences, rgf_oracle(&rho, (k + m + 1).min(8)), "{rho}");
                for x in &set.sequences {
                    assert_eq!(x.len(), k + m);
                    assert_eq!(crate::containment::occurrences(x, &rho).unwrap().len(), 1);
                }
            }
        }
    }

    #[test]
    fn family_oracle_witness() {
        assert_eq!(is_minimal_in_family(&s("010"), &s("10"), Family::Ascent).unwrap(), None);
        assert_eq!(
            is_minimal_in_family(&s("0010"), &s("10"), Family::Ascent).unwrap(),
            Some(vec![2])
        );
        assert!(is_minimal_in_family(&s("021"), &s("10"), Family::Ascent).is_err());
    }

    #[test]
    fn ascent_small_cases() {
        assert_eq!(ascent_minimal_set(&s("10"), 5).unwrap().sequences, vec![s("010")]);
        assert_eq!(ascent_minimal_set(&s("00"), 5).unwrap().sequences, vec![s("00")]);
        assert!(ascent_minimal_set(&s("10"), 20).unwrap_err().is_guard());
    }

    /// Cayley ascent sequences containing ρ, filtered by the subsequence oracle.
    #[test]
    fn ascent_search_matches_oracle() {
        for rho in ["10", "01", "100", "201", "210", "1021", "2101"] {
            let rho = s(rho);
            let fast = ascent_minimal_set(&rho, 8).unwrap();
            let m = Matcher::new(rho.as_slice());
            let mut slow = Vec::new();
            for n in rho.len()..=8 {
                for x in inversion_sequences(n) {
                    if Family::Ascent.contains(x.as_slice())
                        && m.contains(x.as_slice())
                        && is_minimal_in_family(&x, &rho, Family::Ascent).unwrap().is_none()
                    {
                        slow.push(x);
                    }
                }
            }
            assert_eq!(fast.sequences, slow, "{rho}");
            assert_eq!(
                ascent_minimal_set_with(&rho, 8, &AscentOptions { exec: Execution::Sequential, ..Default::default() })
                    .unwrap(),
                fast
            );
        }
    }

    #[test]
    fn decreasing_construction() {
        let c4 = construct_decreasing_ascent(4).unwrap();
        assert_eq!(c4.to_string(), "0101342423786857 56CBA9".replace(' ', ""));
        assert_eq!(c4.len(), 22);
        let c3 = construct_decreasing_ascent(3).unwrap();
        assert_eq!(c3, s("0101342423765"));
        assert!(is_ascent_sequence(&c3) && c3.is_cayley_permutation());
        assert_eq!(is_minimal_in_family(&c3, &s("210"), Family::Ascent).unwrap(), None);
        assert!(construct_decreasing_ascent(2).is_err());
        for k in 3..=6 {
            assert_eq!(construct_decreasing_ascent(k).unwrap().len(), k * k + 2 * k - 2);
        }
    }
}
