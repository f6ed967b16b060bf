//! Integer sequences and their basic statistics.
//!
//! Positions reported to callers (saturated positions, occurrences) are
//! 1-based. Internally everything is a plain 0-based slice.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extensions;

/// A finite sequence of nonnegative integers.
///
/// Sequences are ordered canonically: shorter first, then lexicographically.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntSeq(Vec<u32>);

impl IntSeq {
    pub fn new(entries: Vec<u32>) -> Self {
        IntSeq(entries)
    }

    pub fn empty() -> Self {
        IntSeq(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn max_value(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    /// `σ_i` for a 1-based position `i`.
    pub fn at(&self, position: usize) -> u32 {
        self.0[position - 1]
    }

    pub fn is_inversion_sequence(&self) -> bool {
        is_inversion_sequence(&self.0)
    }

    pub fn is_cayley_permutation(&self) -> bool {
        is_cayley_permutation(&self.0)
    }

    pub fn reduce(&self) -> IntSeq {
        IntSeq(reduce(&self.0))
    }

    /// Number of distinct values.
    pub fn dist(&self) -> usize {
        let mut values = self.0.clone();
        values.sort_unstable();
        values.dedup();
        values.len()
    }

    /// Maximum diagonal difference, `max(σ_i - i + 1)`.
    pub fn mdd(&self) -> Result<u32> {
        mdd(&self.0).ok_or(Error::EmptySequence)
    }

    /// 1-based positions of the saturated entries.
    pub fn sat(&self) -> Result<Vec<usize>> {
        let m = self.mdd()? as i64;
        Ok(self
            .0
            .iter()
            .enumerate()
            .filter(|&(j, &x)| x as i64 - j as i64 == m)
            .map(|(j, _)| j + 1)
            .collect())
    }

    pub fn concat(&self, other: &IntSeq) -> IntSeq {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        IntSeq(out)
    }

    /// Adds `c` to every entry.
    pub fn shift(&self, c: u32) -> IntSeq {
        IntSeq(self.0.iter().map(|&x| x + c).collect())
    }

    /// Concatenation of `k` copies.
    pub fn power(&self, k: usize) -> IntSeq {
        IntSeq(self.0.repeat(k))
    }

    pub fn flags(&self) -> SeqClassFlags {
        SeqClassFlags::of(self)
    }

    /// Compact text form when every value is at most 35, comma form otherwise.
    pub fn format(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<IntSeq> {
        text.parse()
    }
}

impl From<Vec<u32>> for IntSeq {
    fn from(v: Vec<u32>) -> Self {
        IntSeq(v)
    }
}

impl From<&[u32]> for IntSeq {
    fn from(v: &[u32]) -> Self {
        IntSeq(v.to_vec())
    }
}

impl AsRef<[u32]> for IntSeq {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a IntSeq {
    type Item = &'a u32;
    type IntoIter = std::slice::Iter<'a, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Ord for IntSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for IntSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by length, then lexicographic.
pub fn canonical_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

const DIGITS: &[u8; 36] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x < 36) {
            for &x in &self.0 {
                write!(f, "{}", DIGITS[x as usize] as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))?;
            // a lone value still needs a comma to be read back in comma form
            if self.0.len() == 1 {
                write!(f, ",")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntSeq({self})")
    }
}

impl FromStr for IntSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let fail = |reason: String| Error::Parse {
            input: text.to_string(),
            reason,
        };
        if trimmed.contains(',') {
            let mut tokens: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if tokens.len() == 2 && tokens[1].is_empty() {
                tokens.pop();
            }
            let mut out = Vec::with_capacity(tokens.len());
            for tok in tokens {
                if tok.starts_with('-') {
                    return Err(fail(format!("negative value {tok}")));
                }
                let value = tok
                    .parse::<u32>()
                    .map_err(|e| fail(format!("bad entry {tok:?}: {e}")))?;
                out.push(value);
            }
            Ok(IntSeq(out))
        } else {
            trimmed
                .chars()
                .map(|c| match c {
                    '0'..='9' => Ok(c as u32 - '0' as u32),
                    'A'..='Z' => Ok(c as u32 - 'A' as u32 + 10),
                    _ => Err(fail(format!("invalid character {c:?}"))),
                })
                .collect::<Result<Vec<u32>>>()
                .map(IntSeq)
        }
    }
}

impl Serialize for IntSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Membership of a sequence in the families used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeqClassFlags {
    pub is_inversion_sequence: bool,
    pub is_cayley_permutation: bool,
    pub is_rgf: bool,
    pub is_ascent_sequence: bool,
}

impl SeqClassFlags {
    pub fn of(s: &IntSeq) -> Self {
        SeqClassFlags {
            is_inversion_sequence: s.is_inversion_sequence(),
            is_cayley_permutation: s.is_cayley_permutation(),
            is_rgf: extensions::is_rgf(s),
            is_ascent_sequence: extensions::is_ascent_sequence(s),
        }
    }
}

pub(crate) fn is_inversion_sequence(s: &[u32]) -> bool {
    s.iter().enumerate().all(|(j, &x)| (x as usize) <= j)
}

pub(crate) fn is_cayley_permutation(s: &[u32]) -> bool {
    let Some(&max) = s.iter().max() else {
        return true;
    };
    let max = max as usize;
    if max >= s.len() {
        return false;
    }
    let mut seen = vec![false; max + 1];
    for &x in s {
        seen[x as usize] = true;
    }
    seen.into_iter().all(|b| b)
}

pub(crate) fn reduce(s: &[u32]) -> Vec<u32> {
    let mut values = s.to_vec();
    values.sort_unstable();
    values.dedup();
    s.iter()
        .map(|x| values.binary_search(x).expect("value present") as u32)
        .collect()
}

/// Writes the reduction of `s` into `out`, for callers with small dense values.
pub(crate) fn reduce_small_into(s: &[u32], out: &mut Vec<u32>) {
    let mut rank = [u32::MAX; 64];
    let mut present: u64 = 0;
    for &x in s {
        debug_assert!(x < 64);
        present |= 1 << x;
    }
    let mut r = 0;
    for (v, slot) in rank.iter_mut().enumerate() {
        if present >> v & 1 == 1 {
            *slot = r;
            r += 1;
        }
    }
    out.clear();
    out.extend(s.iter().map(|&x| rank[x as usize]));
}

pub(crate) fn mdd(s: &[u32]) -> Option<u32> {
    s.iter()
        .enumerate()
        .map(|(j, &x)| x as i64 - j as i64)
        .max()
        .map(|m| m as u32)
}
