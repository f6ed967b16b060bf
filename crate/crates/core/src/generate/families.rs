//! The ambient families: patterns (nonempty Cayley permutations), inversion
//! sequences, and inversion sequences that are also Cayley permutations.
//!
//! All lists come out in canonical order. Within one length that is plain
//! lexicographic order, which the depth-first generators produce directly.

use crate::error::{guard, Result};
use crate::seq::IntSeq;

pub const DEFAULT_MAX_PATTERN_LEN: usize = 8;
pub const DEFAULT_MAX_MATERIALIZED_LEN: usize = 11;

/// All Cayley permutations of length `k`, guarded at [`DEFAULT_MAX_PATTERN_LEN`].
pub fn enumerate_patterns(k: usize) -> Result<Vec<IntSeq>> {
    enumerate_patterns_with_limit(k, DEFAULT_MAX_PATTERN_LEN)
}

pub fn enumerate_patterns_with_limit(k: usize, limit: usize) -> Result<Vec<IntSeq>> {
    if k == 0 {
        return Err(crate::Error::Precondition("pattern length must be at least 1".into()));
    }
    guard("pattern length", k, limit)?;
    Ok(patterns(k))
}

/// All of `I_n`, guarded at [`DEFAULT_MAX_MATERIALIZED_LEN`].
pub fn enumerate_inv(n: usize) -> Result<Vec<IntSeq>> {
    guard("materialized length", n, DEFAULT_MAX_MATERIALIZED_LEN)?;
    Ok(inversion_sequences(n))
}

/// All of `I_n ∩ P_n`, guarded at [`DEFAULT_MAX_MATERIALIZED_LEN`].
pub fn enumerate_inv_cayley(n: usize) -> Result<Vec<IntSeq>> {
    guard("materialized length", n, DEFAULT_MAX_MATERIALIZED_LEN)?;
    Ok(inversion_cayley_sequences(n))
}

pub(crate) fn patterns(k: usize) -> Vec<IntSeq> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(k);
    let mut seen = vec![0u32; k.max(1)];
    patterns_rec(k, &mut buf, &mut seen, &mut out);
    out
}

fn patterns_rec(k: usize, buf: &mut Vec<u32>, seen: &mut [u32], out: &mut Vec<IntSeq>) {
    let remaining = k - buf.len();
    let max = buf.iter().copied().max();
    let missing = |upto: u32, seen: &[u32]| (0..upto).filter(|&v| seen[v as usize] == 0).count();
    if remaining == 0 {
        if max.is_none_or(|mx| missing(mx + 1, seen) == 0) {
            out.push(IntSeq::new(buf.clone()));
        }
        return;
    }
    for v in 0..k as u32 {
        let new_max = max.map_or(v, |mx| mx.max(v));
        seen[v as usize] += 1;
        // every gap below the running maximum still has to be filled
        if missing(new_max + 1, seen) < remaining {
            buf.push(v);
            patterns_rec(k, buf, seen, out);
            buf.pop();
        }
        seen[v as usize] -= 1;
    }
}

pub(crate) fn inversion_sequences(n: usize) -> Vec<IntSeq> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    inv_rec(n, &mut buf, &mut |s| out.push(IntSeq::from(s)));
    out
}

fn inv_rec(n: usize, buf: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if buf.len() == n {
        visit(buf);
        return;
    }
    for v in 0..=buf.len() as u32 {
        buf.push(v);
        inv_rec(n, buf, visit);
        buf.pop();
    }
}

pub(crate) fn inversion_cayley_sequences(n: usize) -> Vec<IntSeq> {
    let mut out = Vec::new();
    visit_inversion_cayley(n, |s| out.push(IntSeq::from(s)));
    out
}

/// Streams `I_n ∩ P_n` in lexicographic order without materializing it.
pub fn visit_inversion_cayley(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut buf = Vec::with_capacity(n);
    let mut seen = vec![0u32; n.max(1)];
    inv_cayley_rec(n, &mut buf, &mut seen, 0, &mut visit);
}

fn inv_cayley_rec(
    n: usize,
    buf: &mut Vec<u32>,
    seen: &mut [u32],
    missing: usize,
    visit: &mut impl FnMut(&[u32]),
) {
    let j = buf.len();
    if j == n {
        if missing == 0 {
            visit(buf);
        }
        return;
    }
    let max = buf.iter().copied().max();
    let remaining_after = n - j - 1;
    for v in 0..=j as u32 {
        // values skipped over by a new maximum become gaps
        let gaps_opened = match max {
            Some(mx) if v > mx + 1 => (v - mx - 1) as usize,
            None if v > 0 => v as usize,
            _ => 0,
        };
        let fills = usize::from(seen[v as usize] == 0 && max.is_some_and(|mx| v < mx));
        let new_missing = missing + gaps_opened - fills;
        if new_missing > remaining_after {
            continue;
        }
        seen[v as usize] += 1;
        buf.push(v);
        inv_cayley_rec(n, buf, seen, new_missing, visit);
        buf.pop();
        seen[v as usize] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_counts_are_fubini_numbers() {
        let counts: Vec<usize> = (1..=6).map(|k| patterns(k).len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75, 541, 4683]);
        assert_eq!(counts[..5].iter().sum::<usize>(), 633);
    }

    #[test]
    fn small_pattern_lists() {
        let show = |k| patterns(k).iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(show(1), vec!["0"]);
        assert_eq!(show(2), vec!["00", "01", "10"]);
        let p3 = patterns(3);
        assert!(p3.windows(2).all(|w| w[0] < w[1]));
        assert!(p3.iter().all(|p| p.is_cayley_permutation()));
    }

    #[test]
    fn pattern_guard() {
        assert!(enumerate_patterns(9).unwrap_err().is_guard());
        assert!(enumerate_patterns(0).is_err());
    }

    #[test]
    fn inversion_sequence_counts() {
        for n in 0..=7 {
            let fact: usize = (1..=n).product();
            assert_eq!(inversion_sequences(n).len(), fact);
        }
        assert_eq!(enumerate_inv(4).unwrap().len(), 24);
    }

    #[test]
    fn inversion_cayley_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| inversion_cayley_sequences(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 294, 1585]);
    }

    #[test]
    fn inversion_cayley_agrees_with_filter() {
        for n in 0..=7 {
            let filtered: Vec<IntSeq> = inversion_sequences(n)
                .into_iter()
                .filter(|s| s.is_cayley_permutation())
                .collect();
            assert_eq!(inversion_cayley_sequences(n), filtered);
        }
    }
}
