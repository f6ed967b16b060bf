//! Pattern containment and occurrence enumeration.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::IntSeq;

/// 1-based, strictly increasing positions of a pattern occurrence in a host.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Occurrence {
    pub positions: Vec<usize>,
}

impl Occurrence {
    /// The host subsequence at these positions.
    pub fn subsequence(&self, host: &IntSeq) -> IntSeq {
        self.positions.iter().map(|&p| host.at(p)).collect::<Vec<_>>().into()
    }

    pub fn contains_position(&self, p: usize) -> bool {
        self.positions.binary_search(&p).is_ok()
    }
}

/// Checks that `pattern` is a nonempty Cayley permutation.
pub fn validate_pattern(pattern: &IntSeq) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if !pattern.is_cayley_permutation() {
        return Err(Error::NotCayleyPermutation(pattern.clone()));
    }
    Ok(())
}

/// Does `host` contain `pattern`? The pattern must be a nonempty Cayley permutation.
pub fn contains(host: &IntSeq, pattern: &IntSeq) -> Result<bool> {
    validate_pattern(pattern)?;
    Ok(Matcher::new(pattern.as_slice()).contains(host.as_slice()))
}

/// Every occurrence of `pattern` in `host`, in lexicographic order of positions.
pub fn occurrences(host: &IntSeq, pattern: &IntSeq) -> Result<Vec<Occurrence>> {
    validate_pattern(pattern)?;
    let matcher = Matcher::new(pattern.as_slice());
    let mut out = Vec::new();
    let _ = matcher.for_each(host.as_slice(), |pos| {
        out.push(Occurrence {
            positions: pos.iter().map(|p| p + 1).collect(),
        });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Backtracking matcher for one fixed pattern.
///
/// For pattern index `j`, only three earlier indices constrain the host value:
/// an earlier index with an equal value, or else the nearest smaller and nearest
/// larger earlier values. Checking those three keeps each extension O(1).
#[derive(Debug, Clone)]
pub(crate) struct Matcher {
    pattern: Vec<u32>,
    rel: Vec<Relation>,
}

#[derive(Debug, Clone, Copy)]
enum Relation {
    Equal(usize),
    Between(Option<usize>, Option<usize>),
}

impl Matcher {
    pub(crate) fn new(pattern: &[u32]) -> Self {
        let rel = (0..pattern.len())
            .map(|j| {
                let v = pattern[j];
                if let Some(i) = (0..j).find(|&i| pattern[i] == v) {
                    return Relation::Equal(i);
                }
                let lo = (0..j)
                    .filter(|&i| pattern[i] < v)
                    .max_by_key(|&i| pattern[i]);
                let hi = (0..j)
                    .filter(|&i| pattern[i] > v)
                    .min_by_key(|&i| pattern[i]);
                Relation::Between(lo, hi)
            })
            .collect();
        Matcher {
            pattern: pattern.to_vec(),
            rel,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.pattern.len()
    }

    #[inline]
    fn fits(&self, host: &[u32], assigned: &[usize], j: usize, value: u32) -> bool {
        match self.rel[j] {
            Relation::Equal(i) => host[assigned[i]] == value,
            Relation::Between(lo, hi) => {
                lo.is_none_or(|i| host[assigned[i]] < value)
                    && hi.is_none_or(|i| host[assigned[i]] > value)
            }
        }
    }

    /// Visits occurrences (0-based positions) in lexicographic order until `visit` breaks.
    pub(crate) fn for_each<F>(&self, host: &[u32], mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.len();
        if k == 0 || k > host.len() {
            return ControlFlow::Continue(());
        }
        let mut assigned = vec![0usize; k];
        self.extend(host, &mut assigned, 0, 0, host.len(), &mut visit)
    }

    fn extend<F>(
        &self,
        host: &[u32],
        assigned: &mut [usize],
        j: usize,
        start: usize,
        end: usize,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.len();
        if j == k {
            return visit(assigned);
        }
        // leave room for the k - j - 1 remaining pattern entries
        let last = end - (k - j);
        for p in start..=last {
            if self.fits(host, assigned, j, host[p]) {
                assigned[j] = p;
                self.extend(host, assigned, j + 1, p + 1, end, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    pub(crate) fn contains(&self, host: &[u32]) -> bool {
        self.for_each(host, |_| ControlFlow::Break(())).is_break()
    }

}

/// Tests for occurrences that use the final entry of the host.
///
/// The pattern is matched right to left with its last entry pinned to the host's
/// last entry, which is how extensions of an occurrence-free prefix are checked.
#[derive(Debug, Clone)]
pub(crate) struct LastEntryMatcher {
    reversed: Matcher,
}

impl LastEntryMatcher {
    pub(crate) fn new(pattern: &[u32]) -> Self {
        let rev: Vec<u32> = pattern.iter().rev().copied().collect();
        LastEntryMatcher {
            reversed: Matcher::new(&rev),
        }
    }

    pub(crate) fn matches(&self, host: &[u32]) -> bool {
        let k = self.reversed.len();
        let n = host.len();
        if k == 0 || k > n {
            return false;
        }
        let rev_host: Vec<u32> = host.iter().rev().copied().collect();
        let mut assigned = vec![0usize; k];
        self.reversed
            .extend(&rev_host, &mut assigned, 1, 1, n, &mut |_| ControlFlow::Break(()))
            .is_break()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> IntSeq {
        text.parse().unwrap()
    }

    /// Raw subset enumeration, kept independent of the backtracking matcher.
    fn occurrences_by_subsets(host: &IntSeq, pattern: &IntSeq) -> Vec<Vec<usize>> {
        let n = host.len();
        let k = pattern.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let pos: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub: IntSeq = pos.iter().map(|&p| host.as_slice()[p]).collect::<Vec<_>>().into();
            if sub.reduce() == *pattern {
                out.push(pos.iter().map(|p| p + 1).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&s("497416"), &s("010")).unwrap());
        assert!(!contains(&s("497416"), &s("012")).unwrap());
        assert!(contains(&s("0021401"), &s("120")).unwrap());
    }

    #[test]
    fn occurrence_examples() {
        let occ = occurrences(&s("497416"), &s("010")).unwrap();
        assert_eq!(occ.len(), 2);
        let subs: Vec<IntSeq> = occ.iter().map(|o| o.subsequence(&s("497416"))).collect();
        assert_eq!(subs, vec![s("494"), s("474")]);
        assert_eq!(
            occ.iter().map(|o| o.positions.clone()).collect::<Vec<_>>(),
            occurrences_by_subsets(&s("497416"), &s("010"))
        );
        assert_eq!(occurrences(&s("01214027635"), &s("1306524")).unwrap().len(), 3);
        assert_eq!(occurrences(&s("010"), &s("0")).unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_patterns() {
        assert_eq!(contains(&s("012"), &IntSeq::empty()), Err(Error::EmptyPattern));
        assert!(matches!(
            contains(&s("012"), &s("02")),
            Err(Error::NotCayleyPermutation(_))
        ));
        assert!(occurrences(&s("012"), &s("1")).is_err());
    }

    #[test]
    fn using_last_entry() {
        let m = LastEntryMatcher::new(&[1, 0]);
        assert!(m.matches(&[0, 2, 1]));
        assert!(!m.matches(&[1, 0, 2]));
        assert!(Matcher::new(&[1, 0]).contains(&[1, 0, 2]));
    }

    fn arb_pattern() -> impl Strategy<Value = IntSeq> {
        prop::collection::vec(0u32..5, 1..=4).prop_map(|v| IntSeq::new(v).reduce())
    }

    fn arb_host() -> impl Strategy<Value = IntSeq> {
        prop::collection::vec(0u32..7, 0..=12).prop_map(IntSeq::new)
    }

    proptest! {
        #[test]
        fn backtracking_matches_subsets(host in arb_host(), pattern in arb_pattern()) {
            let fast: Vec<Vec<usize>> = occurrences(&host, &pattern)
                .unwrap()
                .into_iter()
                .map(|o| o.positions)
                .collect();
            prop_assert_eq!(&fast, &occurrences_by_subsets(&host, &pattern));
            prop_assert_eq!(contains(&host, &pattern).unwrap(), !fast.is_empty());
            prop_assert_eq!(contains(&host.reduce(), &pattern).unwrap(), !fast.is_empty());
            let uses_last = fast.iter().any(|o| o.last() == Some(&host.len()));
            prop_assert_eq!(LastEntryMatcher::new(pattern.as_slice()).matches(host.as_slice()), uses_last);
        }

        #[test]
        fn partial_order_laws(a in arb_pattern(), b in arb_pattern(), c in arb_pattern()) {
            prop_assert!(contains(&a, &a).unwrap());
            if contains(&a, &b).unwrap() {
                prop_assert!(b.len() <= a.len());
                if contains(&b, &a).unwrap() {
                    prop_assert_eq!(&a, &b);
                }
                if contains(&b, &c).unwrap() {
                    prop_assert!(contains(&a, &c).unwrap());
                }
            }
        }
    }
}
