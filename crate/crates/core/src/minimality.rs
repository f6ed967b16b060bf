//! Deciding whether an inversion sequence is a minimal element among the
//! pattern-containing inversion sequences that are Cayley permutations.
//!
//! Two independent deciders live here: [`is_minimal_prop1`] inspects every
//! occurrence of the pattern, while [`is_minimal_oracle`] searches all proper
//! subsequences directly. The test suites check that they agree.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::containment::{validate_pattern, Matcher, Occurrence};
use crate::error::{Error, Result};
use crate::seq::{self, IntSeq};

/// Default cap on the host length accepted by the subsequence oracle.
pub const DEFAULT_ORACLE_MAX_LEN: usize = 20;

/// Why a sequence fails to be minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// An occurrence breaking one of the two occurrence conditions.
    Occurrence {
        occurrence: Occurrence,
        /// 1: some position from the last saturated entry onward is unused.
        /// 2: some unused value appears only once.
        condition: u8,
    },
    /// A strictly shorter pattern-containing inversion sequence below the host.
    Smaller {
        sequence: IntSeq,
        /// 1-based host positions that were deleted.
        deleted: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    pub witness: Option<Witness>,
}

impl MinimalityVerdict {
    fn minimal() -> Self {
        MinimalityVerdict {
            minimal: true,
            witness: None,
        }
    }

    fn refuted(witness: Witness) -> Self {
        MinimalityVerdict {
            minimal: false,
            witness: Some(witness),
        }
    }
}

fn check_inputs(sigma: &IntSeq, rho: &IntSeq) -> Result<Matcher> {
    validate_pattern(rho)?;
    if !sigma.is_inversion_sequence() {
        return Err(Error::NotInversionSequence(sigma.clone()));
    }
    if !sigma.is_cayley_permutation() {
        return Err(Error::NotCayleyPermutation(sigma.clone()));
    }
    let matcher = Matcher::new(rho.as_slice());
    if !matcher.contains(sigma.as_slice()) {
        return Err(Error::PatternNotContained {
            host: sigma.clone(),
            pattern: rho.clone(),
        });
    }
    Ok(matcher)
}

/// Occurrence-based decision. Stops at the first violating occurrence.
pub fn is_minimal_prop1(sigma: &IntSeq, rho: &IntSeq) -> Result<MinimalityVerdict> {
    let matcher = check_inputs(sigma, rho)?;
    Ok(match first_violation(sigma.as_slice(), &matcher) {
        None => MinimalityVerdict::minimal(),
        Some((positions, condition)) => MinimalityVerdict::refuted(Witness::Occurrence {
            occurrence: Occurrence {
                positions: positions.iter().map(|p| p + 1).collect(),
            },
            condition,
        }),
    })
}

/// First occurrence (0-based positions) violating a condition, with the condition number.
///
/// Assumes `sigma` is a Cayley inversion sequence containing the pattern.
pub(crate) fn first_violation(sigma: &[u32], matcher: &Matcher) -> Option<(Vec<usize>, u8)> {
    let n = sigma.len();
    let m = seq::mdd(sigma)? as i64;
    let last_sat = (0..n)
        .rev()
        .find(|&j| sigma[j] as i64 - j as i64 == m)
        .expect("mdd is attained");
    let tail_len = n - last_sat;

    let mut counts = vec![0u32; n];
    for &x in sigma {
        counts[x as usize] += 1;
    }

    let mut used = vec![false; n];
    let mut in_occurrence = vec![false; n];
    let mut found = None;
    let _ = matcher.for_each(sigma, |pos| {
        let covered = pos.iter().filter(|&&p| p >= last_sat).count();
        if covered != tail_len {
            found = Some((pos.to_vec(), 1));
            return ControlFlow::Break(());
        }
        for &p in pos {
            used[p] = true;
            in_occurrence[sigma[p] as usize] = true;
        }
        let bad = (0..n).any(|u| {
            !used[u] && !in_occurrence[sigma[u] as usize] && counts[sigma[u] as usize] < 2
        });
        for &p in pos {
            used[p] = false;
            in_occurrence[sigma[p] as usize] = false;
        }
        if bad {
            found = Some((pos.to_vec(), 2));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Brute-force decision over proper subsequences, with the default length cap.
pub fn is_minimal_oracle(sigma: &IntSeq, rho: &IntSeq) -> Result<MinimalityVerdict> {
    is_minimal_oracle_with_limit(sigma, rho, DEFAULT_ORACLE_MAX_LEN)
}

/// Brute-force decision over proper subsequences.
///
/// Deletion sets are tried by increasing size, so the witness is a closest
/// smaller sequence; ties are broken by the lexicographically smallest reduction.
pub fn is_minimal_oracle_with_limit(
    sigma: &IntSeq,
    rho: &IntSeq,
    max_len: usize,
) -> Result<MinimalityVerdict> {
    crate::error::guard("oracle host length", sigma.len(), max_len)?;
    let matcher = check_inputs(sigma, rho)?;
    let host = sigma.as_slice();
    let n = host.len();
    let k = rho.len();

    let mut kept = Vec::with_capacity(n);
    for deleted in 1..=n - k {
        let mut best: Option<(Vec<u32>, u32)> = None;
        let _ = for_each_mask(n, n - deleted, |mask| {
            kept.clear();
            kept.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| host[i]));
            let reduced = seq::reduce(&kept);
            if seq::is_inversion_sequence(&reduced) && matcher.contains(&reduced) {
                let better = best.as_ref().is_none_or(|(b, _)| reduced < *b);
                if better {
                    best = Some((reduced, mask));
                }
            }
            ControlFlow::Continue(())
        });
        if let Some((sequence, mask)) = best {
            return Ok(MinimalityVerdict::refuted(Witness::Smaller {
                sequence: IntSeq::new(sequence),
                deleted: (0..n).filter(|i| mask >> i & 1 == 0).map(|i| i + 1).collect(),
            }));
        }
    }
    Ok(MinimalityVerdict::minimal())
}

/// Boolean form of the oracle for callers that already validated their inputs.
pub(crate) fn oracle_is_minimal(host: &[u32], matcher: &Matcher) -> bool {
    let n = host.len();
    let k = matcher.len();
    let mut kept = Vec::with_capacity(n);
    let mut reduced = Vec::with_capacity(n);
    // large subsequences first: most non-minimal hosts lose a single entry
    for size in (k..n).rev() {
        let hit = for_each_mask(n, size, |mask| {
            kept.clear();
            kept.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| host[i]));
            seq::reduce_small_into(&kept, &mut reduced);
            if seq::is_inversion_sequence(&reduced) && matcher.contains(&reduced) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if hit.is_break() {
            return false;
        }
    }
    true
}

/// Calls `f` for every `n`-bit mask with exactly `ones` bits set, in increasing order.
pub(crate) fn for_each_mask<F>(n: usize, ones: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(u32) -> ControlFlow<()>,
{
    assert!(n < 32);
    if ones > n {
        return ControlFlow::Continue(());
    }
    if ones == 0 {
        return f(0);
    }
    let limit = 1u64 << n;
    let mut mask: u64 = (1 << ones) - 1;
    while mask < limit {
        f(mask as u32)?;
        // Gosper's hack: next integer with the same popcount
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    ControlFlow::Continue(())
}

/// Checks the saturated-entry conditions every minimal sequence must meet.
///
/// For each saturated position `k - l` of the pattern and each occurrence
/// `r_1 < ... < r_k`: every entry at least `σ_{r_{k-l}}` belongs to the
/// occurrence, the occurrence ends with positions `n-l..n`, and `n - l` is
/// saturated in `σ`.
pub fn check_prop_sat(sigma: &IntSeq, rho: &IntSeq) -> Result<bool> {
    let matcher = check_inputs(sigma, rho)?;
    let host = sigma.as_slice();
    let n = host.len();
    let k = rho.len();
    let sigma_sat = sigma.sat()?;
    let rho_sat = rho.sat()?;

    let mut ok = true;
    let _ = matcher.for_each(host, |pos| {
        for &q in &rho_sat {
            let l = k - q;
            let pivot = host[pos[q - 1]];
            let item1 = (0..n).all(|i| host[i] < pivot || pos.contains(&i));
            let item2 = (0..=l).all(|i| pos[k - 1 - i] == n - 1 - i);
            let item3 = sigma_sat.contains(&(n - l));
            if !(item1 && item2 && item3) {
                ok = false;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    Ok(ok)
}
