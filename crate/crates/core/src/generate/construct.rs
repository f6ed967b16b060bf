//! Closed-form constructions of minimal inversion sequences.

use crate::containment::validate_pattern;
use crate::error::{Error, Result};
use crate::generate::families::inversion_sequences;
use crate::seq::IntSeq;

/// Every `α · ρ` with `α ∈ I_{mdd(ρ)}`; all of them are minimal.
pub fn construct_prefix_family(rho: &IntSeq) -> Result<Vec<IntSeq>> {
    validate_pattern(rho)?;
    let m = rho.mdd()? as usize;
    let mut out: Vec<IntSeq> = inversion_sequences(m)
        .into_iter()
        .map(|alpha| alpha.concat(rho))
        .collect();
    out.sort();
    Ok(out)
}

/// `0 0 1 1 … (m-1)(m-1)`.
fn doubled_staircase(m: u32) -> Vec<u32> {
    (0..m).flat_map(|x| [x, x]).collect()
}

/// A minimal sequence of the maximal length `|ρ| + 2 mdd(ρ)`, for patterns
/// with a zero somewhere after the first entry.
pub fn construct_tight_ub(rho: &IntSeq) -> Result<IntSeq> {
    validate_pattern(rho)?;
    let r = rho.as_slice();
    let k = r.len();
    if k < 2 || !r[1..].contains(&0) {
        return Err(Error::Precondition(format!(
            "{rho} needs length at least 2 and a zero after its first entry"
        )));
    }
    let m = rho.mdd()?;
    let lifted = rho.shift(m);

    if r[0] != 0 || r[2..].contains(&0) {
        return Ok(IntSeq::new(doubled_staircase(m)).concat(&lifted));
    }
    // ρ starts with exactly two zeros
    if k == 2 {
        return Ok(rho.clone());
    }
    let mut out: Vec<u32> = (0..=m).collect();
    out.extend((0..=m).rev());
    out.extend_from_slice(&lifted.as_slice()[2..]);
    Ok(IntSeq::new(out))
}

/// A minimal sequence of length at least `|ρ| + 2 mdd(ρ) - 2`.
pub fn construct_near_max(rho: &IntSeq) -> Result<IntSeq> {
    validate_pattern(rho)?;
    let r = rho.as_slice();
    let k = r.len();
    let m = rho.mdd()?;

    if m <= 2 {
        return Ok(IntSeq::new(vec![0; m as usize]).concat(rho));
    }
    if r[1..].contains(&0) {
        return construct_tight_ub(rho);
    }
    // from here on ρ_1 = 0 is the only zero, so ρ_2 >= 1
    if r[1] >= 2 {
        let mut out = doubled_staircase(m);
        out.extend(r[1..].iter().map(|&x| x + m - 1));
        return Ok(IntSeq::new(out));
    }

    // ρ_2 = 1: ℓ is the length of the longest prefix that is an inversion sequence
    let l = (1..=k)
        .take_while(|&i| crate::seq::is_inversion_sequence(&r[..i]))
        .last()
        .expect("ρ_1 = 0");
    let l32 = l as u32;
    let mut out = vec![0, 0];
    out.extend_from_slice(&r[..l - 1]);
    out.extend((l32 + 1..=l32 + m - 2).flat_map(|x| [x, x]));
    out.extend(r[l - 1..].iter().map(|&x| if x <= l32 { x } else { x + m - 2 }));
    Ok(IntSeq::new(out))
}
