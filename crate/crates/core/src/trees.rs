//! Coloured inversion sequences, increasing trees and the bijections between
//! them and minimal inversion sequences.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::containment::validate_pattern;
use crate::error::{guard, Error, Result};
use crate::generate::families::visit_inversion_cayley;
use crate::minimality::is_minimal_prop1;
use crate::par::{map_ordered, Execution};
use crate::seq::IntSeq;
use crate::series;

/// Largest `n` for which `A_{n,m}` is enumerated rather than read off the series.
pub const DEFAULT_MAX_A_ENUM: usize = 9;
/// Largest `n + k` for which `T_{n,k}` is enumerated.
pub const DEFAULT_MAX_T_ENUM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Colour {
    #[serde(rename = "b")]
    Blue,
    #[serde(rename = "r")]
    Red,
}

impl Colour {
    fn letter(self) -> char {
        match self {
            Colour::Blue => 'b',
            Colour::Red => 'r',
        }
    }
}

/// An inversion sequence of length `n` with a colour on every value of `[0, n-1]`.
///
/// Red values occur at least twice; absent values are blue.
/// Text form is `SEQ:COLOURS` with one `b`/`r` letter per value, e.g. `002303:rrbrbb`.
/// A bare `SEQ` means everything is blue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredInvSeq {
    seq: IntSeq,
    red: Vec<bool>,
}

impl ColouredInvSeq {
    pub fn new(seq: IntSeq, red_values: &[u32]) -> Result<Self> {
        let n = seq.len();
        let mut red = vec![false; n];
        for &v in red_values {
            if v as usize >= n {
                return Err(Error::Precondition(format!(
                    "red value {v} is outside [0, {}]",
                    n as i64 - 1
                )));
            }
            red[v as usize] = true;
        }
        Self::from_mask(seq, red)
    }

    fn from_mask(seq: IntSeq, red: Vec<bool>) -> Result<Self> {
        if !seq.is_inversion_sequence() {
            return Err(Error::NotInversionSequence(seq));
        }
        let mut count = vec![0usize; seq.len()];
        for &v in seq.iter() {
            count[v as usize] += 1;
        }
        if let Some(v) = (0..seq.len()).find(|&v| red[v] && count[v] < 2) {
            return Err(Error::Precondition(format!(
                "red value {v} occurs {} time(s) in {seq}",
                count[v]
            )));
        }
        Ok(ColouredInvSeq { seq, red })
    }

    /// All values blue.
    pub fn blue(seq: IntSeq) -> Result<Self> {
        let n = seq.len();
        Self::from_mask(seq, vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq(&self) -> &IntSeq {
        &self.seq
    }

    pub fn uncolour(&self) -> IntSeq {
        self.seq.clone()
    }

    pub fn colour(&self, value: u32) -> Colour {
        match self.red.get(value as usize) {
            Some(true) => Colour::Red,
            _ => Colour::Blue,
        }
    }

    pub fn red_values(&self) -> Vec<u32> {
        (0..self.red.len() as u32).filter(|&v| self.red[v as usize]).collect()
    }

    /// Number of blue values in `[0, n-1]`, the `m` of `A_{n,m}`.
    pub fn blue_count(&self) -> usize {
        self.red.iter().filter(|r| !**r).count()
    }
}

impl fmt::Display for ColouredInvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: String = (0..self.len() as u32).map(|v| self.colour(v).letter()).collect();
        write!(f, "{}:{}", self.seq, letters)
    }
}

impl FromStr for ColouredInvSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (seq_text, colours) = match text.split_once(':') {
            Some((s, c)) => (s, Some(c)),
            None => (text, None),
        };
        let seq: IntSeq = if seq_text.is_empty() {
            IntSeq::empty()
        } else {
            seq_text.parse()?
        };
        let Some(colours) = colours else {
            return Self::blue(seq);
        };
        if colours.chars().count() != seq.len() {
            return Err(Error::Parse {
                input: text.into(),
                reason: format!("expected {} colour letters", seq.len()),
            });
        }
        let red = colours
            .chars()
            .map(|c| match c {
                'b' | 'B' => Ok(false),
                'r' | 'R' => Ok(true),
                _ => Err(Error::Parse {
                    input: text.into(),
                    reason: format!("bad colour letter {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_mask(seq, red)
    }
}

impl Serialize for ColouredInvSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A rooted labelled tree on `[0, N-1]` with root 0 and increasing labels along paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncTree {
    parent: Vec<Option<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colour: Option<Vec<Colour>>,
}

impl IncTree {
    pub fn new(parent: Vec<Option<usize>>, colour: Option<Vec<Colour>>) -> Result<Self> {
        let t = IncTree { parent, colour };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.parent.is_empty() {
            return Err(Error::MalformedTree("a tree needs at least the root".into()));
        }
        if self.parent[0].is_some() {
            return Err(Error::MalformedTree("node 0 must be the root".into()));
        }
        for (v, p) in self.parent.iter().enumerate().skip(1) {
            match p {
                None => return Err(Error::MalformedTree(format!("node {v} has no parent"))),
                Some(p) if *p >= v => {
                    return Err(Error::MalformedTree(format!(
                        "node {v} has parent {p}, labels must increase away from the root"
                    )))
                }
                _ => {}
            }
        }
        if let Some(c) = &self.colour {
            if c.len() != self.parent.len() {
                return Err(Error::MalformedTree(format!(
                    "{} colours for {} nodes",
                    c.len(),
                    self.parent.len()
                )));
            }
        }
        Ok(())
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn colours(&self) -> Option<&[Colour]> {
        self.colour.as_deref()
    }

    /// Children of `v` in increasing order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        (v + 1..self.len()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    fn child_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.len()];
        for p in self.parent.iter().flatten() {
            c[*p] += 1;
        }
        c
    }

    /// Membership in `B_{n,m}`: coloured, `m` blue nodes, red nodes have two or more children.
    pub fn is_b_tree(&self, n: usize, m: usize) -> bool {
        let Some(colour) = &self.colour else {
            return false;
        };
        let kids = self.child_counts();
        self.len() == n
            && colour.iter().filter(|c| **c == Colour::Blue).count() == m
            && (0..n).all(|v| colour[v] == Colour::Blue || kids[v] >= 2)
    }

    /// Membership in `T_{n,k}`: nodes `[0, n-1]` internal, nodes `[n, n+k-1]` leaves.
    pub fn is_t_tree(&self, n: usize, k: usize) -> bool {
        let kids = self.child_counts();
        self.len() == n + k && (0..n + k).all(|v| (kids[v] > 0) == (v < n))
    }

    /// Newick text with children in increasing order, e.g. `((2,(4,7)3)1)0;`.
    /// Coloured trees tag each label with `b` or `r`.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.newick_node(0, &mut out);
        out.push(';');
        out
    }

    fn newick_node(&self, v: usize, out: &mut String) {
        let kids = self.children(v);
        if !kids.is_empty() {
            out.push('(');
            for (i, c) in kids.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.newick_node(c, out);
            }
            out.push(')');
        }
        out.push_str(&v.to_string());
        if let Some(colour) = &self.colour {
            out.push(colour[v].letter());
        }
    }
}

/// `φ` on a plain inversion sequence: the children of `v` are the positions of value `v`.
pub fn phi(s: &IntSeq) -> Result<IncTree> {
    if !s.is_inversion_sequence() {
        return Err(Error::NotInversionSequence(s.clone()));
    }
    let mut parent = vec![None];
    parent.extend(s.iter().map(|&v| Some(v as usize)));
    Ok(IncTree {
        parent,
        colour: None,
    })
}

/// Inverse of [`phi`]. Colours, if any, are ignored.
pub fn phi_inverse(t: &IncTree) -> Result<IntSeq> {
    t.validate()?;
    Ok(IntSeq::new(t.parent[1..].iter().map(|p| p.unwrap() as u32).collect()))
}

/// `φ` on a coloured sequence; node `|α|` is blue.
pub fn phi_coloured(alpha: &ColouredInvSeq) -> IncTree {
    let mut t = phi(&alpha.seq).expect("coloured sequences are inversion sequences");
    let n = alpha.len();
    let mut colour: Vec<Colour> = (0..n as u32).map(|v| alpha.colour(v)).collect();
    colour.push(Colour::Blue);
    t.colour = Some(colour);
    t
}

pub fn phi_coloured_inverse(t: &IncTree) -> Result<ColouredInvSeq> {
    let seq = phi_inverse(t)?;
    let colour = t
        .colour
        .as_ref()
        .ok_or_else(|| Error::MalformedTree("tree carries no colours".into()))?;
    let n = seq.len();
    if colour[n] != Colour::Blue {
        return Err(Error::MalformedTree(format!("node {n} must be blue")));
    }
    let red = colour[..n].iter().map(|c| *c == Colour::Red).collect();
    ColouredInvSeq::from_mask(seq, red)
}

/// Lexicographic prefixes of inversion sequences used as parallel work units.
fn inv_prefixes(n: usize, depth: usize) -> Vec<Vec<u32>> {
    let depth = depth.min(n);
    let mut out = vec![Vec::new()];
    for j in 0..depth {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=j as u32).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn visit_inv_from(n: usize, buf: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if buf.len() == n {
        visit(buf);
        return;
    }
    for v in 0..=buf.len() as u32 {
        buf.push(v);
        visit_inv_from(n, buf, visit);
        buf.pop();
    }
}

/// Calls `f(seq, multi)` for every inversion sequence of length `n`, where `multi`
/// lists the values occurring at least twice. Work is split over prefixes.
fn for_each_inv_with_multi<R, F>(n: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&[u32], &[u32], &mut Vec<R>) + Sync + Send,
{
    let prefixes = inv_prefixes(n, 4);
    let chunks = map_ordered(exec, &prefixes, |p| {
        let mut out = Vec::new();
        let mut buf = p.clone();
        let mut count = vec![0u32; n];
        let mut multi = Vec::with_capacity(n);
        visit_inv_from(n, &mut buf, &mut |s| {
            count.iter_mut().for_each(|c| *c = 0);
            for &v in s {
                count[v as usize] += 1;
            }
            multi.clear();
            multi.extend((0..n as u32).filter(|&v| count[v as usize] >= 2));
            f(s, &multi, &mut out);
        });
        out
    });
    chunks.into_iter().flatten().collect()
}

/// All of `A_{n,m}`, ordered by sequence then by red set.
pub fn enumerate_a(n: usize, m: usize) -> Result<Vec<ColouredInvSeq>> {
    enumerate_a_with(n, m, Execution::default())
}

pub fn enumerate_a_with(n: usize, m: usize, exec: Execution) -> Result<Vec<ColouredInvSeq>> {
    guard("A enumeration length", n, DEFAULT_MAX_A_ENUM)?;
    if m > n || n > 2 * m {
        return Ok(Vec::new());
    }
    let reds = n - m;
    let mut all = for_each_inv_with_multi(n, exec, |s, multi, out| {
        for_each_subset(multi, reds, &mut |red| {
            let mut mask = vec![false; n];
            for &v in red {
                mask[v as usize] = true;
            }
            out.push(ColouredInvSeq {
                seq: IntSeq::from(s),
                red: mask,
            });
        });
    });
    all.sort();
    Ok(all)
}

fn for_each_subset(items: &[u32], size: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(items: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// `|A_{n,m}|` by enumeration, without materializing the set.
pub fn count_a_enum(n: usize, m: usize, exec: Execution) -> Result<u64> {
    guard("A enumeration length", n, DEFAULT_MAX_A_ENUM)?;
    if m > n || n > 2 * m {
        return Ok(0);
    }
    let reds = n - m;
    let parts = for_each_inv_with_multi(n, exec, |_, multi, out: &mut Vec<u64>| {
        if out.is_empty() {
            out.push(0);
        }
        out[0] += binomial(multi.len(), reds);
    });
    Ok(parts.into_iter().sum())
}

/// `|A_{n,m}|`: enumeration up to [`DEFAULT_MAX_A_ENUM`], series coefficients beyond.
pub fn count_a(n: usize, m: usize) -> Result<BigUint> {
    if n <= DEFAULT_MAX_A_ENUM {
        return Ok(count_a_enum(n, m, Execution::default())?.into());
    }
    let b = series::solve_b(n + m + 2);
    series::a_count(&b, n, m)
}

/// All of `B_{n,m}`, as `φ` images of `A_{n-1,m-1}`.
pub fn enumerate_b(n: usize, m: usize) -> Result<Vec<IncTree>> {
    if n == 0 || m == 0 {
        return Ok(Vec::new());
    }
    Ok(enumerate_a(n - 1, m - 1)?.iter().map(phi_coloured).collect())
}

fn check_prefix_pattern(rho: &IntSeq) -> Result<usize> {
    validate_pattern(rho)?;
    let m = rho.mdd()?;
    if rho.at(1) != m {
        return Err(Error::Precondition(format!(
            "{rho} has first entry {} but mdd {m}",
            rho.at(1)
        )));
    }
    Ok(m as usize)
}

/// The coloured-prefix bijection from `A_{n,m}` to the `ρ`-minimal sequences of
/// length `n + |ρ|`, for patterns with `ρ_1 = mdd(ρ) = m`.
pub fn coloured_to_minimal(alpha: &ColouredInvSeq, rho: &IntSeq) -> Result<IntSeq> {
    let m = check_prefix_pattern(rho)?;
    let n = alpha.len();
    if alpha.blue_count() != m {
        return Err(Error::Precondition(format!(
            "{alpha} has {} blue values, the pattern needs {m}",
            alpha.blue_count()
        )));
    }
    let top = rho.max_value().unwrap() as usize + n - m;
    let values: Vec<u32> = (0..=top as u32).filter(|&v| alpha.colour(v) == Colour::Blue).collect();
    let lifted: Vec<u32> = rho.iter().map(|&r| values[r as usize]).collect();
    Ok(alpha.seq.concat(&IntSeq::new(lifted)))
}

/// Inverse of [`coloured_to_minimal`].
pub fn minimal_to_coloured(sigma: &IntSeq, rho: &IntSeq) -> Result<ColouredInvSeq> {
    check_prefix_pattern(rho)?;
    let k = rho.len();
    if sigma.len() < k {
        return Err(Error::Precondition(format!("{sigma} is shorter than {rho}")));
    }
    if !is_minimal_prop1(sigma, rho)?.minimal {
        return Err(Error::Precondition(format!("{sigma} is not {rho}-minimal")));
    }
    let n = sigma.len() - k;
    let (head, tail) = sigma.as_slice().split_at(n);
    let red: Vec<u32> = (0..n as u32)
        .filter(|v| head.contains(v) && !tail.contains(v))
        .collect();
    ColouredInvSeq::new(IntSeq::from(head), &red)
}

/// All of `T_{n,k}`, as `φ` images of inversion sequences of length `n+k-1` with value set `[0, n-1]`.
pub fn enumerate_t(n: usize, k: usize) -> Result<Vec<IncTree>> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("T_{n,k} needs n, k >= 1".into()));
    }
    guard("T enumeration size", n + k, DEFAULT_MAX_T_ENUM)?;
    let mut out = Vec::new();
    visit_inversion_cayley(n + k - 1, |s| {
        if s.iter().max() == Some(&(n as u32 - 1)) {
            out.push(phi(&IntSeq::from(s)).unwrap());
        }
    });
    Ok(out)
}

/// `|I_len ∩ P_len|` split by maximum value: entry `j` counts those with max `j`.
pub fn ip_counts_by_max(len: usize) -> Result<Vec<u64>> {
    guard("I∩P enumeration length", len, DEFAULT_MAX_T_ENUM)?;
    let mut counts = vec![0u64; len.max(1)];
    visit_inversion_cayley(len, |s| {
        counts[*s.iter().max().unwrap_or(&0) as usize] += 1;
    });
    if len == 0 {
        counts[0] = 1;
    }
    Ok(counts)
}

/// `|T_{n,k}|`: enumeration up to `n + k <=` [`DEFAULT_MAX_T_ENUM`], series beyond.
pub fn count_t(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("T_{n,k} needs n, k >= 1".into()));
    }
    if n + k <= DEFAULT_MAX_T_ENUM {
        return Ok(ip_counts_by_max(n + k - 1)?[n - 1].into());
    }
    let t = series::closed_t(n + k);
    series::t_count(&t, n, k)
}
