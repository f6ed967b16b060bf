//! Exact truncated bivariate power series, and the generating functions of the
//! coloured trees `B` and the bi-labelled trees `T`.
//!
//! Coefficients are stored densely for every monomial `x^i y^j` with
//! `i + j <= order`, grouped by total degree.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::Serialize;

use crate::error::{guard, Error, Result};

pub const DEFAULT_SERIES_ORDER: usize = 16;
pub const DEFAULT_MAX_SERIES_ORDER: usize = 40;

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    order: usize,
    coeffs: Vec<BigRational>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        BivariateSeries {
            order,
            coeffs: vec![BigRational::zero(); idx(order + 1, 0)],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, BigRational::one())
    }

    pub fn constant(order: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c · x^i y^j`, dropped if beyond the order.
    pub fn monomial(order: usize, i: usize, j: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        if i + j <= order {
            s.coeffs[idx(i, j)] = c;
        }
        s
    }

    pub fn x(order: usize) -> Self {
        Self::monomial(order, 1, 0, BigRational::one())
    }

    pub fn y(order: usize) -> Self {
        Self::monomial(order, 0, 1, BigRational::one())
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut s = Self::zero(order);
        for d in 0..=order {
            for j in 0..=d {
                s.coeffs[idx(d - j, j)] = f(d - j, j);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `[x^i y^j]`, zero beyond the order.
    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        if i + j <= self.order {
            self.coeffs[idx(i, j)].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Are all coefficients of total degree `<= d` zero?
    pub fn is_zero_through(&self, d: usize) -> bool {
        self.coeffs[..idx(d.min(self.order) + 1, 0)].iter().all(Zero::is_zero)
    }

    /// Same series, truncated or zero-padded to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_fn(order, |i, j| self.coeff(i, j))
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "series orders differ");
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Homogeneous component of total degree `d`, indexed by the power of `y`.
    fn homogeneous(&self, d: usize) -> &[BigRational] {
        &self.coeffs[idx(d, 0)..idx(d + 1, 0)]
    }

    /// Adds `a · b` to `out`, where `a`, `b` are homogeneous of degrees `da`, `db`.
    fn mul_homogeneous_into(a: &[BigRational], b: &[BigRational], out: &mut [BigRational]) {
        for (ja, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (jb, cb) in b.iter().enumerate() {
                if !cb.is_zero() {
                    out[ja + jb] += ca * cb;
                }
            }
        }
    }

    /// `exp(f)` for `f` with zero constant term.
    ///
    /// With `E = x∂x + y∂y`, `E e^f = (E f) e^f`; on degree-`d` parts this reads
    /// `d g_d = Σ_{j=1..d} j f_j g_{d-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "exp needs a series with zero constant term".into(),
            ));
        }
        let mut g = Self::one(self.order);
        for d in 1..=self.order {
            let mut acc = vec![BigRational::zero(); d + 1];
            for j in 1..=d {
                let mut part = vec![BigRational::zero(); d + 1];
                Self::mul_homogeneous_into(self.homogeneous(j), g.homogeneous(d - j), &mut part);
                let w = BigRational::from_integer(BigInt::from(j));
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p * &w;
                }
            }
            let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
            for (t, a) in acc.into_iter().enumerate() {
                g.coeffs[idx(d - t, t)] = a * &inv_d;
            }
        }
        Ok(g)
    }

    /// `log(g)` for `g` with constant term 1, using `d f_d = d g_d - Σ_{j=1..d-1} j f_j g_{d-j}`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain(
                "log needs a series with constant term 1".into(),
            ));
        }
        let mut f = Self::zero(self.order);
        for d in 1..=self.order {
            let mut acc = vec![BigRational::zero(); d + 1];
            for j in 1..d {
                let mut part = vec![BigRational::zero(); d + 1];
                Self::mul_homogeneous_into(f.homogeneous(j), self.homogeneous(d - j), &mut part);
                let w = BigRational::from_integer(BigInt::from(j));
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p * &w;
                }
            }
            let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
            for t in 0..=d {
                let gd = &self.coeffs[idx(d - t, t)];
                f.coeffs[idx(d - t, t)] = gd - &acc[t] * &inv_d;
            }
        }
        Ok(f)
    }

    /// `∫_0^x f dt`; the top-degree part is pushed past the order and dropped.
    pub fn integrate_x(&self) -> Self {
        let mut s = Self::zero(self.order);
        for d in 0..self.order {
            for j in 0..=d {
                let i = d - j;
                s.coeffs[idx(i + 1, j)] =
                    &self.coeffs[idx(i, j)] / BigRational::from_integer(BigInt::from(i + 1));
            }
        }
        s
    }

    /// `∂f/∂x`; the result is exact only through total degree `order - 1`.
    pub fn derivative_x(&self) -> Self {
        let mut s = Self::zero(self.order);
        for d in 1..=self.order {
            for j in 0..d {
                let i = d - j;
                s.coeffs[idx(i - 1, j)] =
                    &self.coeffs[idx(i, j)] * BigRational::from_integer(BigInt::from(i));
            }
        }
        s
    }

    /// Plain-text listing of the nonzero coefficients, one `i j c` line each.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in 0..=self.order {
            for j in 0..=d {
                let c = &self.coeffs[idx(d - j, j)];
                if !c.is_zero() {
                    let _ = writeln!(out, "{} {} {}", d - j, j, c);
                }
            }
        }
        out
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;

    fn add(self, other: &BivariateSeries) -> BivariateSeries {
        self.check_order(other);
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;

    fn sub(self, other: &BivariateSeries) -> BivariateSeries {
        self.check_order(other);
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &BivariateSeries {
    type Output = BivariateSeries;

    fn neg(self) -> BivariateSeries {
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;

    fn mul(self, other: &BivariateSeries) -> BivariateSeries {
        self.check_order(other);
        let n = self.order;
        let mut out = BivariateSeries::zero(n);
        for d in 0..=n {
            let mut acc = vec![BigRational::zero(); d + 1];
            for da in 0..=d {
                BivariateSeries::mul_homogeneous_into(
                    self.homogeneous(da),
                    other.homogeneous(d - da),
                    &mut acc,
                );
            }
            for (t, a) in acc.into_iter().enumerate() {
                out.coeffs[idx(d - t, t)] = a;
            }
        }
        out
    }
}

fn one_plus_y(order: usize) -> BivariateSeries {
    &BivariateSeries::one(order) + &BivariateSeries::y(order)
}

/// The right-hand side `(y+1) e^B - B - 1` of the equation for `B`.
fn b_rhs(b: &BivariateSeries) -> BivariateSeries {
    let order = b.order();
    let e = b.exp().expect("B has no constant term");
    &(&(&one_plus_y(order) * &e) - b) - &BivariateSeries::one(order)
}

/// The right-hand side `e^{T+y} - 1` of the equation for `T`.
fn t_rhs(t: &BivariateSeries) -> BivariateSeries {
    let order = t.order();
    let e = (t + &BivariateSeries::y(order)).exp().expect("T + y has no constant term");
    &e - &BivariateSeries::one(order)
}

/// One pass `B ↦ ∫ ((y+1) e^B - B - 1) dx`.
pub fn b_step(b: &BivariateSeries) -> BivariateSeries {
    b_rhs(b).integrate_x()
}

/// The solution of `B = ∫_0^x ((y+1) e^B - B - 1) dt` to total degree `order`.
///
/// Each pass fixes one more degree in `x`, so `order + 1` passes reach the fixed point.
pub fn solve_b(order: usize) -> BivariateSeries {
    let mut b = BivariateSeries::zero(order);
    for _ in 0..=order {
        let next = b_step(&b);
        if next == b {
            break;
        }
        b = next;
    }
    b
}

/// `∂B/∂x - ((y+1) e^B - B - 1)`, meaningful through total degree `order - 1`.
pub fn b_residual(b: &BivariateSeries) -> BivariateSeries {
    &b.derivative_x() - &b_rhs(b)
}

/// `T = log(1 / (e^x + e^y - e^{x+y}))` to total degree `order`.
pub fn closed_t(order: usize) -> BivariateSeries {
    let x = BivariateSeries::x(order);
    let y = BivariateSeries::y(order);
    let ex = x.exp().unwrap();
    let ey = y.exp().unwrap();
    let exy = (&x + &y).exp().unwrap();
    let inner = &(&ex + &ey) - &exy;
    -&inner.log().expect("constant term is 1")
}

/// `T` from iterating `T = ∫_0^x (e^{T+y} - 1) dt`.
pub fn solve_t_iterative(order: usize) -> BivariateSeries {
    let mut t = BivariateSeries::zero(order);
    for _ in 0..=order {
        let next = t_rhs(&t).integrate_x();
        if next == t {
            break;
        }
        t = next;
    }
    t
}

/// `∂T/∂x - (e^{T+y} - 1)`, meaningful through total degree `order - 1`.
pub fn t_residual(t: &BivariateSeries) -> BivariateSeries {
    &t.derivative_x() - &t_rhs(t)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn to_count(c: BigRational, i: usize, j: usize) -> Result<BigUint> {
    if !c.is_integer() || c.is_negative() {
        return Err(Error::NonIntegerCount { i, j });
    }
    Ok(c.to_integer().to_biguint().expect("nonnegative"))
}

fn need_order(s: &BivariateSeries, degree: usize) -> Result<()> {
    if degree > s.order() {
        return Err(Error::Precondition(format!(
            "coefficient of total degree {degree} needs series order at least {degree}, have {}",
            s.order()
        )));
    }
    Ok(())
}

/// `|B_{n,m}| = n! [x^n y^m] B`.
pub fn b_count(b: &BivariateSeries, n: usize, m: usize) -> Result<BigUint> {
    need_order(b, n + m)?;
    to_count(b.coeff(n, m) * BigRational::from_integer(factorial(n)), n, m)
}

/// `|A_{n,m}| = |B_{n+1,m+1}|`.
pub fn a_count(b: &BivariateSeries, n: usize, m: usize) -> Result<BigUint> {
    b_count(b, n + 1, m + 1)
}

/// `|T_{n,k}| = n! k! [x^n y^k] T`.
pub fn t_count(t: &BivariateSeries, n: usize, k: usize) -> Result<BigUint> {
    need_order(t, n + k)?;
    let scale = BigRational::from_integer(factorial(n) * factorial(k));
    to_count(t.coeff(n, k) * scale, n, k)
}

/// `|I_n ∩ P_n| = Σ_{k=0}^{n-1} |T_{k+1, n-k}|`.
pub fn ip_count(t: &BivariateSeries, n: usize) -> Result<BigUint> {
    (0..n).map(|k| t_count(t, k + 1, n - k)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountKind {
    /// `|A_{n,m}|` for `n, m ∈ [0, limit]`.
    A,
    /// `|T_{n,k}|` for `n, k ∈ [1, limit]`.
    T,
    /// `|I_n ∩ P_n|` for `n ∈ [1, limit]`, a single row.
    IP,
}

impl CountKind {
    pub fn name(self) -> &'static str {
        match self {
            CountKind::A => "A",
            CountKind::T => "T",
            CountKind::IP => "IP",
        }
    }

    /// Series order needed for a table up to `limit`.
    pub fn required_order(self, limit: usize) -> usize {
        match self {
            CountKind::A => 2 * limit + 2,
            CountKind::T => 2 * limit,
            CountKind::IP => limit + 1,
        }
    }
}

/// A count matrix with labelled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub kind: CountKind,
    pub row_labels: Vec<usize>,
    pub col_labels: Vec<usize>,
    pub counts: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn get(&self, row: usize, col: usize) -> Option<&BigUint> {
        let r = self.row_labels.iter().position(|&l| l == row)?;
        let c = self.col_labels.iter().position(|&l| l == col)?;
        Some(&self.counts[r][c])
    }

    fn axis_names(&self) -> (&'static str, &'static str) {
        match self.kind {
            CountKind::A => ("n", "m"),
            CountKind::T => ("n", "k"),
            CountKind::IP => ("", "n"),
        }
    }

    /// Header `n\m,0,1,…`, then one line per row label.
    pub fn to_csv(&self) -> String {
        let (r, c) = self.axis_names();
        let mut out = String::new();
        if self.kind == CountKind::IP {
            out.push('n');
            for (l, v) in self.col_labels.iter().zip(&self.counts[0]) {
                let _ = write!(out, "\n{l},{v}");
            }
            out.push('\n');
            return out;
        }
        let _ = write!(out, "{r}\\{c}");
        for l in &self.col_labels {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for (l, row) in self.row_labels.iter().zip(&self.counts) {
            let _ = write!(out, "{l}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Whitespace-aligned table for terminals.
    pub fn to_text(&self) -> String {
        if self.kind == CountKind::IP {
            let vals: Vec<String> = self.counts[0].iter().map(|v| v.to_string()).collect();
            return vals.join(" ") + "\n";
        }
        let width = self
            .counts
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        let (r, c) = self.axis_names();
        let mut out = format!("{:>width$}", format!("{r}\\{c}"));
        for l in &self.col_labels {
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
        for (l, row) in self.row_labels.iter().zip(&self.counts) {
            let _ = write!(out, "{l:>width$}");
            for v in row {
                let _ = write!(out, " {:>width$}", v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

struct Counts<'a>(&'a [BigUint]);

impl Serialize for Counts<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for v in self.0 {
            match v.to_u64() {
                Some(small) => seq.serialize_element(&small)?,
                None => seq.serialize_element(&v.to_string())?,
            }
        }
        seq.end()
    }
}

/// JSON: `{"kind", "rows", "cols", "counts"}`; counts beyond `u64` become strings.
impl Serialize for CountTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let counts: Vec<Counts<'_>> = self.counts.iter().map(|r| Counts(r)).collect();
        let mut st = s.serialize_struct("CountTable", 4)?;
        st.serialize_field("kind", self.kind.name())?;
        st.serialize_field("rows", &self.row_labels)?;
        st.serialize_field("cols", &self.col_labels)?;
        st.serialize_field("counts", &counts)?;
        st.end()
    }
}

/// Count table read off the series, at the smallest order that suffices.
pub fn count_table(kind: CountKind, limit: usize) -> Result<CountTable> {
    count_table_with_order(kind, limit, DEFAULT_MAX_SERIES_ORDER)
}

/// As [`count_table`], refusing to expand beyond `max_order`.
pub fn count_table_with_order(kind: CountKind, limit: usize, max_order: usize) -> Result<CountTable> {
    if limit == 0 && kind != CountKind::A {
        return Err(Error::Precondition("limit must be at least 1".into()));
    }
    let order = kind.required_order(limit);
    guard("series order", order, max_order)?;
    match kind {
        CountKind::A => {
            let b = solve_b(order);
            let labels: Vec<usize> = (0..=limit).collect();
            let counts = labels
                .iter()
                .map(|&n| labels.iter().map(|&m| a_count(&b, n, m)).collect())
                .collect::<Result<_>>()?;
            Ok(CountTable {
                kind,
                row_labels: labels.clone(),
                col_labels: labels,
                counts,
            })
        }
        CountKind::T => {
            let t = closed_t(order);
            let labels: Vec<usize> = (1..=limit).collect();
            let counts = labels
                .iter()
                .map(|&n| labels.iter().map(|&k| t_count(&t, n, k)).collect())
                .collect::<Result<_>>()?;
            Ok(CountTable {
                kind,
                row_labels: labels.clone(),
                col_labels: labels,
                counts,
            })
        }
        CountKind::IP => {
            let t = closed_t(order);
            let labels: Vec<usize> = (1..=limit).collect();
            let row = labels.iter().map(|&n| ip_count(&t, n)).collect::<Result<_>>()?;
            Ok(CountTable {
                kind,
                row_labels: vec![0],
                col_labels: labels,
                counts: vec![row],
            })
        }
    }
}
