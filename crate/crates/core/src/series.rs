//! Truncated multivariate formal power series over the Gaussian rationals.
//!
//! A [`Series`] stores its coefficients sparsely, keyed by [`MultiIndex`], and
//! carries a truncation degree `D`: every stored coefficient has total degree
//! at most `D`, and every coefficient of degree at most `D` equals the
//! corresponding coefficient of the untruncated object. Binary operations
//! return the minimum of their operands' truncation degrees.
//!
//! Series also carry an `exact` flag meaning "the stored terms are the whole
//! series" (a polynomial all of whose terms lie at or below `D`). The flag is
//! propagated conservatively and lets callers certify vanishing statements,
//! which truncated data alone never can. It does not take part in equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("composition expects {expected} argument series, got {found}")]
    ArgumentCount { expected: usize, found: usize },
    #[error("composition argument {0} has a nonzero constant term")]
    NotPointed(usize),
    #[error("series is not a unit: its constant term vanishes")]
    NotAUnit,
    #[error("exponential requires a series with zero constant term")]
    NonzeroConstant,
    #[error("multi-index of degree {degree} exceeds truncation degree {trunc}")]
    BeyondTruncation { degree: u32, trunc: u32 },
    #[error("implicit equation u = rhs(x, u) has linear coefficient {0} in u at the origin; rewrite with (1 - c)^-1 first")]
    LinearTermInUnknown(String),
    #[error("implicit equation u = rhs(x, u) has nonzero value {0} at the origin")]
    NonzeroAtOrigin(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Exponent vector. The derived `Ord` is pure lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// Degree first, ties broken lexicographically.
    pub fn cmp_graded(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `alpha!` = product of the factorials of the entries.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for k in 2..=e {
                acc *= k;
            }
        }
        acc
    }

    /// All indices in `n` variables of total degree `d`, in ascending lex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if n == 1 {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in 0..=d {
                prefix.push(first);
                rec(n - 1, d - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// All indices of total degree at most `d`, in ascending graded order.
    pub fn all_up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| Self::all_of_degree(n, k)).collect()
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Order of a series: `Infinite` means "zero up to the truncation degree".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug)]
pub struct Series {
    arity: usize,
    trunc: u32,
    terms: BTreeMap<MultiIndex, Scalar>,
    exact: bool,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.trunc == other.trunc && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(arity: usize, trunc: u32) -> Self {
        Series {
            arity,
            trunc,
            terms: BTreeMap::new(),
            exact: true,
        }
    }

    pub fn constant(arity: usize, trunc: u32, c: Scalar) -> Self {
        Self::monomial(arity, trunc, MultiIndex::zero(arity), c)
    }

    pub fn one(arity: usize, trunc: u32) -> Self {
        Self::constant(arity, trunc, Scalar::one())
    }

    pub fn variable(arity: usize, trunc: u32, index: usize) -> Self {
        assert!(
            index < arity,
            "variable {index} out of range for arity {arity}"
        );
        Self::monomial(arity, trunc, MultiIndex::unit(arity, index), Scalar::one())
    }

    /// A single exact term `c * x^alpha` (dropped when beyond `trunc`).
    pub fn monomial(arity: usize, trunc: u32, alpha: MultiIndex, c: Scalar) -> Self {
        assert_eq!(alpha.len(), arity, "multi-index length must equal arity");
        let mut s = Self::zero(arity, trunc);
        s.exact = alpha.degree() <= trunc || c.is_zero();
        s.insert(alpha, c);
        s
    }

    /// Truncated data of some (possibly infinite) series. Terms beyond `trunc`
    /// are discarded and repeated indices are summed.
    pub fn from_terms(
        arity: usize,
        trunc: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Self {
        let mut s = Self::zero(arity, trunc);
        s.exact = false;
        for (alpha, c) in terms {
            assert_eq!(alpha.len(), arity, "multi-index length must equal arity");
            s.accumulate(alpha, c);
        }
        s
    }

    /// A polynomial whose listed terms are the complete series.
    pub fn polynomial(
        arity: usize,
        trunc: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Self {
        let mut exact = true;
        let mut s = Self::zero(arity, trunc);
        for (alpha, c) in terms {
            assert_eq!(alpha.len(), arity, "multi-index length must equal arity");
            if alpha.degree() > trunc && !c.is_zero() {
                exact = false;
            }
            s.accumulate(alpha, c);
        }
        s.exact = exact;
        s
    }

    fn insert(&mut self, alpha: MultiIndex, c: Scalar) {
        if alpha.degree() <= self.trunc && !c.is_zero() {
            self.terms.insert(alpha, c);
        }
    }

    fn accumulate(&mut self, alpha: MultiIndex, c: Scalar) {
        if alpha.degree() > self.trunc || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc
    }

    /// True when the stored terms are known to be the complete series.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Mark the stored terms as the complete series. Caller asserts it.
    pub fn assume_exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.arity))
    }

    /// Zero up to the truncation degree.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero as a formal series (requires exactness).
    pub fn is_certainly_zero(&self) -> bool {
        self.terms.is_empty() && self.exact
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Lowest term in graded order, the canonical witness of nonvanishing.
    pub fn leading_term(&self) -> Option<(MultiIndex, Scalar)> {
        self.terms
            .iter()
            .min_by(|a, b| a.0.cmp_graded(b.0))
            .map(|(k, v)| (k.clone(), v.clone()))
    }

    /// Lower the truncation degree (never raises it).
    pub fn truncate(&self, trunc: u32) -> Series {
        let trunc = trunc.min(self.trunc);
        let mut out = Series::zero(self.arity, trunc);
        out.exact = self.exact && self.max_degree().is_none_or(|d| d <= trunc);
        for (k, v) in &self.terms {
            if k.degree() <= trunc {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Claim knowledge up to `trunc` for data only known to a lower degree.
    /// Sound only when the result is subsequently multiplied by something of
    /// order at least `trunc - self.trunc`.
    fn lift_trunc(&self, trunc: u32) -> Series {
        let mut out = self.clone();
        out.trunc = trunc.max(self.trunc);
        out
    }

    fn check_arity(&self, other: &Series) -> Result<()> {
        if self.arity != other.arity {
            return Err(SeriesError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    fn exact_within(&self, trunc: u32) -> bool {
        self.exact && self.max_degree().is_none_or(|d| d <= trunc)
    }

    /// Ring operation with arity checking; the result is truncated at the
    /// smaller of the two truncation degrees.
    pub fn combine(&self, other: &Series, op: ArithOp) -> Result<Series> {
        self.check_arity(other)?;
        let trunc = self.trunc.min(other.trunc);
        match op {
            ArithOp::Add | ArithOp::Sub => {
                let mut out = self.truncate(trunc);
                out.exact = self.exact_within(trunc) && other.exact_within(trunc);
                for (k, v) in &other.terms {
                    let v = if op == ArithOp::Sub {
                        -v.clone()
                    } else {
                        v.clone()
                    };
                    out.accumulate(k.clone(), v);
                }
                Ok(out)
            }
            ArithOp::Mul => Ok(self.mul_truncated(other, trunc)),
        }
    }

    fn mul_truncated(&self, other: &Series, trunc: u32) -> Series {
        let mut out = Series::zero(self.arity, trunc);
        let deg_sum = self.max_degree().unwrap_or(0) + other.max_degree().unwrap_or(0);
        out.exact = self.exact && other.exact && deg_sum <= trunc;
        if self.is_zero() || other.is_zero() {
            out.exact |= self.is_certainly_zero() || other.is_certainly_zero();
            return out;
        }
        let mut rhs: Vec<(&MultiIndex, u32, &Scalar)> = other
            .terms
            .iter()
            .map(|(k, v)| (k, k.degree(), v))
            .collect();
        rhs.sort_by_key(|t| t.1);
        let mut acc: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (ka, va) in &self.terms {
            let da = ka.degree();
            if da > trunc {
                continue;
            }
            for &(kb, db, vb) in &rhs {
                if da + db > trunc {
                    break;
                }
                let key = ka + kb;
                let prod = va * vb;
                match acc.get_mut(&key) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.terms = acc;
        out
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        let mut out = Series::zero(self.arity, self.trunc);
        out.exact = self.exact;
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.arity, self.trunc);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative; the result is truncated at `D - 1`.
    pub fn partial_derivative(&self, var: usize) -> Result<Series> {
        if var >= self.arity {
            return Err(SeriesError::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        let mut out = Series::zero(self.arity, self.trunc.saturating_sub(1));
        out.exact = self.exact;
        for (k, v) in &self.terms {
            let e = k.0[var];
            if e == 0 {
                continue;
            }
            let mut idx = k.clone();
            idx.0[var] -= 1;
            out.insert(idx, v * scalar::from_int(e as i64));
        }
        Ok(out)
    }

    pub fn ord(&self) -> Order {
        self.terms
            .keys()
            .map(MultiIndex::degree)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Order in the variables of `block`, coefficients living in the rest.
    pub fn ord_in_block(&self, block: &[usize]) -> Order {
        self.terms
            .keys()
            .map(|k| block.iter().map(|&i| k.0[i]).sum::<u32>())
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Conjugate every coefficient.
    pub fn conjugate(&self) -> Series {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    /// Coefficient of `x_block^alpha`, as a series in the remaining variables
    /// (kept in their original relative order) truncated at `D - |alpha|`.
    pub fn coefficient_in_block(&self, block: &[usize], alpha: &MultiIndex) -> Result<Series> {
        if let Some(&bad) = block.iter().find(|&&i| i >= self.arity) {
            return Err(SeriesError::VariableOutOfRange {
                index: bad,
                arity: self.arity,
            });
        }
        assert_eq!(
            block.len(),
            alpha.len(),
            "block and multi-index length differ"
        );
        if alpha.degree() > self.trunc {
            return Err(SeriesError::BeyondTruncation {
                degree: alpha.degree(),
                trunc: self.trunc,
            });
        }
        let rest: Vec<usize> = (0..self.arity).filter(|i| !block.contains(i)).collect();
        let mut out = Series::zero(rest.len(), self.trunc - alpha.degree());
        out.exact = self.exact;
        for (k, v) in &self.terms {
            if block.iter().zip(&alpha.0).all(|(&i, &a)| k.0[i] == a) {
                let idx = MultiIndex(rest.iter().map(|&i| k.0[i]).collect());
                out.insert(idx, v.clone());
            }
        }
        Ok(out)
    }

    /// Set the variables in `block` to zero and drop them.
    pub fn restrict_zero(&self, block: &[usize]) -> Result<Series> {
        self.coefficient_in_block(block, &MultiIndex::zero(block.len()))
    }

    /// Coefficients of the powers of one variable: entry `j` is the
    /// coefficient of `x_var^j` (truncated at `D - j`).
    pub fn coefficients_in_var(&self, var: usize) -> Result<Vec<Series>> {
        let top = self.terms.keys().map(|k| k.0[var]).max().unwrap_or(0);
        (0..=top)
            .map(|j| self.coefficient_in_block(&[var], &MultiIndex(vec![j])))
            .collect()
    }

    /// Re-express in `new_arity` variables, sending variable `i` to `positions[i]`.
    pub fn embed(&self, new_arity: usize, positions: &[usize]) -> Series {
        assert_eq!(positions.len(), self.arity, "one position per variable");
        assert!(positions.iter().all(|&p| p < new_arity));
        let mut out = Series::zero(new_arity, self.trunc);
        out.exact = self.exact;
        for (k, v) in &self.terms {
            let mut idx = vec![0u32; new_arity];
            for (i, &p) in positions.iter().enumerate() {
                idx[p] += k.0[i];
            }
            out.insert(MultiIndex(idx), v.clone());
        }
        out
    }

    /// Substitute pointed series for the variables: `self(args[0], ..., args[m-1])`.
    /// Exact up to the minimum truncation degree involved.
    pub fn compose(&self, args: &[Series]) -> Result<Series> {
        if args.len() != self.arity {
            return Err(SeriesError::ArgumentCount {
                expected: self.arity,
                found: args.len(),
            });
        }
        let n = args.first().map_or(0, Series::arity);
        for g in args {
            if g.arity != n {
                return Err(SeriesError::ArityMismatch {
                    left: n,
                    right: g.arity,
                });
            }
        }
        if let Some(i) = args.iter().position(|g| !g.constant_term().is_zero()) {
            return Err(SeriesError::NotPointed(i));
        }
        let trunc = args.iter().map(|g| g.trunc).fold(self.trunc, u32::min);
        let orders: Vec<u32> = args
            .iter()
            .map(|g| g.ord().finite().unwrap_or(trunc + 1))
            .collect();
        let max_degs: Vec<u32> = args.iter().map(|g| g.max_degree().unwrap_or(0)).collect();
        let mut exact = self.exact && args.iter().all(|g| g.exact);
        let mut cache: Vec<Vec<Series>> = args
            .iter()
            .map(|g| vec![Series::one(n, trunc), g.truncate(trunc)])
            .collect();
        let mut out = Series::zero(n, trunc);
        for (alpha, c) in &self.terms {
            let low: u32 = alpha.0.iter().zip(&orders).map(|(a, o)| a * o).sum();
            let high: u32 = alpha.0.iter().zip(&max_degs).map(|(a, d)| a * d).sum();
            if high > trunc {
                exact = false;
            }
            if low > trunc {
                continue;
            }
            let mut prod: Option<Series> = None;
            for (i, &e) in alpha.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                let p = &powers[e as usize];
                prod = Some(match prod {
                    None => p.clone(),
                    Some(acc) => &acc * p,
                });
            }
            let term = match prod {
                None => Series::one(n, trunc),
                Some(p) => p,
            };
            for (k, v) in &term.terms {
                out.accumulate(k.clone(), v * c);
            }
        }
        out.exact = exact;
        Ok(out)
    }

    /// Inverse of a unit, by the geometric series in `1 - f/f(0)`.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        let inv_c0 = scalar::inverse(&c0).ok_or(SeriesError::NotAUnit)?;
        let one = Series::one(self.arity, self.trunc);
        let h = &one - &self.scale(&inv_c0);
        let mut acc = one.clone();
        for _ in 0..self.trunc {
            acc = &one + &(&h * &acc);
        }
        let mut out = acc.scale(&inv_c0);
        out.exact = self.exact && h.is_zero();
        Ok(out)
    }

    /// `sum_{j <= D} f^j / j!`.
    pub fn exp_series(&self) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let mut acc = Series::one(self.arity, self.trunc);
        let mut term = acc.clone();
        for j in 1..=self.trunc {
            if term.is_zero() {
                break;
            }
            term = (&term * self).scale(&scalar::from_rational(scalar::rational(1, j as i64)));
            acc = &acc + &term;
        }
        acc.exact = self.exact && self.is_zero();
        Ok(acc)
    }

    /// Evaluate the stored (truncated) terms at a point.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.arity, "point dimension must equal arity");
        let mut total = Scalar::zero();
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for (x, &e) in point.iter().zip(&k.0) {
                if e > 0 {
                    t *= scalar::pow(x, e);
                }
            }
            total += t;
        }
        total
    }

    /// Render with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.cmp_graded(b));
        let mut out = String::new();
        for (pos, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mut mono = Vec::new();
            for (i, &e) in k.0.iter().enumerate() {
                let name = names
                    .get(i)
                    .map_or_else(|| format!("x{i}"), |s| s.to_string());
                match e {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let coef = scalar::format(c);
            let needs_parens = coef.contains('+') || coef[1..].contains('-');
            let coef = if needs_parens {
                format!("({coef})")
            } else {
                coef
            };
            let body = if mono.is_empty() {
                coef
            } else if coef == "1" {
                mono.join("*")
            } else if coef == "-1" {
                format!("-{}", mono.join("*"))
            } else {
                format!("{coef}*{}", mono.join("*"))
            };
            if pos > 0 {
                if let Some(rest) = body.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.display_with(&[]), self.trunc + 1)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.combine(rhs, ArithOp::Add)
            .expect("series arity mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.combine(rhs, ArithOp::Sub)
            .expect("series arity mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.combine(rhs, ArithOp::Mul)
            .expect("series arity mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Scalar::one())
    }
}

/// An ordered tuple of series sharing arity and truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMap {
    components: Vec<Series>,
}

impl FormalMap {
    pub fn new(components: Vec<Series>) -> Result<Self> {
        if let Some(first) = components.first() {
            for c in &components[1..] {
                first.check_arity(c)?;
            }
        }
        Ok(FormalMap { components })
    }

    pub fn identity(n: usize, trunc: u32) -> Self {
        FormalMap {
            components: (0..n).map(|i| Series::variable(n, trunc, i)).collect(),
        }
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn is_pointed(&self) -> bool {
        self.components.iter().all(|c| c.constant_term().is_zero())
    }

    /// `outer ∘ self`, componentwise.
    pub fn pull_back(&self, outer: &Series) -> Result<Series> {
        outer.compose(&self.components)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FormalMap) -> Result<FormalMap> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalMap { components })
    }
}

/// Solve `u = rhs(x, u)` for a series `u*(x)`, where the unknown `u` is the
/// last variable of `rhs`. Requires `rhs(0,0) = 0` and `∂rhs/∂u(0,0) = 0`,
/// so that the degree-`d` part of `u*` is fixed by lower-degree parts and the
/// fixed-point iteration `u <- rhs(x, u)` from `u = 0` stabilizes degree by
/// degree.
pub fn solve_implicit(rhs: &Series) -> Result<Series> {
    assert!(
        rhs.arity >= 2,
        "implicit equation needs at least one parameter"
    );
    let nx = rhs.arity - 1;
    let trunc = rhs.trunc;
    let coeffs = rhs.coefficients_in_var(nx)?;
    let c00 = coeffs[0].constant_term();
    if !c00.is_zero() {
        return Err(SeriesError::NonzeroAtOrigin(scalar::format(&c00)));
    }
    if let Some(lin) = coeffs.get(1) {
        let c = lin.constant_term();
        if !c.is_zero() {
            return Err(SeriesError::LinearTermInUnknown(scalar::format(&c)));
        }
    }
    // r_j is known to D - j, and only ever meets u^j with ord(u^j) >= j.
    let lifted: Vec<Series> = coeffs.iter().map(|c| c.lift_trunc(trunc)).collect();
    let mut u = Series::zero(nx, trunc);
    for _ in 0..=trunc + 1 {
        let mut acc = lifted[lifted.len() - 1].clone();
        for r in lifted[..lifted.len() - 1].iter().rev() {
            acc = &(&acc * &u) + r;
        }
        if acc == u {
            break;
        }
        u = acc;
    }
    u.exact = false;
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{from_int, gaussian, imag_unit, rational};

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    // variables z, chi, tau
    fn var(i: usize, d: u32) -> Series {
        Series::variable(3, d, i)
    }

    #[test]
    fn difference_of_squares() {
        let z = Series::variable(1, 4, 0);
        let one = Series::one(1, 4);
        let p = &(&one + &z) * &(&one - &z);
        let expected = &one - &(&z * &z);
        assert_eq!(p, expected);
        assert!(p.is_exact());
    }

    #[test]
    fn add_zero_is_identity() {
        let f = &var(0, 5) + &var(2, 5).scale(&gaussian(0, 3));
        assert_eq!(&f + &Series::zero(3, 5), f);
    }

    #[test]
    fn heisenberg_factor_product() {
        // (tau + 2i z chi)(tau - 2i z chi) = tau^2 + 4 z^2 chi^2
        let zc = &var(0, 4) * &var(1, 4);
        let a = &var(2, 4) + &zc.scale(&gaussian(0, 2));
        let b = &var(2, 4) - &zc.scale(&gaussian(0, 2));
        let expected = Series::polynomial(
            3,
            4,
            [
                (idx(&[0, 0, 2]), from_int(1)),
                (idx(&[2, 2, 0]), from_int(4)),
            ],
        );
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = Series::variable(1, 3, 0);
        let b = Series::variable(2, 3, 0);
        assert_eq!(
            a.combine(&b, ArithOp::Add),
            Err(SeriesError::ArityMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn compose_square_of_sum() {
        let u = Series::variable(1, 6, 0);
        let f = &u * &u;
        let z = Series::variable(2, 6, 0);
        let w = Series::variable(2, 6, 1);
        let g = &z + &w;
        let got = f.compose(&[g]).unwrap();
        let expected = &(&(&z * &z) + &(&z * &w).scale(&from_int(2))) + &(&w * &w);
        assert_eq!(got, expected);
        assert!(got.is_exact());
    }

    #[test]
    fn compose_identity_returns_argument() {
        let u = Series::variable(1, 6, 0);
        let g = &(&var(0, 6) * &var(2, 6)) + &var(1, 6).pow(3);
        assert_eq!(u.compose(std::slice::from_ref(&g)).unwrap(), g);
    }

    #[test]
    fn compose_rejects_unpointed() {
        let u = Series::variable(1, 6, 0);
        let g = Series::one(2, 6);
        assert_eq!(u.compose(&[g]), Err(SeriesError::NotPointed(0)));
    }

    #[test]
    fn compose_geometric_series() {
        // 1/(1-u) at u = 2i z chi tau, D = 9: sum_j (2i z chi tau)^j for 3j <= 9
        let d = 9;
        let u = Series::variable(1, d, 0);
        let geo = (&Series::one(1, d) - &u).invert_unit().unwrap();
        let x = (&(&var(0, d) * &var(1, d)) * &var(2, d)).scale(&gaussian(0, 2));
        let got = geo.compose(&[x]).unwrap();
        let mut expected = Vec::new();
        let mut c = from_int(1);
        for j in 0..=3u32 {
            expected.push((idx(&[j, j, j]), c.clone()));
            c *= gaussian(0, 2);
        }
        assert_eq!(got, Series::from_terms(3, d, expected));
    }

    #[test]
    fn derivatives() {
        let d = 6;
        let tau = var(2, d);
        let zc = &var(0, d) * &var(1, d);
        let f = &tau + &(&(&tau * &tau) * &zc);
        let df = f.partial_derivative(2).unwrap();
        let expected = &Series::one(3, d - 1) + &(&tau * &zc).scale(&from_int(2)).truncate(d - 1);
        assert_eq!(df, expected);
        assert_eq!(df.trunc_degree(), d - 1);
        assert!(Series::constant(3, d, from_int(7))
            .partial_derivative(0)
            .unwrap()
            .is_zero());
        let q = &tau + &zc.scale(&gaussian(0, 2));
        assert_eq!(
            q.partial_derivative(1).unwrap(),
            var(0, d - 1).scale(&gaussian(0, 2))
        );
    }

    #[test]
    fn orders() {
        assert_eq!(Series::zero(2, 5).ord(), Order::Infinite);
        // z1^2 chi + tau^3 in (z1, chi, tau)
        let f = &(&(&var(0, 6) * &var(0, 6)) * &var(1, 6)) + &var(2, 6).pow(3);
        assert_eq!(f.ord(), Order::Finite(3));
        let g = &(&var(0, 6) * &var(0, 6)) + &var(2, 6).pow(3);
        assert_eq!(g.ord(), Order::Finite(2));
        // ord_z(z chi + z^2 chi^3) = 1
        let h = &(&var(0, 6) * &var(1, 6)) + &(&var(0, 6).pow(2) * &var(1, 6).pow(3));
        assert_eq!(h.ord_in_block(&[0]), Order::Finite(1));
    }

    #[test]
    fn conjugation() {
        let f = (&var(0, 4) * &var(1, 4)).scale(&imag_unit());
        assert_eq!(
            f.conjugate(),
            (&var(0, 4) * &var(1, 4)).scale(&-imag_unit())
        );
        assert_eq!(f.conjugate().conjugate(), f);
    }

    #[test]
    fn conjugate_of_exponential_model() {
        // conj(tau * exp(i z chi / k)) = tau * exp(-i z chi / k), checked termwise
        let d = 9;
        let k = 3;
        let zc = &var(0, d) * &var(1, d);
        let ik = crate::scalar::Scalar::new(rational(0, 1), rational(1, k));
        let q = &var(2, d) * &zc.scale(&ik).exp_series().unwrap();
        let qbar = &var(2, d) * &zc.scale(&-ik.clone()).exp_series().unwrap();
        assert_eq!(q.conjugate(), qbar);
        // termwise oracle: coefficient of z^j chi^j tau is (i/k)^j / j!
        for j in 0..=4u32 {
            let mut c = from_int(1);
            for t in 1..=j {
                c = c * ik.clone() * from_rational_int(1, t as i64);
            }
            assert_eq!(q.coeff(&idx(&[j, j, 1])), c);
            assert_eq!(qbar.coeff(&idx(&[j, j, 1])), c.conj());
        }
    }

    fn from_rational_int(p: i64, q: i64) -> Scalar {
        crate::scalar::from_rational(rational(p, q))
    }

    #[test]
    fn block_coefficients() {
        let d = 8;
        let q = &var(2, d) + &(&var(0, d) * &var(1, d)).scale(&gaussian(0, 2));
        // coefficient of z^1 in tau + 2i z chi, as series in (chi, tau)
        let c = q.coefficient_in_block(&[0], &idx(&[1])).unwrap();
        assert_eq!(c, Series::variable(2, d - 1, 0).scale(&gaussian(0, 2)));
        let c0 = q.coefficient_in_block(&[0], &idx(&[0])).unwrap();
        assert_eq!(c0, Series::variable(2, d, 1));
        // e^{i z chi / k} - 1, alpha = 2 -> (i chi / k)^2 / 2
        let k = 2;
        let zc = &var(0, d) * &var(1, d);
        let ik = Scalar::new(rational(0, 1), rational(1, k));
        let e = &zc.scale(&ik).exp_series().unwrap() - &Series::one(3, d);
        let c2 = e.coefficient_in_block(&[0], &idx(&[2])).unwrap();
        let chi = Series::variable(2, d - 2, 0);
        let expected = (&chi * &chi).scale(&(ik.clone() * ik * from_rational_int(1, 2)));
        assert_eq!(c2, expected);
        assert!(matches!(
            q.coefficient_in_block(&[0], &idx(&[9])),
            Err(SeriesError::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn unit_inversion() {
        let d = 6;
        let z = Series::variable(1, d, 0);
        let inv = (&Series::one(1, d) - &z).invert_unit().unwrap();
        let expected = Series::from_terms(1, d, (0..=d).map(|j| (idx(&[j]), from_int(1))));
        assert_eq!(inv, expected);
        let half = Series::constant(1, d, from_int(2)).invert_unit().unwrap();
        assert_eq!(half, Series::constant(1, d, from_rational_int(1, 2)));
        assert!(half.is_exact());
        assert_eq!(z.invert_unit(), Err(SeriesError::NotAUnit));
        // Neumann oracle for 1 - 2i z chi tau at D = 6
        let x = (&(&var(0, d) * &var(1, d)) * &var(2, d)).scale(&gaussian(0, 2));
        let inv = (&Series::one(3, d) - &x).invert_unit().unwrap();
        let neumann = &(&Series::one(3, d) + &x) + &(&x * &x);
        assert_eq!(inv, neumann);
    }

    #[test]
    fn exponential() {
        let d = 7;
        assert_eq!(Series::zero(2, d).exp_series().unwrap(), Series::one(2, d));
        let zc = (&Series::variable(2, d, 0) * &Series::variable(2, d, 1)).scale(&imag_unit());
        let e = zc.exp_series().unwrap();
        assert_eq!(e.coeff(&idx(&[2, 2])), from_rational_int(-1, 2));
        let inv = zc.scale(&-Scalar::one()).exp_series().unwrap();
        assert_eq!(&e * &inv, Series::one(2, d));
        assert_eq!(
            Series::one(2, d).exp_series(),
            Err(SeriesError::NonzeroConstant)
        );
    }

    #[test]
    fn implicit_catalan() {
        // u = x + u^2; oracle: fixed-point iteration on plain integer vectors
        let d = 8;
        let mut oracle = vec![0i64; d as usize + 1];
        for _ in 0..=d {
            let mut next = vec![0i64; d as usize + 1];
            next[1] = 1;
            for i in 0..=d as usize {
                for j in 0..=d as usize - i {
                    next[i + j] += oracle[i] * oracle[j];
                }
            }
            oracle = next;
        }
        let x = Series::variable(2, d, 0);
        let u = Series::variable(2, d, 1);
        let rhs = &x + &(&u * &u);
        let sol = solve_implicit(&rhs).unwrap();
        for (k, &c) in oracle.iter().enumerate() {
            assert_eq!(sol.coeff(&idx(&[k as u32])), from_int(c));
        }
        assert_eq!(oracle[..6], [0, 1, 1, 2, 5, 14]);
    }

    #[test]
    fn implicit_trivial_and_errors() {
        let x = Series::variable(2, 5, 0);
        let u = Series::variable(2, 5, 1);
        assert_eq!(solve_implicit(&x).unwrap(), Series::variable(1, 5, 0));
        assert!(matches!(
            solve_implicit(&(&x + &u.scale(&from_int(2)))),
            Err(SeriesError::LinearTermInUnknown(_))
        ));
        assert!(matches!(
            solve_implicit(&(&x + &Series::one(2, 5))),
            Err(SeriesError::NonzeroAtOrigin(_))
        ));
    }

    #[test]
    fn multi_index_orders() {
        let a = idx(&[0, 2]);
        let b = idx(&[1, 0]);
        assert_eq!(a.cmp_lex(&b), Ordering::Less);
        assert_eq!(a.cmp_graded(&b), Ordering::Greater);
        assert_eq!(
            MultiIndex::all_of_degree(2, 2),
            vec![idx(&[0, 2]), idx(&[1, 1]), idx(&[2, 0])]
        );
        assert_eq!(MultiIndex::all_up_to_degree(2, 1).len(), 3);
        assert_eq!(idx(&[2, 3]).factorial(), BigInt::from(12));
    }

    #[test]
    fn display() {
        let q = &var(2, 4) + &(&var(0, 4) * &var(1, 4)).scale(&gaussian(0, 2));
        assert_eq!(q.display_with(&["z", "chi", "tau"]), "tau + 2*i*z*chi");
    }
}
