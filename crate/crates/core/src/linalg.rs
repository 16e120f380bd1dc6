//! Linear algebra over `C[[x]]` and its fraction field.
//!
//! Determinants are computed division-free (cofactor expansion up to 4×4,
//! subset dynamic programming above), so no series ever has to be divided.
//! Generic rank is certified from below by a nonzero coefficient of a minor;
//! the upper bound is certified only for exact (polynomial) matrices.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thiserror::Error;

use crate::scalar::{self, Scalar};
use crate::series::{MultiIndex, Order, Series, SeriesError};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {found}")]
    Shape { expected: usize, found: usize },
    #[error("division by a fraction that vanishes up to the truncation degree")]
    DivisionUncertifiable,
    #[error("diagonal entry {row} vanishes up to the truncation degree")]
    NotSolvableAtTruncation { row: usize },
    #[error("entry ({row},{col}) above the diagonal is nonzero")]
    NotLowerTriangular { row: usize, col: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Element of `Frac C[[x]]`, kept as `num * prod f^(-e)` over a list of
/// distinct factor series `f` with nonzero integer exponents `e`. Positive
/// exponents are denominators. Keeping factors separate lets repeated
/// division by the same pivot accumulate as a power instead of a product
/// of ever-growing denominators.
#[derive(Debug, Clone)]
pub struct FracSeries {
    num: Series,
    factors: Vec<(Series, i32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FracSeries {
    pub fn from_series(num: Series) -> Self {
        FracSeries {
            num,
            factors: Vec::new(),
        }
    }

    /// `num / den`; fails when `den` vanishes up to its truncation degree.
    pub fn new(num: Series, den: Series) -> Result<Self> {
        FracSeries::from_series(num).div(&FracSeries::from_series(den))
    }

    pub fn zero(arity: usize, trunc: u32) -> Self {
        Self::from_series(Series::zero(arity, trunc))
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn trunc_degree(&self) -> u32 {
        self.factors
            .iter()
            .map(|(f, _)| f.trunc_degree())
            .fold(self.num.trunc_degree(), u32::min)
    }

    pub fn numerator(&self) -> Series {
        let mut out = self.num.clone();
        for (f, e) in &self.factors {
            if *e < 0 {
                out = &out * &f.pow(e.unsigned_abs());
            }
        }
        out
    }

    pub fn denominator(&self) -> Series {
        let mut out = Series::one(self.arity(), self.trunc_degree());
        for (f, e) in &self.factors {
            if *e > 0 {
                out = &out * &f.pow(*e as u32);
            }
        }
        out
    }

    /// Number of trustworthy leading coefficients of the quotient:
    /// truncation degree minus the order of the denominator.
    pub fn certified_degree(&self) -> i64 {
        let den_ord: u32 = self
            .factors
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(f, e)| f.ord().finite().unwrap_or(f.trunc_degree() + 1) * (*e as u32))
            .sum();
        self.trunc_degree() as i64 - den_ord as i64
    }

    /// Zero up to the truncation degree.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn push_factor(factors: &mut Vec<(Series, i32)>, f: &Series, e: i32) {
        if let Some(slot) = factors.iter_mut().find(|(g, _)| g == f) {
            slot.1 += e;
        } else {
            factors.push((f.clone(), e));
        }
        factors.retain(|(_, e)| *e != 0);
    }

    /// Fold constant factors into the numerator.
    fn normalized(mut self) -> Self {
        let mut kept = Vec::with_capacity(self.factors.len());
        for (f, e) in self.factors {
            let is_const = f.num_terms() == 1 && f.ord() == Order::Finite(0);
            if is_const {
                let c = f.constant_term();
                let c = if e > 0 {
                    scalar::inverse(&c).expect("nonzero factor")
                } else {
                    c
                };
                self.num = self.num.scale(&scalar::pow(&c, e.unsigned_abs()));
            } else {
                kept.push((f, e));
            }
        }
        self.factors = kept;
        self
    }

    pub fn neg(&self) -> Self {
        FracSeries {
            num: -&self.num,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            Self::push_factor(&mut factors, f, *e);
        }
        // a numerator equal to a denominator factor cancels against it
        let mut num = self.num.clone();
        if factors.iter().any(|(g, e)| *e > 0 && *g == other.num) {
            Self::push_factor(&mut factors, &other.num, -1);
        } else {
            num = &num * &other.num;
        }
        FracSeries { num, factors }.normalized()
    }

    pub fn mul_series(&self, s: &Series) -> Self {
        self.mul(&FracSeries::from_series(s.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(LinalgError::DivisionUncertifiable);
        }
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            Self::push_factor(&mut factors, f, -*e);
        }
        Self::push_factor(&mut factors, &other.num, 1);
        Ok(FracSeries {
            num: self.num.clone(),
            factors,
        }
        .normalized())
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        // common denominator: f^max(e_a, e_b, 0)
        let mut common: Vec<(Series, i32)> = Vec::new();
        for (f, e) in self.factors.iter().chain(&other.factors) {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => common.push((f.clone(), (*e).max(0))),
            }
        }
        let lift = |x: &FracSeries| {
            let mut n = x.num.clone();
            for (f, l) in &common {
                let own = x
                    .factors
                    .iter()
                    .find(|(g, _)| g == f)
                    .map_or(0, |(_, e)| *e);
                let k = (l - own) as u32;
                if k > 0 {
                    n = &n * &f.pow(k);
                }
            }
            n
        };
        let a = lift(self);
        let b = lift(other);
        let num = if negate { &a - &b } else { &a + &b };
        common.retain(|(_, e)| *e != 0);
        FracSeries {
            num,
            factors: common,
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_signed(other, true)
    }

    /// `a/b = c/d` iff `a d - c b` vanishes up to the common truncation degree.
    pub fn eq_certified(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// The field operations of `Frac C[[x]]` as a single entry point.
pub fn frac_arith(a: &FracSeries, b: &FracSeries, op: FracOp) -> Result<FracSeries> {
    Ok(match op {
        FracOp::Add => a.add(b),
        FracOp::Sub => a.sub(b),
        FracOp::Mul => a.mul(b),
        FracOp::Div => a.div(b)?,
    })
}

/// Rectangular grid of series with a common arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Series>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(first) = entries.first() {
            for e in &entries[1..] {
                if e.arity() != first.arity() {
                    return Err(SeriesError::ArityMismatch {
                        left: first.arity(),
                        right: e.arity(),
                    }
                    .into());
                }
            }
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Series>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::Shape {
                expected: c,
                found: bad.len(),
            });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Series::is_exact)
    }

    pub fn trunc_degree(&self) -> u32 {
        self.entries
            .iter()
            .map(Series::trunc_degree)
            .min()
            .unwrap_or(0)
    }

    fn arity(&self) -> usize {
        self.entries.first().map_or(0, Series::arity)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SeriesMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        SeriesMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Evaluate the stored terms of every entry at a point.
    pub fn evaluate(&self, point: &[Scalar]) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).evaluate(point))
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant, truncated at the matrix's truncation degree.
pub fn determinant(m: &SeriesMatrix) -> Result<Series> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows == 0 {
        return Ok(Series::one(m.arity(), m.trunc_degree()));
    }
    if m.rows <= 4 {
        Ok(cofactor_det(m, &(0..m.cols).collect::<Vec<_>>(), 0))
    } else {
        Ok(subset_det(m))
    }
}

fn cofactor_det(m: &SeriesMatrix, cols: &[usize], row: usize) -> Series {
    if cols.len() == 1 {
        return m.get(row, cols[0]).clone();
    }
    let mut acc: Option<Series> = None;
    for (k, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_certainly_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &cofactor_det(m, &rest, row + 1);
        acc = Some(match acc {
            None if k % 2 == 0 => term,
            None => -&term,
            Some(a) if k % 2 == 0 => &a + &term,
            Some(a) => &a - &term,
        });
    }
    acc.unwrap_or_else(|| Series::zero(m.arity(), m.trunc_degree()))
}

/// Division-free expansion: partial minors of the first `i` rows indexed by
/// the set of columns they use.
fn subset_det(m: &SeriesMatrix) -> Series {
    let n = m.rows;
    let mut layer: HashMap<u64, Series> = HashMap::new();
    layer.insert(0, Series::one(m.arity(), m.trunc_degree()));
    for i in 0..n {
        let mut next: HashMap<u64, Series> = HashMap::new();
        for (&mask, partial) in &layer {
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let entry = m.get(i, j);
                if entry.is_certainly_zero() {
                    continue;
                }
                let inversions = (mask >> (j + 1)).count_ones();
                let mut term = partial * entry;
                if inversions % 2 == 1 {
                    term = -&term;
                }
                let key = mask | (1 << j);
                let slot = next.entry(key);
                match slot {
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let sum = o.get() + &term;
                        *o.get_mut() = sum;
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(term);
                    }
                }
            }
        }
        layer = next;
    }
    layer
        .remove(&((1u64 << n) - 1))
        .unwrap_or_else(|| Series::zero(m.arity(), m.trunc_degree()))
}

/// Rank of a scalar matrix by exact elimination, with pivot rows and columns.
pub fn scalar_rank(matrix: &[Vec<Scalar>]) -> (usize, Vec<usize>, Vec<usize>) {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut row_of: Vec<usize> = (0..rows).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        row_of.swap(r, p);
        let inv = scalar::inverse(&a[r][c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (x, p) in bottom[0][c..].iter_mut().zip(&top[r][c..]) {
                *x -= &factor * p;
            }
        }
        pivot_rows.push(row_of[r]);
        pivot_cols.push(c);
        r += 1;
    }
    (r, pivot_rows, pivot_cols)
}

/// Exact determinant of a square scalar matrix.
pub fn scalar_determinant(matrix: &[Vec<Scalar>]) -> Scalar {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = scalar::inverse(&a[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = &a[i][c] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (x, p) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// A minor proven nonzero by one of its coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub index: MultiIndex,
    pub value: Scalar,
}

impl MinorWitness {
    pub fn to_witness(&self) -> Witness {
        Witness::Minor {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            index: self.index.exponents().to_vec(),
            value: scalar::format(&self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericRank {
    /// Largest size of a minor nonzero up to truncation.
    pub rank: usize,
    pub witness: Option<MinorWitness>,
    /// All minors one size larger are certainly zero (or none exist).
    pub upper_certified: bool,
    /// Rank observed at random rational points (never a certificate).
    pub evaluation_rank: usize,
    pub seed: u64,
    pub degree_used: u32,
}

impl GenericRank {
    /// Verdict for "the generic rank equals `self.rank`".
    pub fn verdict(&self) -> Verdict {
        let w = self
            .witness
            .as_ref()
            .map_or(Witness::None, MinorWitness::to_witness);
        if self.upper_certified {
            Verdict::certified_true(w, self.degree_used)
        } else {
            Verdict::unknown(w, self.degree_used)
        }
    }

    /// Verdict for "the generic rank is at least `r`": certified true by a
    /// witness, certified false only with a certified upper bound.
    pub fn at_least(&self, r: usize) -> Verdict {
        let w = self
            .witness
            .as_ref()
            .map_or(Witness::None, MinorWitness::to_witness);
        if self.rank >= r {
            Verdict::certified_true(w, self.degree_used)
        } else if self.upper_certified {
            Verdict::certified_false(
                Witness::note(format!(
                    "all minors of size {} vanish identically",
                    self.rank + 1
                )),
                self.degree_used,
            )
        } else {
            Verdict::unknown(w, self.degree_used)
        }
    }
}

const MINOR_ENUMERATION_CAP: usize = 20_000;
const EVALUATION_POINTS: usize = 3;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Random point with small-denominator rational coordinates.
pub fn random_point(rng: &mut ChaCha8Rng, arity: usize) -> Vec<Scalar> {
    (0..arity)
        .map(|_| {
            let mut p: i64 = rng.gen_range(-7..=7);
            if p == 0 {
                p = 1;
            }
            let q: i64 = rng.gen_range(1..=5);
            scalar::from_rational(scalar::rational(p, q))
        })
        .collect()
}

fn minor_witness(m: &SeriesMatrix, rows: &[usize], cols: &[usize]) -> Option<(MinorWitness, bool)> {
    let det = determinant(&m.submatrix(rows, cols)).expect("square by construction");
    det.leading_term().map(|(index, value)| {
        (
            MinorWitness {
                rows: rows.to_vec(),
                cols: cols.to_vec(),
                index,
                value,
            },
            true,
        )
    })
}

/// Outcome of checking all minors of one size.
enum MinorScan {
    Found(MinorWitness),
    AllZero { certain: bool },
    TooMany,
}

fn scan_minors(m: &SeriesMatrix, size: usize) -> MinorScan {
    if binomial(m.rows, size).saturating_mul(binomial(m.cols, size)) > MINOR_ENUMERATION_CAP {
        return MinorScan::TooMany;
    }
    let mut certain = true;
    for rows in combinations(m.rows, size) {
        for cols in combinations(m.cols, size) {
            let det = determinant(&m.submatrix(&rows, &cols)).expect("square by construction");
            if let Some((index, value)) = det.leading_term() {
                return MinorScan::Found(MinorWitness {
                    rows,
                    cols,
                    index,
                    value,
                });
            }
            certain &= det.is_exact();
        }
    }
    MinorScan::AllZero { certain }
}

/// Generic rank: largest size of a minor that is nonzero up to truncation.
///
/// A candidate comes from exact elimination at seeded random rational
/// points; it is then confirmed symbolically and pushed upward while a
/// larger nonzero minor exists.
pub fn generic_rank(m: &SeriesMatrix, seed: u64) -> GenericRank {
    let degree_used = m.trunc_degree();
    let full = m.rows.min(m.cols);
    let mut result = GenericRank {
        rank: 0,
        witness: None,
        upper_certified: full == 0,
        evaluation_rank: 0,
        seed,
        degree_used,
    };
    if full == 0 {
        return result;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: (usize, Vec<usize>, Vec<usize>) = (0, vec![], vec![]);
    for _ in 0..EVALUATION_POINTS {
        let point = random_point(&mut rng, m.arity());
        let cand = scalar_rank(&m.evaluate(&point));
        if cand.0 > best.0 {
            best = cand;
        }
    }
    result.evaluation_rank = best.0;

    let mut rank = 0;
    if best.0 > 0 {
        let mut rows = best.1.clone();
        rows.sort_unstable();
        let mut cols = best.2.clone();
        cols.sort_unstable();
        if let Some((w, _)) = minor_witness(m, &rows, &cols) {
            rank = best.0;
            result.witness = Some(w);
        } else {
            // the evaluated candidate vanishes up to truncation; search below it
            for size in (1..best.0).rev() {
                if let MinorScan::Found(w) = scan_minors(m, size) {
                    rank = size;
                    result.witness = Some(w);
                    break;
                }
            }
        }
    }
    loop {
        if rank == full {
            result.upper_certified = true;
            break;
        }
        match scan_minors(m, rank + 1) {
            MinorScan::Found(w) => {
                rank += 1;
                result.witness = Some(w);
            }
            MinorScan::AllZero { certain } => {
                result.upper_certified = certain;
                break;
            }
            MinorScan::TooMany => {
                result.upper_certified = false;
                break;
            }
        }
    }
    result.rank = rank;
    result
}

/// Forward substitution for a lower-triangular system over `Frac C[[x]]`.
/// `coeffs[j][i]` is the coefficient of unknown `i` in equation `j`.
pub fn solve_triangular(coeffs: &[Vec<Series>], rhs: &[FracSeries]) -> Result<Vec<FracSeries>> {
    let n = coeffs.len();
    if rhs.len() != n {
        return Err(LinalgError::Shape {
            expected: n,
            found: rhs.len(),
        });
    }
    for (j, row) in coeffs.iter().enumerate() {
        if row.len() != n {
            return Err(LinalgError::Shape {
                expected: n,
                found: row.len(),
            });
        }
        if let Some(i) = (j + 1..n).find(|&i| !row[i].is_zero()) {
            return Err(LinalgError::NotLowerTriangular { row: j, col: i });
        }
    }
    let mut sol: Vec<FracSeries> = Vec::with_capacity(n);
    for j in 0..n {
        if coeffs[j][j].is_zero() {
            return Err(LinalgError::NotSolvableAtTruncation { row: j });
        }
        let mut acc = rhs[j].clone();
        for (i, x) in sol.iter().enumerate() {
            if coeffs[j][i].is_zero() {
                continue;
            }
            acc = acc.sub(&x.mul_series(&coeffs[j][i]));
        }
        sol.push(acc.div(&FracSeries::from_series(coeffs[j][j].clone()))?);
    }
    Ok(sol)
}

/// Clear denominators of a vector of fractions: a series vector spanning the
/// same line over the fraction field.
fn clear_denominators(v: &[FracSeries]) -> Vec<Series> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut common = FracSeries::from_series(Series::one(v[0].arity(), v[0].trunc_degree()));
    for x in v {
        for (f, e) in &x.factors {
            if *e > 0 {
                let own = common
                    .factors
                    .iter()
                    .find(|(g, _)| g == f)
                    .map_or(0, |(_, k)| *k);
                if own < *e {
                    FracSeries::push_factor(&mut common.factors, f, e - own);
                }
            }
        }
    }
    v.iter()
        .map(|x| {
            let scaled = x.mul(&FracSeries {
                num: Series::one(x.arity(), x.trunc_degree()),
                factors: common
                    .factors
                    .iter()
                    .map(|(f, e)| (f.clone(), -e))
                    .collect(),
            });
            scaled.numerator()
        })
        .collect()
}

/// Is `v` in the `Frac C[[x]]`-span of `gens`? Decided by comparing generic
/// ranks with and without `v` after clearing denominators.
pub fn span_membership(v: &[FracSeries], gens: &[Vec<FracSeries>], seed: u64) -> Result<Verdict> {
    let dim = v.len();
    if let Some(bad) = gens.iter().find(|g| g.len() != dim) {
        return Err(LinalgError::Shape {
            expected: dim,
            found: bad.len(),
        });
    }
    let gen_rows: Vec<Vec<Series>> = gens.iter().map(|g| clear_denominators(g)).collect();
    let mut all_rows = gen_rows.clone();
    all_rows.push(clear_denominators(v));
    let with_v = generic_rank(&SeriesMatrix::from_rows(all_rows)?, seed);
    let without = if gen_rows.is_empty() {
        GenericRank {
            rank: 0,
            witness: None,
            upper_certified: true,
            evaluation_rank: 0,
            seed,
            degree_used: with_v.degree_used,
        }
    } else {
        generic_rank(&SeriesMatrix::from_rows(gen_rows)?, seed)
    };
    let degree = with_v.degree_used.min(without.degree_used);
    let witness = with_v
        .witness
        .as_ref()
        .map_or(Witness::None, MinorWitness::to_witness);
    Ok(if with_v.rank > without.rank {
        if without.upper_certified {
            Verdict::certified_false(witness, degree)
        } else {
            Verdict::unknown(witness, degree)
        }
    } else if with_v.upper_certified {
        Verdict::certified_true(witness, degree)
    } else {
        Verdict::unknown(witness, degree)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{from_int, gaussian};
    use crate::verdict::Status;

    fn x(arity: usize, i: usize) -> Series {
        Series::variable(arity, 12, i)
    }

    fn c(arity: usize, v: i64) -> Series {
        Series::constant(arity, 12, from_int(v))
    }

    #[test]
    fn fraction_products_cancel() {
        // (z chi)/chi * chi/1 = z chi, in variables (z, chi)
        let z = x(2, 0);
        let chi = x(2, 1);
        let a = FracSeries::new(&z * &chi, chi.clone()).unwrap();
        let b = FracSeries::from_series(chi.clone());
        let prod = frac_arith(&a, &b, FracOp::Mul).unwrap();
        assert!(prod.eq_certified(&FracSeries::from_series(&z * &chi)));
        assert!(prod.factors.is_empty());
        assert!(a.eq_certified(&a));
    }

    #[test]
    fn cross_multiplication_equality() {
        let chi = x(1, 0);
        let a = FracSeries::new(&(&chi * &chi) + &chi.pow(3), chi.clone()).unwrap();
        let b = FracSeries::from_series(&chi + &(&chi * &chi));
        assert!(a.eq_certified(&b));
        assert!(!a.eq_certified(&FracSeries::from_series(chi.clone())));
    }

    #[test]
    fn division_by_zero_fraction() {
        let chi = x(1, 0);
        let zero = FracSeries::zero(1, 12);
        assert_eq!(
            FracSeries::from_series(chi).div(&zero).unwrap_err(),
            LinalgError::DivisionUncertifiable
        );
    }

    #[test]
    fn repeated_pivot_accumulates_as_power() {
        let chi = x(1, 0);
        let p = &c(1, 1) + &chi;
        let mut f = FracSeries::from_series(c(1, 1));
        for _ in 0..5 {
            f = f.div(&FracSeries::from_series(p.clone())).unwrap();
        }
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 5);
        let back = f.mul_series(&p.pow(5));
        assert!(back.eq_certified(&FracSeries::from_series(c(1, 1))));
        assert_eq!(f.certified_degree(), 12);
        let g = FracSeries::new(c(1, 1), chi.pow(3)).unwrap();
        assert_eq!(g.certified_degree(), 9);
    }

    #[test]
    fn determinants() {
        let id =
            SeriesMatrix::from_rows(vec![vec![c(2, 1), c(2, 0)], vec![c(2, 0), c(2, 1)]]).unwrap();
        assert_eq!(determinant(&id).unwrap(), c(2, 1));
        // Jacobian of (z, z w): [[1, 0], [w, z]]
        let z = x(2, 0);
        let w = x(2, 1);
        let jac = SeriesMatrix::from_rows(vec![vec![c(2, 1), c(2, 0)], vec![w.clone(), z.clone()]])
            .unwrap();
        assert_eq!(determinant(&jac).unwrap(), z);
        let rep =
            SeriesMatrix::from_rows(vec![vec![z.clone(), w.clone()], vec![z.clone(), w.clone()]])
                .unwrap();
        assert!(determinant(&rep).unwrap().is_certainly_zero());
        let rect = SeriesMatrix::new(1, 2, vec![z, w]).unwrap();
        assert!(matches!(
            determinant(&rect),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn subset_expansion_matches_cofactors() {
        // 5x5 with a planted structure: diag(1+x, 2, 3, 4, x) plus a nilpotent part
        let a = 1;
        let xs = x(a, 0);
        let mut rows = Vec::new();
        for i in 0..5 {
            let mut row = Vec::new();
            for j in 0..5 {
                let v = if i == j {
                    &c(a, (i + 1) as i64) + &xs
                } else if j == i + 1 {
                    xs.pow(j as u32)
                } else if i == j + 2 {
                    c(a, 1)
                } else {
                    c(a, 0)
                };
                row.push(v);
            }
            rows.push(row);
        }
        let m = SeriesMatrix::from_rows(rows).unwrap();
        let fast = subset_det(&m);
        let slow = cofactor_det(&m, &[0, 1, 2, 3, 4], 0);
        assert_eq!(fast, slow);
    }

    #[test]
    fn rank_of_psi_jacobian() {
        // psi = (z1, z1 z2): Jacobian [[1, 0], [z2, z1]] has rank 2, det z1
        let z1 = x(2, 0);
        let z2 = x(2, 1);
        let m = SeriesMatrix::from_rows(vec![vec![c(2, 1), c(2, 0)], vec![z2, z1]]).unwrap();
        let r = generic_rank(&m, 7);
        assert_eq!(r.rank, 2);
        assert!(r.upper_certified);
        let w = r.witness.unwrap();
        assert_eq!(w.index, MultiIndex::new(vec![1, 0]));
        assert_eq!(w.value, from_int(1));
    }

    #[test]
    fn rank_of_zero_and_column() {
        let z = Series::zero(1, 5);
        let m =
            SeriesMatrix::from_rows(vec![vec![z.clone(), z.clone()], vec![z.clone(), z]]).unwrap();
        let r = generic_rank(&m, 1);
        assert_eq!(r.rank, 0);
        assert!(r.upper_certified);
        // (z, z^2) as a map of one variable: 2x1 Jacobian (1, 2z)
        let zz = Series::variable(1, 5, 0);
        let col =
            SeriesMatrix::from_rows(vec![vec![Series::one(1, 5)], vec![zz.scale(&from_int(2))]])
                .unwrap();
        assert_eq!(generic_rank(&col, 1).rank, 1);
    }

    #[test]
    fn degenerate_exact_matrix_certifies_upper_bound() {
        // F = (z1, z1): F_z = [[1, 0], [1, 0]]
        let m =
            SeriesMatrix::from_rows(vec![vec![c(2, 1), c(2, 0)], vec![c(2, 1), c(2, 0)]]).unwrap();
        let r = generic_rank(&m, 3);
        assert_eq!(r.rank, 1);
        assert_eq!(r.at_least(2).status, Status::CertifiedFalse);
    }

    #[test]
    fn truncated_entries_do_not_certify_upper_bound() {
        let e = Series::variable(1, 4, 0).exp_series().unwrap();
        let m =
            SeriesMatrix::from_rows(vec![vec![e.clone(), e.clone()], vec![e.clone(), e]]).unwrap();
        let r = generic_rank(&m, 3);
        assert_eq!(r.rank, 1);
        assert!(!r.upper_certified);
        assert_eq!(r.at_least(2).status, Status::UnknownAtTruncation);
    }

    #[test]
    fn triangular_solves() {
        let chi = x(1, 0);
        let a = &chi + &chi.pow(2);
        let v = FracSeries::from_series(chi.pow(3));
        let sol = solve_triangular(&[vec![a.clone()]], std::slice::from_ref(&v)).unwrap();
        assert!(sol[0].eq_certified(&FracSeries::new(chi.pow(3), a).unwrap()));

        let one = c(1, 1);
        let zero = c(1, 0);
        let id = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ];
        let rhs = vec![
            FracSeries::from_series(chi.clone()),
            FracSeries::from_series(chi.pow(2)),
        ];
        let sol = solve_triangular(&id, &rhs).unwrap();
        assert!(sol[0].eq_certified(&rhs[0]) && sol[1].eq_certified(&rhs[1]));

        let bad = vec![
            vec![zero.clone(), zero.clone()],
            vec![one.clone(), one.clone()],
        ];
        assert_eq!(
            solve_triangular(&bad, &rhs).unwrap_err(),
            LinalgError::NotSolvableAtTruncation { row: 0 }
        );
        let upper = vec![vec![one.clone(), one.clone()], vec![zero, one]];
        assert!(matches!(
            solve_triangular(&upper, &rhs),
            Err(LinalgError::NotLowerTriangular { .. })
        ));
    }

    #[test]
    fn triangular_multiply_back() {
        // 3x3 lower-triangular with non-unit diagonal, checked by multiplying back
        let chi = x(1, 0);
        let l = vec![
            vec![chi.clone(), c(1, 0), c(1, 0)],
            vec![&c(1, 2) + &chi, chi.pow(2), c(1, 0)],
            vec![
                chi.pow(3),
                (&c(1, 1) - &chi).scale(&gaussian(0, 1)),
                &chi + &c(1, 3),
            ],
        ];
        let rhs: Vec<FracSeries> = [&c(1, 1) + &chi, chi.pow(2), &chi - &c(1, 5)]
            .into_iter()
            .map(FracSeries::from_series)
            .collect();
        let sol = solve_triangular(&l, &rhs).unwrap();
        for j in 0..3 {
            let mut acc = FracSeries::zero(1, 12);
            for i in 0..=j {
                acc = acc.add(&sol[i].mul_series(&l[j][i]));
            }
            assert!(acc.eq_certified(&rhs[j]), "row {j}");
        }
    }

    #[test]
    fn span_tests() {
        let chi = x(1, 0);
        let f = |s: Series| FracSeries::from_series(s);
        let v = vec![f(&c(1, 1) + &chi), f(chi.pow(2))];
        assert!(span_membership(&v, std::slice::from_ref(&v), 1)
            .unwrap()
            .is_true());
        let e1 = vec![f(c(1, 1)), f(c(1, 0))];
        let e2 = vec![f(c(1, 0)), f(c(1, 1))];
        assert!(span_membership(&e1, &[e2], 1).unwrap().is_false());
        let target = vec![f(chi.clone()), f(chi.pow(2))];
        let gen = vec![f(c(1, 1)), f(chi.clone())];
        assert!(span_membership(&target, &[gen], 1).unwrap().is_true());
        // with genuine denominators: (1/chi, 1) = (1, chi)/chi
        let frac = vec![FracSeries::new(c(1, 1), chi.clone()).unwrap(), f(c(1, 1))];
        let gen = vec![f(c(1, 1)), f(chi.clone())];
        assert!(span_membership(&frac, &[gen], 1).unwrap().is_true());
    }
}
