//! Formal real hypersurfaces in normal coordinates, `w = Q(z, chi, tau)`.
//!
//! Variables of `Q` are laid out as `(z_1..z_n, chi_1..chi_n, tau)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{generic_rank, GenericRank, LinalgError, SeriesMatrix};
use crate::scalar::{self, Scalar};
use crate::series::{MultiIndex, Series, SeriesError};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypersurfaceError {
    #[error("defining series has {found} variables, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("graph data does not vanish on z = 0 and chi = 0: {0:?}")]
    NotNormalGraph(Witness),
    #[error("constructed hypersurface fails validation: {0:?}")]
    Invalid(Verdict),
    #[error("hypersurface is not of {expected}-infinite type ({found})")]
    TypeMismatch { expected: u32, found: String },
    #[error("hypersurface is of finite type")]
    FiniteType,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, HypersurfaceError>;

/// How `Im w = phi` is complexified: `w - tau = kappa * phi(z, chi, (w + tau)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Convention {
    /// `kappa = 2i`, the literal reading of `Im w = (w - conj w)/(2i)`.
    #[default]
    #[serde(rename = "2i")]
    TwoI,
    /// `kappa = i`.
    #[serde(rename = "i")]
    I,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::TwoI, Convention::I];

    pub fn kappa(self) -> Scalar {
        match self {
            Convention::TwoI => scalar::gaussian(0, 2),
            Convention::I => scalar::gaussian(0, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::TwoI => "2i",
            Convention::I => "i",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "2i" => Ok(Convention::TwoI),
            "i" => Ok(Convention::I),
            other => Err(format!("unknown convention `{other}` (expected 2i or i)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "snake_case")]
pub enum TypeKind {
    Finite,
    Infinite(u32),
    UnknownAtTruncation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeClassification {
    pub kind: TypeKind,
    /// Exponent of the witnessing coefficient of `Q - tau`.
    pub witness: Option<MultiIndex>,
    pub degree_used: u32,
}

/// The exceptional hypersurface `E = {w = 0}` of an infinite-type hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalHypersurface {
    /// Index of the normal variable `w` among `(z_1..z_n, w)`.
    pub normal_variable: usize,
}

impl fmt::Display for ExceptionalHypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("E = {w = 0}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalHypersurface {
    n: usize,
    q: Series,
    convention: Convention,
}

impl NormalHypersurface {
    pub fn new(n: usize, q: Series, convention: Convention) -> Result<Self> {
        if n == 0 || q.arity() != 2 * n + 1 {
            return Err(HypersurfaceError::Arity {
                expected: 2 * n + 1,
                found: q.arity(),
            });
        }
        Ok(NormalHypersurface { n, q, convention })
    }

    /// The Levi-flat plane `Q = tau`.
    pub fn flat(n: usize, trunc: u32) -> Self {
        NormalHypersurface {
            n,
            q: Series::variable(2 * n + 1, trunc, 2 * n),
            convention: Convention::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Series {
        &self.q
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn trunc_degree(&self) -> u32 {
        self.q.trunc_degree()
    }

    pub fn z_block(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn chi_block(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }

    pub fn tau_var(&self) -> usize {
        2 * self.n
    }

    pub fn variable_names(&self) -> Vec<String> {
        names(self.n)
    }

    fn tau(&self) -> Series {
        Series::variable(2 * self.n + 1, self.trunc_degree(), self.tau_var())
    }

    /// `conj(Q)` with the `z` and `chi` blocks swapped, i.e. `Qbar(chi, z, tau)`.
    pub fn q_bar_swapped(&self) -> Series {
        let n = self.n;
        let positions: Vec<usize> = (0..2 * n + 1)
            .map(|i| match i {
                i if i < n => i + n,
                i if i < 2 * n => i - n,
                i => i,
            })
            .collect();
        self.q.conjugate().embed(2 * n + 1, &positions)
    }

    /// Normality `Q(0,chi,tau) = Q(z,0,tau) = tau` and the reality identity
    /// `Q(z, chi, Qbar(chi, z, w)) = w`, both up to the truncation degree.
    pub fn validate(&self) -> Verdict {
        let d = self.trunc_degree();
        let n = self.n;
        let one_tau = Series::variable(n + 1, d, n);
        for (label, block) in [
            ("Q(0,chi,tau) - tau", self.z_block()),
            ("Q(z,0,tau) - tau", self.chi_block()),
        ] {
            let restricted = self.q.restrict_zero(&block).expect("block within arity");
            let diff = &restricted - &one_tau.truncate(restricted.trunc_degree());
            if !diff.is_zero() {
                return Verdict::certified_false(Witness::leading(label, &diff), d);
            }
        }
        let mut args: Vec<Series> = (0..2 * n)
            .map(|i| Series::variable(2 * n + 1, d, i))
            .collect();
        args.push(self.q_bar_swapped());
        let lhs = self.q.compose(&args).expect("pointed arguments");
        let diff = &lhs - &self.tau();
        if !diff.is_zero() {
            return Verdict::certified_false(
                Witness::leading("Q(z,chi,Qbar(chi,z,w)) - w", &diff),
                d,
            );
        }
        Verdict::certified_true(Witness::None, d)
    }

    /// Complexify the graph `Im w = phi(z, zbar, Re w)`: solve
    /// `w - tau = kappa * phi(z, chi, (w + tau)/2)` for `w`.
    /// `phi` has variables `(z, chi, s)` and must vanish on `z = 0` and on `chi = 0`.
    pub fn from_graph(n: usize, phi: &Series, convention: Convention) -> Result<Self> {
        if n == 0 || phi.arity() != 2 * n + 1 {
            return Err(HypersurfaceError::Arity {
                expected: 2 * n + 1,
                found: phi.arity(),
            });
        }
        for (label, block) in [
            ("phi(0,chi,s)", (0..n).collect::<Vec<_>>()),
            ("phi(z,0,s)", (n..2 * n).collect()),
        ] {
            let r = phi.restrict_zero(&block)?;
            if !r.is_zero() {
                return Err(HypersurfaceError::NotNormalGraph(Witness::leading(
                    label, &r,
                )));
            }
        }
        let d = phi.trunc_degree();
        let a = 2 * n + 2;
        let u = Series::variable(a, d, a - 1);
        let mut args: Vec<Series> = (0..2 * n).map(|i| Series::variable(a, d, i)).collect();
        let half = scalar::from_rational(scalar::rational(1, 2));
        args.push(&Series::variable(a, d, 2 * n) + &u.scale(&half));
        let rhs = phi.compose(&args)?.scale(&convention.kappa());
        let sol = crate::series::solve_implicit(&rhs)?;
        let mut q = &Series::variable(2 * n + 1, d, 2 * n) + &sol;
        if phi.is_exact() && rhs.coefficients_in_var(a - 1)?.len() == 1 {
            // phi independent of s: the solution is rhs itself, a polynomial
            q = q.assume_exact();
        }
        let m = NormalHypersurface { n, q, convention };
        let v = m.validate();
        if !v.is_true() {
            return Err(HypersurfaceError::Invalid(v));
        }
        Ok(m)
    }

    /// Recover `phi(z, chi, s)` with `from_graph(phi) = self` under the stored
    /// convention: `u = w - tau` solves `u = R(z, chi, s - u/2)` with `R = Q - tau`.
    pub fn graph(&self) -> Result<Series> {
        let n = self.n;
        let d = self.trunc_degree();
        let a = 2 * n + 2;
        let r = &self.q - &self.tau();
        let u = Series::variable(a, d, a - 1);
        let mut args: Vec<Series> = (0..2 * n).map(|i| Series::variable(a, d, i)).collect();
        let half = scalar::from_rational(scalar::rational(1, 2));
        args.push(&Series::variable(a, d, 2 * n) - &u.scale(&half));
        let rhs = r.compose(&args)?;
        let sol = crate::series::solve_implicit(&rhs)?;
        let inv = scalar::inverse(&self.convention.kappa()).expect("nonzero");
        Ok(sol.scale(&inv))
    }

    /// Finite type iff `Q(z,chi,0) != 0`; otherwise `m` is the least power of
    /// `tau` occurring in `Q - tau`.
    pub fn classify_type(&self) -> TypeClassification {
        let d = self.trunc_degree();
        let t = self.tau_var();
        let r = &self.q - &self.tau();
        let best = r
            .terms()
            .map(|(k, _)| k)
            .min_by(|a, b| {
                a.exponents()[t]
                    .cmp(&b.exponents()[t])
                    .then_with(|| a.cmp_graded(b))
            })
            .cloned();
        match best {
            None => TypeClassification {
                kind: TypeKind::UnknownAtTruncation,
                witness: None,
                degree_used: d,
            },
            Some(k) if k.exponents()[t] == 0 => TypeClassification {
                kind: TypeKind::Finite,
                witness: Some(k),
                degree_used: d,
            },
            Some(k) => TypeClassification {
                kind: TypeKind::Infinite(k.exponents()[t]),
                witness: Some(k),
                degree_used: d,
            },
        }
    }

    /// The `m` of an infinite-type classification, if any.
    pub fn infinite_type(&self) -> Option<u32> {
        match self.classify_type().kind {
            TypeKind::Infinite(m) => Some(m),
            _ => None,
        }
    }

    /// `Qtilde` with `Q = tau + tau^m Qtilde`, truncated at `D - m`.
    pub fn q_tilde(&self, m: u32) -> Result<Series> {
        let t = self.tau_var();
        let r = &self.q - &self.tau();
        let d = self.trunc_degree();
        if let Some((k, _)) = r.terms().find(|(k, _)| k.exponents()[t] < m) {
            return Err(HypersurfaceError::TypeMismatch {
                expected: m,
                found: format!("term {k} has lower tau order"),
            });
        }
        let shifted = r.terms().map(|(k, v)| {
            let mut e = k.exponents().to_vec();
            e[t] -= m;
            (MultiIndex::new(e), v.clone())
        });
        let trunc = d.saturating_sub(m);
        Ok(if r.is_exact() {
            Series::polynomial(2 * self.n + 1, trunc, shifted)
        } else {
            Series::from_terms(2 * self.n + 1, trunc, shifted)
        })
    }

    pub fn rank_verdict(found: Option<(u32, GenericRank)>, target: usize, d: u32) -> Verdict {
        match found {
            Some((_, r)) if r.rank >= target => r.at_least(target),
            Some((k, r)) => Verdict::unknown(
                Witness::note(format!(
                    "rank {} < {target} for jets up to order {k}",
                    r.rank
                )),
                d,
            ),
            None => Verdict::unknown(Witness::note("no jets available below the truncation"), d),
        }
    }

    /// Class C: `chi -> (Q_{z^alpha}(0,chi,0))_{|alpha| <= k}` has generic rank `n`.
    pub fn is_class_c(&self, k_max: u32, seed: u64) -> Result<Verdict> {
        let found = jet_rank(&self.q, self.n, k_max, false, seed)?;
        Ok(Self::rank_verdict(found, self.n, self.trunc_degree()))
    }

    /// Class `C_m`: the same rank condition on the coefficients of `Qtilde(z,chi,0)`.
    pub fn is_class_cm(&self, m: u32, k_max: u32, seed: u64) -> Result<Verdict> {
        let kind = self.classify_type().kind;
        if kind != TypeKind::Infinite(m) {
            return Err(HypersurfaceError::TypeMismatch {
                expected: m,
                found: format!("{kind:?}"),
            });
        }
        let qt = self.q_tilde(m)?;
        let found = jet_rank(&qt, self.n, k_max, false, seed)?;
        Ok(Self::rank_verdict(found, self.n, qt.trunc_degree()))
    }

    /// `(chi, tau) -> (Q_{z^alpha}(0,chi,tau))_{|alpha| <= k}` has generic rank `n + 1`.
    pub fn is_holomorphically_nondegenerate(&self, k_max: u32, seed: u64) -> Result<Verdict> {
        let found = jet_rank(&self.q, self.n, k_max, true, seed)?;
        Ok(Self::rank_verdict(found, self.n + 1, self.trunc_degree()))
    }

    pub fn exceptional_hypersurface(&self) -> Result<ExceptionalHypersurface> {
        match self.classify_type().kind {
            TypeKind::Finite => Err(HypersurfaceError::FiniteType),
            _ => Ok(ExceptionalHypersurface {
                normal_variable: self.n,
            }),
        }
    }

    /// Same hypersurface at a lower truncation degree.
    pub fn truncate(&self, trunc: u32) -> Self {
        NormalHypersurface {
            n: self.n,
            q: self.q.truncate(trunc),
            convention: self.convention,
        }
    }
}

impl fmt::Display for NormalHypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.variable_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "w = {}", self.q.display_with(&refs))
    }
}

/// Rank of the Jacobian of `chi -> (S_{z^alpha}(0,chi,0))_{1 <= |alpha| <= k}`
/// for `S` in `(z_1..z_n, chi_1..chi_n, tau)`, or of
/// `(chi, tau) -> (S_{z^alpha}(0,chi,tau))_{|alpha| <= k}` when `with_tau`,
/// for increasing `k` until full rank is witnessed. Returns the last `k`
/// tried and its rank.
pub fn jet_rank(
    s: &Series,
    n: usize,
    k_max: u32,
    with_tau: bool,
    seed: u64,
) -> Result<Option<(u32, GenericRank)>> {
    let target = if with_tau { n + 1 } else { n };
    let z: Vec<usize> = (0..n).collect();
    let k_max = k_max.min(s.trunc_degree().saturating_sub(1));
    let mut rows: Vec<Vec<Series>> = Vec::new();
    let mut last = None;
    let start = if with_tau { 0 } else { 1 };
    for k in start..=k_max {
        for alpha in MultiIndex::all_of_degree(n, k) {
            // series in (chi, tau)
            let coeff = s.coefficient_in_block(&z, &alpha)?;
            let f = if with_tau {
                coeff
            } else {
                coeff.restrict_zero(&[n])?
            };
            let row = (0..target)
                .map(|j| f.partial_derivative(j))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            continue;
        }
        let rank = generic_rank(&SeriesMatrix::from_rows(rows.clone())?, seed);
        let done = rank.rank >= target;
        last = Some((k, rank));
        if done {
            break;
        }
    }
    Ok(last)
}

/// Variable names `(z, chi, tau)` or `(z1..zn, chi1..chin, tau)`.
pub fn names(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * n + 1);
    if n == 1 {
        out.push("z".to_string());
        out.push("chi".to_string());
    } else {
        out.extend((1..=n).map(|i| format!("z{i}")));
        out.extend((1..=n).map(|i| format!("chi{i}")));
    }
    out.push("tau".to_string());
    out
}
