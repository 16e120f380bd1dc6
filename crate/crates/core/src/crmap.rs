//! Formal holomorphic maps `H = (F, G)` between hypersurfaces in normal
//! coordinates, and the map-level predicates built on the identity
//! `G(z, Q(z,chi,tau)) = Q'(F(z, Q), Fbar(chi, tau), Gbar(chi, tau))`.
//!
//! Map components have variables `(z_1..z_n, w)`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypersurface::{HypersurfaceError, NormalHypersurface};
use crate::linalg::{determinant, generic_rank, scalar_determinant, LinalgError, SeriesMatrix};
use crate::scalar::{self, Scalar};
use crate::series::{FormalMap, MultiIndex, Series, SeriesError};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrMapError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("component {0} has a nonzero constant term")]
    NotPointed(usize),
    #[error("normal component has a term without w: {0:?}")]
    PureTangentialTerm(Witness),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hypersurface(#[from] HypersurfaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, CrMapError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TransversalOrder {
    Finite(u32),
    /// `G` vanishes up to the stated degree.
    InfinityAtTruncation(u32),
}

impl TransversalOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            TransversalOrder::Finite(k) => Some(k),
            TransversalOrder::InfinityAtTruncation(_) => None,
        }
    }
}

impl fmt::Display for TransversalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransversalOrder::Finite(k) => write!(f, "{k}"),
            TransversalOrder::InfinityAtTruncation(d) => write!(f, "inf@{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrMap {
    n: usize,
    f: FormalMap,
    g: Series,
}

impl CrMap {
    pub fn new(f: Vec<Series>, g: Series) -> Result<Self> {
        let n = f.len();
        if n == 0 {
            return Err(CrMapError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        for s in f.iter().chain(std::iter::once(&g)) {
            if s.arity() != n + 1 {
                return Err(CrMapError::Dimension {
                    expected: n + 1,
                    found: s.arity(),
                });
            }
        }
        if let Some(i) = f
            .iter()
            .chain(std::iter::once(&g))
            .position(|s| !s.constant_term().is_zero())
        {
            return Err(CrMapError::NotPointed(i));
        }
        Ok(CrMap {
            n,
            f: FormalMap::new(f)?,
            g,
        })
    }

    pub fn identity(n: usize, trunc: u32) -> Self {
        let f = (0..n).map(|i| Series::variable(n + 1, trunc, i)).collect();
        CrMap::new(f, Series::variable(n + 1, trunc, n)).expect("identity is pointed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &[Series] {
        self.f.components()
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    pub fn trunc_degree(&self) -> u32 {
        self.components()
            .iter()
            .map(Series::trunc_degree)
            .min()
            .unwrap_or(0)
    }

    /// `(F_1, ..., F_n, G)`.
    pub fn components(&self) -> Vec<Series> {
        let mut out = self.f.components().to_vec();
        out.push(self.g.clone());
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CrMap) -> Result<CrMap> {
        if inner.n != self.n {
            return Err(CrMapError::Dimension {
                expected: self.n,
                found: inner.n,
            });
        }
        let args = inner.components();
        let comps = self
            .components()
            .iter()
            .map(|c| c.compose(&args))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let (g, f) = comps.split_last().expect("nonempty");
        CrMap::new(f.to_vec(), g.clone())
    }

    fn check_dims(&self, m: &NormalHypersurface) -> Result<()> {
        if m.n() != self.n {
            return Err(CrMapError::Dimension {
                expected: self.n,
                found: m.n(),
            });
        }
        Ok(())
    }

    /// `G(z, Q) - Q'(F(z, Q), Fbar(chi, tau), Gbar(chi, tau))` in `(z, chi, tau)`.
    pub fn sends_into_defect(
        &self,
        m: &NormalHypersurface,
        m2: &NormalHypersurface,
    ) -> Result<Series> {
        self.check_dims(m)?;
        self.check_dims(m2)?;
        let n = self.n;
        let a = 2 * n + 1;
        let d = self
            .trunc_degree()
            .min(m.trunc_degree())
            .min(m2.trunc_degree());
        let mut zq: Vec<Series> = (0..n).map(|i| Series::variable(a, d, i)).collect();
        zq.push(m.q().truncate(d));
        let lhs = self.g.compose(&zq)?;
        // (z, w) -> (chi, tau) for the conjugated components
        let to_chi_tau: Vec<usize> = (0..n)
            .map(|i| n + i)
            .chain(std::iter::once(2 * n))
            .collect();
        let mut args = Vec::with_capacity(a);
        for fi in self.f.components() {
            args.push(fi.compose(&zq)?);
        }
        for fi in self.f.components() {
            args.push(fi.conjugate().embed(a, &to_chi_tau));
        }
        args.push(self.g.conjugate().embed(a, &to_chi_tau));
        let rhs = m2.q().compose(&args)?;
        Ok(&lhs - &rhs)
    }

    /// Does `H` send `M` into `M'`? Refutation is exact; confirmation is up
    /// to the stamped degree.
    pub fn sends_into(&self, m: &NormalHypersurface, m2: &NormalHypersurface) -> Result<Verdict> {
        let defect = self.sends_into_defect(m, m2)?;
        let d = defect.trunc_degree();
        Ok(if defect.is_zero() {
            Verdict::certified_true(Witness::None, d)
        } else {
            Verdict::certified_false(
                Witness::leading("G(z,Q) - Q'(F(z,Q),Fbar,Gbar)", &defect),
                d,
            )
        })
    }

    fn w_index(&self) -> MultiIndex {
        MultiIndex::unit(self.n + 1, self.n)
    }

    /// `G_w(0) != 0`.
    pub fn is_cr_transversal(&self) -> Verdict {
        let c = self.g.coeff(&self.w_index());
        let w = Witness::coefficient("G", &self.w_index(), &c);
        let d = self.trunc_degree();
        if c.is_zero() {
            Verdict::certified_false(w, d)
        } else {
            Verdict::certified_true(w, d)
        }
    }

    /// `G ≡ 0`. A vanishing truncation confirms only up to its degree.
    pub fn is_transversally_flat(&self) -> Verdict {
        let d = self.trunc_degree();
        if self.g.is_zero() {
            let w = if self.g.is_exact() {
                Witness::None
            } else {
                Witness::note(format!("G vanishes up to degree {d}"))
            };
            Verdict::certified_true(w, d)
        } else {
            Verdict::certified_false(Witness::leading("G", &self.g), d)
        }
    }

    /// `F_z(z, 0)` as an `n x n` matrix of series in `z`.
    pub fn f_z_at_w0(&self) -> Result<SeriesMatrix> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for fi in self.f.components() {
            let at0 = fi.restrict_zero(&[self.n])?;
            for j in 0..self.n {
                entries.push(at0.partial_derivative(j)?);
            }
        }
        Ok(SeriesMatrix::new(self.n, self.n, entries)?)
    }

    /// `z -> F_z(z, 0)` has generic rank `n`.
    pub fn is_not_totally_degenerate(&self, seed: u64) -> Result<Verdict> {
        let m = self.f_z_at_w0()?;
        Ok(generic_rank(&m, seed).at_least(self.n))
    }

    /// Full `(n+1) x (n+1)` Jacobian matrix in `(z, w)`.
    pub fn jacobian_matrix(&self) -> Result<SeriesMatrix> {
        let comps = self.components();
        let mut entries = Vec::with_capacity(comps.len() * comps.len());
        for c in &comps {
            for j in 0..=self.n {
                entries.push(c.partial_derivative(j)?);
            }
        }
        Ok(SeriesMatrix::new(self.n + 1, self.n + 1, entries)?)
    }

    pub fn jacobian(&self) -> Result<Series> {
        Ok(determinant(&self.jacobian_matrix()?)?)
    }

    pub fn is_jac_nonzero(&self) -> Result<Verdict> {
        let jac = self.jacobian()?;
        let d = jac.trunc_degree();
        Ok(if !jac.is_zero() {
            Verdict::certified_true(Witness::leading("Jac H", &jac), d)
        } else if jac.is_certainly_zero() {
            Verdict::certified_false(Witness::note("Jac H vanishes identically"), d)
        } else {
            Verdict::unknown(Witness::note(format!("Jac H vanishes up to degree {d}")), d)
        })
    }

    /// Largest `k` with `w^k | G`, read off the stored support.
    pub fn transversal_order(&self) -> Result<TransversalOrder> {
        let n = self.n;
        let low = self.g.terms().min_by(|(a, _), (b, _)| {
            a.exponents()[n]
                .cmp(&b.exponents()[n])
                .then_with(|| a.cmp_graded(b))
        });
        match low {
            None => Ok(TransversalOrder::InfinityAtTruncation(
                self.g.trunc_degree(),
            )),
            Some((k, v)) if k.exponents()[n] == 0 => Err(CrMapError::PureTangentialTerm(
                Witness::coefficient("G", k, v),
            )),
            Some((k, _)) => Ok(TransversalOrder::Finite(k.exponents()[n])),
        }
    }

    /// `G_{w^k}(z, 0)` as a series in `z`.
    pub fn g_wk(&self, k: u32) -> Result<Series> {
        Ok(self
            .g
            .coefficient_in_block(&[self.n], &MultiIndex::new(vec![k]))?)
    }

    /// With `H` sending `M` into `M'` and `trord H = k < ∞`:
    /// `G_{w^k}(z,0)` is the constant `G_{w^k}(0)`, real and nonzero.
    pub fn normal_component_reality_check(
        &self,
        m: &NormalHypersurface,
        m2: &NormalHypersurface,
    ) -> Result<Verdict> {
        let d = self.trunc_degree();
        let sends = self.sends_into(m, m2)?;
        if !sends.is_true() {
            return Ok(Verdict::unknown(
                Witness::note("sends_into not certified"),
                sends.degree_used,
            ));
        }
        let Some(k) = self.transversal_order()?.finite() else {
            return Ok(Verdict::unknown(
                Witness::note("transversally flat up to truncation"),
                d,
            ));
        };
        let c = self.g_wk(k)?;
        let name = format!("G_{{w^{k}}}(z,0)");
        if let Some((idx, v)) = c.terms().find(|(idx, _)| idx.degree() > 0) {
            return Ok(Verdict::certified_false(
                Witness::coefficient(&name, idx, v),
                d,
            ));
        }
        let c0 = c.constant_term();
        let w = Witness::value(&format!("G_{{w^{k}}}(0)"), &c0);
        Ok(if scalar::is_real(&c0) && !c0.is_zero() {
            Verdict::certified_true(w, d)
        } else {
            Verdict::certified_false(w, d)
        })
    }

    /// `(m' - 1) trord H <= m - 1` for `H` sending `M` (m-infinite type)
    /// into `M'` (m'-infinite type), transversally nonflat.
    pub fn trord_bound_check(
        &self,
        m: &NormalHypersurface,
        m2: &NormalHypersurface,
    ) -> Result<Verdict> {
        let d = self.trunc_degree();
        let (Some(mm), Some(mm2)) = (m.infinite_type(), m2.infinite_type()) else {
            return Ok(Verdict::unknown(
                Witness::note("infinite type not established"),
                d,
            ));
        };
        let sends = self.sends_into(m, m2)?;
        if !sends.is_true() {
            return Ok(Verdict::unknown(
                Witness::note("sends_into not certified"),
                sends.degree_used,
            ));
        }
        let Some(k) = self.transversal_order()?.finite() else {
            return Ok(Verdict::unknown(
                Witness::note("transversally flat up to truncation"),
                d,
            ));
        };
        let lhs = (mm2 - 1) * k;
        let rhs = mm - 1;
        let w = Witness::note(format!("(m'-1)*trord = ({mm2}-1)*{k} = {lhs}, m-1 = {rhs}"));
        Ok(if lhs <= rhs {
            Verdict::certified_true(w, sends.degree_used)
        } else {
            Verdict::certified_false(w, sends.degree_used)
        })
    }

    /// For a CR-transversal self-map of an m-infinite type `M`:
    /// `Qtilde(z,chi,0) = G_w(0)^(m-1) Qtilde(F(z,0), Fbar(chi,0), 0)`.
    /// `m` is recomputed from `M`.
    pub fn basid_check(&self, m: &NormalHypersurface) -> Result<Verdict> {
        let d = self.trunc_degree().min(m.trunc_degree());
        let Some(mm) = m.infinite_type() else {
            return Ok(Verdict::unknown(
                Witness::note("infinite type not established"),
                d,
            ));
        };
        let sends = self.sends_into(m, m)?;
        if !sends.is_true() {
            return Ok(Verdict::unknown(
                Witness::note("sends_into not certified"),
                sends.degree_used,
            ));
        }
        if !self.is_cr_transversal().is_true() {
            return Ok(Verdict::unknown(
                Witness::note("map is not CR-transversal"),
                d,
            ));
        }
        let n = self.n;
        let qt = m.q_tilde(mm)?.restrict_zero(&[2 * n])?;
        let a = 2 * n;
        let mut args = Vec::with_capacity(a);
        let f0: Vec<Series> = self
            .f
            .components()
            .iter()
            .map(|fi| fi.restrict_zero(&[n]))
            .collect::<std::result::Result<_, _>>()?;
        for fi in &f0 {
            args.push(fi.embed(a, &(0..n).collect::<Vec<_>>()));
        }
        for fi in &f0 {
            args.push(fi.conjugate().embed(a, &(n..2 * n).collect::<Vec<_>>()));
        }
        let gw0 = self.g.coeff(&self.w_index());
        let rhs = qt.compose(&args)?.scale(&scalar::pow(&gw0, mm - 1));
        let diff = &qt - &rhs;
        let used = diff.trunc_degree();
        Ok(if diff.is_zero() {
            Verdict::certified_true(
                Witness::value("G_w(0)^(m-1)", &scalar::pow(&gw0, mm - 1)),
                used,
            )
        } else {
            Verdict::certified_false(
                Witness::leading("Qtilde - G_w(0)^(m-1) Qtilde(F,Fbar)", &diff),
                used,
            )
        })
    }

    /// Linear part `dH(0)` as a scalar matrix.
    pub fn linear_part(&self) -> Vec<Vec<Scalar>> {
        self.components()
            .iter()
            .map(|c| {
                (0..=self.n)
                    .map(|j| c.coeff(&MultiIndex::unit(self.n + 1, j)))
                    .collect()
            })
            .collect()
    }

    /// Invertible linear part, hence a formal automorphism.
    pub fn is_automorphism(&self) -> Verdict {
        let det = scalar_determinant(&self.linear_part());
        let w = Witness::value("det dH(0)", &det);
        let d = self.trunc_degree();
        if det.is_zero() {
            Verdict::certified_false(w, d)
        } else {
            Verdict::certified_true(w, d)
        }
    }

    pub fn variable_names(&self) -> Vec<String> {
        map_names(self.n)
    }
}

/// Variable names `(z, w)` or `(z1..zn, w)`.
pub fn map_names(n: usize) -> Vec<String> {
    let mut out: Vec<String> = if n == 1 {
        vec!["z".to_string()]
    } else {
        (1..=n).map(|i| format!("z{i}")).collect()
    };
    out.push("w".to_string());
    out
}

impl fmt::Display for CrMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.variable_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let parts: Vec<String> = self
            .components()
            .iter()
            .map(|c| c.display_with(&refs))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}
