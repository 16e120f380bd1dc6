//! Recovering the `z`-jet of `b` at `z = 0` from the `z`-jet of `A b`.
//!
//! `A` is a series in `(z_1..z_n, chi_1..chi_m)` with `ord_z A = k < ∞` and
//! `b` a vector of `d` such series. Given `v_beta(chi) = ∂_z^beta (A b)|_{z=0}`
//! for `|beta| <= |alpha| + k`, the coefficients `b_{z^gamma}(0, chi)` for
//! `|gamma| <= |alpha|` are determined by triangular systems over
//! `Frac C[[chi]]`, level by level in `|gamma|`.
//!
//! Multi-indices are ordered graded-lexicographically, so the minimal
//! `alpha0` with `A_{z^alpha0}(0, chi) != 0` has `|alpha0| = k`. In equation
//! `beta = alpha0 + gamma_j` the unknown `b_gamma` with `|gamma| = |gamma_j|`
//! appears with coefficient `A_{alpha0 + gamma_j - gamma}`, which vanishes for
//! `gamma >_lex gamma_j`; the system is lower triangular with diagonal
//! `A_{alpha0}`. The solver checks that vanishing instead of assuming it.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::linalg::{solve_triangular, FracSeries, LinalgError};
use crate::scalar;
use crate::series::{MultiIndex, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProlongationError {
    #[error("A vanishes in z up to the truncation degree")]
    NoWitness,
    #[error("jet v_{0} was not supplied")]
    MissingJet(MultiIndex),
    #[error("jet v_{beta} has {found} components, expected {expected}")]
    JetDimension {
        beta: MultiIndex,
        expected: usize,
        found: usize,
    },
    #[error("data inconsistent with any b: residual of equation {0} is nonzero")]
    InconsistentData(MultiIndex),
    #[error("coefficient of b_{gamma} in equation {beta} should vanish but does not")]
    TriangularityViolated { beta: MultiIndex, gamma: MultiIndex },
    #[error("variable counts do not match the arity of A")]
    Arity,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ProlongationError>;

/// `z`-jets of `A b` at `z = 0`, keyed by `beta`, each a vector of `d`
/// series in `chi`.
pub type Jets = BTreeMap<MultiIndex, Vec<Series>>;

/// Graded-lexicographic minimum of `{alpha : A_{z^alpha}(0, chi) != 0}`.
pub fn minimal_ordered_nonzero(a: &Series, n: usize) -> Result<MultiIndex> {
    a.terms()
        .map(|(k, _)| MultiIndex::new(k.exponents()[..n].to_vec()))
        .min_by(|x, y| x.cmp_graded(y))
        .ok_or(ProlongationError::NoWitness)
}

fn factorial_scalar(beta: &MultiIndex) -> scalar::Scalar {
    scalar::from_rational(BigRational::from_integer(beta.factorial()))
}

/// `v_beta = ∂_z^beta (A b)|_{z=0}` for all `|beta| <= order`.
pub fn forward_expand(a: &Series, b: &[Series], n: usize, order: u32) -> Result<Jets> {
    let z: Vec<usize> = (0..n).collect();
    let products: Vec<Series> = b.iter().map(|bi| a * bi).collect();
    let mut out = Jets::new();
    for beta in MultiIndex::all_up_to_degree(n, order) {
        let fact = factorial_scalar(&beta);
        let v = products
            .iter()
            .map(|p| Ok(p.coefficient_in_block(&z, &beta)?.scale(&fact)))
            .collect::<Result<Vec<_>>>()?;
        out.insert(beta, v);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ProlongationInstance {
    a: Series,
    n: usize,
    m: usize,
    d: usize,
    k: u32,
    alpha0: MultiIndex,
    v: Jets,
}

/// All recovered jets together with the highest jet order read from `v`.
#[derive(Debug, Clone)]
pub struct ProlongationSolution {
    pub jets: BTreeMap<MultiIndex, Vec<FracSeries>>,
    pub max_jet_accessed: u32,
}

impl ProlongationInstance {
    pub fn new(a: Series, n: usize, m: usize, d: usize, v: Jets) -> Result<Self> {
        if a.arity() != n + m {
            return Err(ProlongationError::Arity);
        }
        let alpha0 = minimal_ordered_nonzero(&a, n)?;
        let k = alpha0.degree();
        for (beta, vec) in &v {
            if vec.len() != d {
                return Err(ProlongationError::JetDimension {
                    beta: beta.clone(),
                    expected: d,
                    found: vec.len(),
                });
            }
        }
        Ok(ProlongationInstance {
            a,
            n,
            m,
            d,
            k,
            alpha0,
            v,
        })
    }

    /// `ord_z A`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha0(&self) -> &MultiIndex {
        &self.alpha0
    }

    fn a_coeff(&self, mu: &MultiIndex) -> Result<Series> {
        let z: Vec<usize> = (0..self.n).collect();
        Ok(self.a.coefficient_in_block(&z, mu)?)
    }

    /// Taylor coefficient `(A b)_{z^beta}(0, chi) = v_beta / beta!`.
    fn taylor(&self, beta: &MultiIndex, accessed: &Cell<u32>) -> Result<Vec<FracSeries>> {
        let v = self
            .v
            .get(beta)
            .ok_or_else(|| ProlongationError::MissingJet(beta.clone()))?;
        accessed.set(accessed.get().max(beta.degree()));
        let inv = scalar::inverse(&factorial_scalar(beta)).expect("factorials are nonzero");
        Ok(v.iter()
            .map(|s| FracSeries::from_series(s.scale(&inv)))
            .collect())
    }

    /// `c_beta - sum_{nu known, nu <= beta} A_{beta - nu} b_nu`, componentwise.
    fn reduced_rhs(
        &self,
        beta: &MultiIndex,
        known: &BTreeMap<MultiIndex, Vec<FracSeries>>,
        accessed: &Cell<u32>,
    ) -> Result<Vec<FracSeries>> {
        let mut rhs = self.taylor(beta, accessed)?;
        for (nu, b_nu) in known {
            let Some(mu) = beta.checked_sub(nu) else {
                continue;
            };
            let a_mu = self.a_coeff(&mu)?;
            if a_mu.is_zero() {
                continue;
            }
            for (r, b) in rhs.iter_mut().zip(b_nu) {
                *r = r.sub(&b.mul_series(&a_mu));
            }
        }
        Ok(rhs)
    }

    /// Solve for `b_{z^gamma}(0, chi)` for every `|gamma| <= |alpha|`, then
    /// check the unused equations with `|beta| <= |alpha| + k`.
    pub fn solve_all(&self, alpha: &MultiIndex) -> Result<ProlongationSolution> {
        let accessed = Cell::new(0);
        let top = alpha.degree();
        let mut known: BTreeMap<MultiIndex, Vec<FracSeries>> = BTreeMap::new();
        let zero_chi = Series::zero(self.m, self.a.trunc_degree());
        for level in 0..=top {
            // ascending lexicographic order within one degree
            let gammas = MultiIndex::all_of_degree(self.n, level);
            let l = gammas.len();
            let mut coeffs = vec![vec![zero_chi.clone(); l]; l];
            let mut rhs_by_eq = Vec::with_capacity(l);
            for (j, gj) in gammas.iter().enumerate() {
                let beta = &self.alpha0 + gj;
                for (i, gi) in gammas.iter().enumerate() {
                    let Some(mu) = (&self.alpha0 + gj).checked_sub(gi) else {
                        continue;
                    };
                    let c = self.a_coeff(&mu)?;
                    if gi.cmp_lex(gj) == Ordering::Greater {
                        if !c.is_zero() {
                            return Err(ProlongationError::TriangularityViolated {
                                beta,
                                gamma: gi.clone(),
                            });
                        }
                        continue;
                    }
                    coeffs[j][i] = c;
                }
                rhs_by_eq.push(self.reduced_rhs(&beta, &known, &accessed)?);
            }
            let mut solved: Vec<Vec<FracSeries>> = vec![Vec::with_capacity(self.d); l];
            for comp in 0..self.d {
                let rhs: Vec<FracSeries> = rhs_by_eq.iter().map(|r| r[comp].clone()).collect();
                for (j, x) in solve_triangular(&coeffs, &rhs)?.into_iter().enumerate() {
                    solved[j].push(x);
                }
            }
            for (g, x) in gammas.into_iter().zip(solved) {
                known.insert(g, x);
            }
        }
        // every equation with |beta| <= |alpha| + k only involves known b_nu
        for beta in MultiIndex::all_up_to_degree(self.n, top + self.k) {
            if let Some(gamma) = beta.checked_sub(&self.alpha0) {
                if gamma.degree() <= top {
                    continue;
                }
            }
            let residual = self.reduced_rhs(&beta, &known, &accessed)?;
            if residual.iter().any(|r| !r.is_zero()) {
                return Err(ProlongationError::InconsistentData(beta));
            }
        }
        Ok(ProlongationSolution {
            jets: known,
            max_jet_accessed: accessed.get(),
        })
    }
}

/// `b_{z^alpha}(0, chi)`: the value of the universal linear map `T_alpha`
/// on the supplied jets.
pub fn prolongation_solve(
    inst: &ProlongationInstance,
    alpha: &MultiIndex,
) -> Result<Vec<FracSeries>> {
    let mut sol = inst.solve_all(alpha)?;
    Ok(sol
        .jets
        .remove(alpha)
        .expect("alpha is among the solved jets"))
}

/// `b_{z^alpha}(0, chi)` read directly off `b`, for comparison.
pub fn b_coefficient(b: &[Series], n: usize, alpha: &MultiIndex) -> Result<Vec<Series>> {
    let z: Vec<usize> = (0..n).collect();
    b.iter()
        .map(|bi| Ok(bi.coefficient_in_block(&z, alpha)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{from_int, gaussian};
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn alpha0_examples() {
        let x = |i| Series::variable(2, 6, i);
        assert_eq!(
            minimal_ordered_nonzero(&(&x(0) * &x(1)), 1).unwrap(),
            mi(&[1])
        );
        let y = |i| Series::variable(3, 6, i);
        let a = &(&y(1) * &y(2)) + &(&y(0).pow(2) * &y(2).pow(2));
        assert_eq!(minimal_ordered_nonzero(&a, 2).unwrap(), mi(&[0, 1]));
        assert_eq!(
            minimal_ordered_nonzero(&Series::one(2, 4), 1).unwrap(),
            mi(&[0])
        );
        assert_eq!(
            minimal_ordered_nonzero(&x(1), 1).unwrap(),
            mi(&[0]),
            "pure chi terms count as alpha = 0"
        );
        assert_eq!(
            minimal_ordered_nonzero(&Series::zero(2, 4), 1),
            Err(ProlongationError::NoWitness)
        );
    }

    #[test]
    fn pure_lex_would_pick_a_higher_degree() {
        // z1^2 + z2^3: the lex minimum (0,3) has degree 3 while ord_z = 2
        let y = |i| Series::variable(3, 8, i);
        let a = &y(0).pow(2) + &y(1).pow(3);
        let a0 = minimal_ordered_nonzero(&a, 2).unwrap();
        assert_eq!(a0, mi(&[2, 0]));
        assert_eq!(a0.degree(), 2);
    }

    #[test]
    fn forward_expansion_examples() {
        let x = |i| Series::variable(2, 8, i);
        let a = &x(0) * &x(1);
        let v = forward_expand(&a, &[Series::one(2, 8)], 1, 3).unwrap();
        assert!(v[&mi(&[0])][0].is_zero());
        assert_eq!(v[&mi(&[1])][0], Series::variable(1, 7, 0));
        assert!(v[&mi(&[2])][0].is_zero());
        // A = 1: v_beta = ∂^beta b at 0 = beta! b_beta
        let b = &x(0).pow(2) + &x(1);
        let v = forward_expand(&Series::one(2, 8), &[b], 1, 2).unwrap();
        assert_eq!(v[&mi(&[2])][0], Series::constant(1, 6, from_int(2)));
        let zero = forward_expand(&a, &[Series::zero(2, 8)], 1, 3).unwrap();
        assert!(zero.values().all(|vs| vs[0].is_zero()));
    }

    #[test]
    fn unit_a_returns_taylor_data() {
        let x = |i| Series::variable(2, 10, i);
        let b = &(&x(0) * &x(1)) + &x(1).pow(3);
        let v = forward_expand(&Series::one(2, 10), std::slice::from_ref(&b), 1, 2).unwrap();
        let inst = ProlongationInstance::new(Series::one(2, 10), 1, 1, 1, v).unwrap();
        let got = prolongation_solve(&inst, &mi(&[1])).unwrap();
        let want = b_coefficient(&[b], 1, &mi(&[1])).unwrap();
        assert!(got[0].eq_certified(&FracSeries::from_series(want[0].clone())));
    }

    #[test]
    fn a_equals_z_chi() {
        let x = |i| Series::variable(2, 12, i);
        let a = &x(0) * &x(1);
        let b = &(&Series::one(2, 12) + &x(1).pow(2)) + &(&x(0) * &x(1));
        let v = forward_expand(&a, std::slice::from_ref(&b), 1, 3).unwrap();
        let inst = ProlongationInstance::new(a, 1, 1, 1, v).unwrap();
        assert_eq!(inst.k(), 1);
        let sol = inst.solve_all(&mi(&[0])).unwrap();
        let b0 = FracSeries::from_series(
            b_coefficient(std::slice::from_ref(&b), 1, &mi(&[0])).unwrap()[0].clone(),
        );
        assert!(sol.jets[&mi(&[0])][0].eq_certified(&b0));
        assert_eq!(sol.max_jet_accessed, 1);
        let sol = inst.solve_all(&mi(&[2])).unwrap();
        assert_eq!(sol.max_jet_accessed, 3);
    }

    #[test]
    fn inconsistent_jets_are_rejected() {
        // A = z chi forces v_0 = 0
        let x = |i| Series::variable(2, 8, i);
        let a = &x(0) * &x(1);
        let mut v = forward_expand(&a, &[Series::one(2, 8)], 1, 1).unwrap();
        v.insert(mi(&[0]), vec![Series::variable(1, 8, 0)]);
        let inst = ProlongationInstance::new(a, 1, 1, 1, v).unwrap();
        assert_eq!(
            prolongation_solve(&inst, &mi(&[0])).unwrap_err(),
            ProlongationError::InconsistentData(mi(&[0]))
        );
    }

    #[test]
    fn missing_jet_is_reported() {
        let x = |i| Series::variable(2, 8, i);
        let a = &x(0) * &x(1);
        let v = forward_expand(&a, &[Series::one(2, 8)], 1, 1).unwrap();
        let inst = ProlongationInstance::new(a, 1, 1, 1, v).unwrap();
        assert!(matches!(
            prolongation_solve(&inst, &mi(&[1])),
            Err(ProlongationError::MissingJet(_))
        ));
    }

    #[test]
    fn two_variable_instance() {
        // n = 2, m = 1, d = 2, A = z2 chi + z1^2 + i z1 z2 chi^2
        let d = 14;
        let x = |i| Series::variable(3, d, i);
        let a = &(&(&x(1) * &x(2)) + &x(0).pow(2))
            + &(&(&x(0) * &x(1)) * &x(2).pow(2)).scale(&gaussian(0, 1));
        let b1 = &(&Series::one(3, d) + &x(0)) + &(&x(1) * &x(2)).pow(2);
        let b2 = &(&x(2).pow(3) + &(&x(0) * &x(1))) - &x(1).pow(3);
        let b = vec![b1, b2];
        let v = forward_expand(&a, &b, 2, 4).unwrap();
        let inst = ProlongationInstance::new(a, 2, 1, 2, v).unwrap();
        assert_eq!(inst.alpha0(), &mi(&[0, 1]));
        for alpha in MultiIndex::all_up_to_degree(2, 3) {
            let sol = inst.solve_all(&alpha).unwrap();
            assert!(sol.max_jet_accessed <= alpha.degree() + 1);
            let want = b_coefficient(&b, 2, &alpha).unwrap();
            for (g, w) in sol.jets[&alpha].iter().zip(want) {
                assert!(g.eq_certified(&FracSeries::from_series(w)), "alpha {alpha}");
            }
        }
    }

    fn small_poly(arity: usize, d: u32, coeffs: &[(Vec<u32>, i64)]) -> Series {
        Series::polynomial(
            arity,
            d,
            coeffs
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.clone()), from_int(*c))),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn solving_is_linear(
            bs in proptest::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..5),
            cs in proptest::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..5),
        ) {
            let d = 10;
            let x = |i| Series::variable(2, d, i);
            let a = &(&x(0) * &x(1)) + &x(0).pow(2);
            let to = |v: &Vec<(u32, u32, i64)>| small_poly(2, d, &v.iter().map(|(p, q, c)| (vec![*p, *q], *c)).collect::<Vec<_>>());
            let b = to(&bs);
            let c = to(&cs);
            let alpha = mi(&[2]);
            let solve = |bb: &Series| {
                let v = forward_expand(&a, std::slice::from_ref(bb), 1, 3).unwrap();
                let inst = ProlongationInstance::new(a.clone(), 1, 1, 1, v).unwrap();
                prolongation_solve(&inst, &alpha).unwrap().remove(0)
            };
            let sum = solve(&(&b + &c));
            prop_assert!(sum.eq_certified(&solve(&b).add(&solve(&c))));
        }
    }
}
