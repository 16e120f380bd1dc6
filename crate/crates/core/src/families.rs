//! Constructors for the standard example hypersurfaces and maps.
//!
//! Square roots are not available in the Gaussian rationals, so maps that
//! carry a `sqrt(c)` factor require `c` to be a perfect square. The unscaled
//! blowup `(z w^b, w^c)` together with the scaled target `Im w' = c|z'|^2`
//! covers every `c`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::crmap::{CrMap, CrMapError};
use crate::hypersurface::{Convention, HypersurfaceError, NormalHypersurface};
use crate::scalar::{self, Scalar};
use crate::series::{solve_implicit, FormalMap, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{value} is not a perfect square; its square root is outside the Gaussian rationals (use the unscaled map with a scaled target)")]
    FieldRestriction { value: u64 },
    #[error("parameters out of range: {0}")]
    ParameterRange(String),
    #[error(transparent)]
    Hypersurface(#[from] HypersurfaceError),
    #[error(transparent)]
    CrMap(#[from] CrMapError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

/// Parameters `(b, c)` of a weighted blowup with `2b > c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupParams {
    pub b: u32,
    pub c: u32,
}

impl BlowupParams {
    pub fn new(b: u32, c: u32) -> Result<Self> {
        if b == 0 || c == 0 || 2 * b <= c {
            return Err(FamilyError::ParameterRange(format!(
                "blowup needs positive b, c with 2b > c, got b={b}, c={c}"
            )));
        }
        Ok(BlowupParams { b, c })
    }

    /// Infinite type `d = 2b - c + 1`.
    pub fn d(self) -> u32 {
        2 * self.b - self.c + 1
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn int_scalar(v: BigInt) -> Scalar {
    scalar::from_rational(BigRational::from_integer(v))
}

fn sqrt_exact(v: u32) -> Result<i64> {
    scalar::perfect_sqrt(v as u64)
        .map(|r| r as i64)
        .ok_or(FamilyError::FieldRestriction { value: v as u64 })
}

fn z_chi_pairing(n: usize, d: u32) -> Series {
    let mut phi = Series::zero(2 * n + 1, d);
    for j in 0..n {
        phi = &phi + &(&Series::variable(2 * n + 1, d, j) * &Series::variable(2 * n + 1, d, n + j));
    }
    phi.assume_exact()
}

/// `Im w = sum |z_j|^2`, i.e. `Q = tau + kappa <z, chi>`.
pub fn heisenberg(n: usize, d: u32, convention: Convention) -> Result<NormalHypersurface> {
    Ok(NormalHypersurface::from_graph(
        n,
        &z_chi_pairing(n, d),
        convention,
    )?)
}

/// `Im w = c |z|^2` in one variable.
pub fn scaled_heisenberg(c: u32, d: u32, convention: Convention) -> Result<NormalHypersurface> {
    let phi = z_chi_pairing(1, d).scale(&scalar::from_int(c as i64));
    Ok(NormalHypersurface::from_graph(1, &phi, convention)?)
}

/// `Im w = sum |psi_j(z)|^2` for a pointed map `psi` in `n` variables.
pub fn m_psi(
    psi: &FormalMap,
    n: usize,
    d: u32,
    convention: Convention,
) -> Result<NormalHypersurface> {
    if !psi.is_pointed() {
        return Err(FamilyError::ParameterRange("psi must vanish at 0".into()));
    }
    let a = 2 * n + 1;
    let z_pos: Vec<usize> = (0..n).collect();
    let chi_pos: Vec<usize> = (n..2 * n).collect();
    let mut phi = Series::zero(a, d).assume_exact();
    for comp in psi.components() {
        if comp.arity() != n {
            return Err(FamilyError::ParameterRange(format!(
                "psi component has {} variables, expected {n}",
                comp.arity()
            )));
        }
        let left = comp.embed(a, &z_pos);
        let right = comp.conjugate().embed(a, &chi_pos);
        phi = &phi + &(&left * &right);
    }
    Ok(NormalHypersurface::from_graph(n, &phi, convention)?)
}

/// `Theta_{b,c}(X, s)`: the solution `u` of
/// `c u + sum_{k>=1} C(c,2k+1) (-1)^k s^{2k(d-1)} u^{2k+1}
///   = c X sum_{k>=0} C(b,k) s^{2k(d-1)} u^{2k}`,
/// written as the fixed-point equation `u = X + (1/c)[...]`.
pub fn theta(params: BlowupParams, d: u32) -> Result<Series> {
    let BlowupParams { b, c } = params;
    let e = params.d() - 1;
    let x = Series::variable(3, d, 0);
    let s = Series::variable(3, d, 1);
    let u = Series::variable(3, d, 2);
    let inv_c = scalar::from_rational(scalar::rational(1, c as i64));
    let mut rhs = x.clone();
    for k in 1..=b {
        let t = &(&x * &s.pow(2 * k * e)) * &u.pow(2 * k);
        rhs = &rhs + &t.scale(&int_scalar(binomial(b, k)));
    }
    for k in 1..=(c.saturating_sub(1) / 2) {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let t = &s.pow(2 * k * e) * &u.pow(2 * k + 1);
        let coef = int_scalar(binomial(c, 2 * k + 1) * BigInt::from(sign)) * &inv_c;
        rhs = &rhs + &t.scale(&coef);
    }
    Ok(solve_implicit(&rhs)?)
}

/// `M_{b,c}: Im w = s^d Theta_{b,c}(|z|^2, s)`, `s = Re w`.
pub fn blowup_hypersurface(
    b: u32,
    c: u32,
    d: u32,
    convention: Convention,
) -> Result<NormalHypersurface> {
    let params = BlowupParams::new(b, c)?;
    let th = theta(params, d)?;
    let z = Series::variable(3, d, 0);
    let chi = Series::variable(3, d, 1);
    let s = Series::variable(3, d, 2);
    let phi = &s.pow(params.d()) * &th.compose(&[&z * &chi, s.clone()])?;
    Ok(NormalHypersurface::from_graph(1, &phi, convention)?)
}

/// `H_{b,c} = (sqrt(c) z w^b, w^c)`; needs `c` a perfect square.
pub fn blowup_map(b: u32, c: u32, d: u32) -> Result<CrMap> {
    let r = sqrt_exact(c)?;
    Ok(scaled_blowup(b, c, r, d)?)
}

/// `(z w^b, w^c)`, which sends `M_{b,c}` into `Im w' = c|z'|^2`.
pub fn unscaled_blowup_map(b: u32, c: u32, d: u32) -> Result<CrMap> {
    Ok(scaled_blowup(b, c, 1, d)?)
}

fn scaled_blowup(b: u32, c: u32, factor: i64, d: u32) -> std::result::Result<CrMap, CrMapError> {
    let z = Series::variable(2, d, 0);
    let w = Series::variable(2, d, 1);
    let f = (&z * &w.pow(b))
        .scale(&scalar::from_int(factor))
        .assume_exact();
    CrMap::new(vec![f], w.pow(c).assume_exact())
}

/// `M_k: w = tau exp(i z chi / k)`.
pub fn exp_model(k: u32, d: u32) -> Result<NormalHypersurface> {
    if k == 0 {
        return Err(FamilyError::ParameterRange("k must be positive".into()));
    }
    let z = Series::variable(3, d, 0);
    let chi = Series::variable(3, d, 1);
    let tau = Series::variable(3, d, 2);
    let exponent = (&z * &chi).scale(&Scalar::new(
        scalar::rational(0, 1),
        scalar::rational(1, k as i64),
    ));
    let q = &tau * &exponent.exp_series()?;
    Ok(NormalHypersurface::new(1, q, Convention::TwoI)?)
}

/// `T_k = (z, w^k)`.
pub fn tk_map(k: u32, d: u32) -> Result<CrMap> {
    let z = Series::variable(2, d, 0).assume_exact();
    let w = Series::variable(2, d, 1);
    Ok(CrMap::new(vec![z], w.pow(k).assume_exact())?)
}

/// `H_k = (sqrt(k) z, w^k)`; needs `k` a perfect square.
pub fn hk_map(k: u32, d: u32) -> Result<CrMap> {
    let r = sqrt_exact(k)?;
    let z = Series::variable(2, d, 0)
        .scale(&scalar::from_int(r))
        .assume_exact();
    let w = Series::variable(2, d, 1);
    Ok(CrMap::new(vec![z], w.pow(k).assume_exact())?)
}

/// Linear self-map `(c z, w)`.
pub fn dilation(c: Scalar, d: u32) -> CrMap {
    let z = Series::variable(2, d, 0).scale(&c).assume_exact();
    CrMap::new(vec![z], Series::variable(2, d, 1).assume_exact()).expect("pointed")
}

/// The source, target and map of the basic non-transversal example:
/// `M = {Im w = |z w|^2}`, complexified as `w - tau = kappa z chi w tau`,
/// so `Q = tau / (1 - kappa z chi tau)`; `M' = Heisenberg`; `H = (z, z w)`.
pub fn remark_instance(
    d: u32,
    convention: Convention,
) -> Result<(NormalHypersurface, NormalHypersurface, CrMap)> {
    let x = |i| Series::variable(3, d, i);
    let t = (&(&x(0) * &x(1)) * &x(2)).scale(&convention.kappa());
    let q = &x(2) * &(&Series::one(3, d) - &t).invert_unit()?;
    let m = NormalHypersurface::new(1, q, convention)?;
    let m2 = heisenberg(1, d, convention)?;
    let z = Series::variable(2, d, 0);
    let w = Series::variable(2, d, 1);
    let h = CrMap::new(vec![z.clone().assume_exact()], (&z * &w).assume_exact())?;
    Ok((m, m2, h))
}

/// `psi = (z1, z1 z2)`.
pub fn psi_example(d: u32) -> FormalMap {
    let z1 = Series::variable(2, d, 0);
    let z2 = Series::variable(2, d, 1);
    FormalMap::new(vec![z1.clone().assume_exact(), (&z1 * &z2).assume_exact()]).expect("same arity")
}

/// `H = (psi(z), w)` in `n + 1` variables.
pub fn psi_map(psi: &FormalMap, n: usize, d: u32) -> Result<CrMap> {
    let positions: Vec<usize> = (0..n).collect();
    let f = psi
        .components()
        .iter()
        .map(|c| c.embed(n + 1, &positions))
        .collect();
    Ok(CrMap::new(f, Series::variable(n + 1, d, n).assume_exact())?)
}
