//! `E_2` terms of the Lyndon-Hochschild-Serre spectral sequence of a central
//! extension `S -> G -> K` with circle coefficients, and restriction of
//! 3-classes to the fibre.
//!
//! Since `S` is central, `K` acts trivially on `H^q(S, Q/Z)`, and
//! `H^p(K, M)` for finite `M` follows from the universal coefficient theorem
//! with `H^p(K, Z) = H^{p-1}(K, Q/Z)` for `p >= 2`.

use std::sync::Arc;

use serde::Serialize;

use crate::abelian::FiniteAbelianGroup;
use crate::arith::{gcd, invariant_factors};
use crate::cochain::{cohomology_group, solve_coboundary, Cochain, Limits};
use crate::error::{Error, Result};
use crate::gerbe::MultiplicativeGerbe;
use crate::group::{CentralExtension, FiniteGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Term {
    pub p: usize,
    pub q: usize,
    /// Invariant factors; meaningless when `infinite`.
    pub factors: Vec<u64>,
    /// Only `E_2^{0,0} = Q/Z`.
    pub infinite: bool,
}

impl E2Term {
    pub fn order(&self) -> Option<u64> {
        (!self.infinite).then(|| self.factors.iter().product())
    }
}

/// Invariant factors of `H^p(K, Z)` for `p >= 1`.
fn integral(k: &Arc<FiniteGroup>, p: usize, limits: &Limits) -> Result<Vec<u64>> {
    if p <= 1 {
        return Ok(Vec::new());
    }
    Ok(cohomology_group(k, p - 1, limits)?.factors)
}

fn pairwise_gcd(a: &[u64], b: &[u64], out: &mut Vec<u64>) {
    for &x in a {
        for &y in b {
            let d = gcd(x, y);
            if d > 1 {
                out.push(d);
            }
        }
    }
}

/// `H^p(K, M)` for finite `M` with trivial action.
pub fn cohomology_with_finite_coefficients(
    k: &Arc<FiniteGroup>,
    m: &FiniteAbelianGroup,
    p: usize,
    limits: &Limits,
) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if p == 0 {
        out.extend_from_slice(m.factors());
    } else {
        pairwise_gcd(&integral(k, p, limits)?, m.factors(), &mut out);
    }
    pairwise_gcd(&integral(k, p + 1, limits)?, m.factors(), &mut out);
    Ok(invariant_factors(&out))
}

/// `E_2^{p,q} = H^p(K, H^q(S, Q/Z))` for abelian `S`.
pub fn lhs_e2(k: &Arc<FiniteGroup>, s: &FiniteAbelianGroup, p: usize, q: usize, limits: &Limits) -> Result<E2Term> {
    if q == 0 {
        if p == 0 {
            return Ok(E2Term { p, q, factors: Vec::new(), infinite: true });
        }
        let factors = cohomology_group(k, p, limits)?.factors;
        return Ok(E2Term { p, q, factors, infinite: false });
    }
    let hq = cohomology_group(&Arc::new(FiniteGroup::from_abelian(s)), q, limits)?;
    let coeff = FiniteAbelianGroup::new(hq.factors)?;
    let factors = cohomology_with_finite_coefficients(k, &coeff, p, limits)?;
    Ok(E2Term { p, q, factors, infinite: false })
}

/// As [`lhs_e2`], after checking that the fibre is central, so that the
/// quotient acts trivially on the coefficients.
pub fn lhs_e2_for_extension(ext: &CentralExtension, p: usize, q: usize, limits: &Limits) -> Result<E2Term> {
    ext.fibre.check_central(&ext.group).map_err(|_| {
        Error::Unsupported("the quotient acts nontrivially on the fibre cohomology".into())
    })?;
    lhs_e2(&ext.quotient, &ext.fibre.group, p, q, limits)
}

/// All terms with `p + q = total`.
pub fn e2_diagonal(ext: &CentralExtension, total: usize, limits: &Limits) -> Result<Vec<E2Term>> {
    (0..=total).map(|q| lhs_e2_for_extension(ext, total - q, q, limits)).collect()
}

#[derive(Clone, Debug)]
pub struct FiberRestriction {
    pub restricted: Cochain,
    pub trivial: bool,
    /// Level at which the failed solve ran.
    pub level: Option<u64>,
}

/// Restricts `alpha` to the subgroup `S` and decides whether it is exact.
pub fn fiber_restriction(gerbe: &MultiplicativeGerbe, s: &[usize], limits: &Limits) -> Result<FiberRestriction> {
    let sub = gerbe.group().subgroup(s)?;
    let restricted = gerbe.alpha().restrict(&sub)?;
    if restricted.is_zero() {
        return Ok(FiberRestriction { restricted, trivial: true, level: None });
    }
    match solve_coboundary(&restricted, limits) {
        Ok(_) => Ok(FiberRestriction { restricted, trivial: true, level: None }),
        Err(Error::NoSolutionAtLevel { level }) => Ok(FiberRestriction { restricted, trivial: false, level: Some(level) }),
        Err(e) => Err(e),
    }
}
