use std::collections::BTreeMap;
use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::arith::invariant_factors;
use crate::error::{Error, Result};
use crate::group::{abelian_invariants, FiniteGroup};
use crate::linalg::{smith_mod, smith_mod_full, ModEchelon};

use super::solve::{check_size, coboundary_rows, reduce_rows};
use super::{ActionGroupoid, Base, Cochain, Limits, ModuleCochain, Simplices};

/// `H^n(-, Q/Z)` as invariant factors with one normalized representative
/// cocycle per factor.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub factors: Vec<u64>,
    pub order: u64,
    pub representatives: Vec<Cochain>,
}

/// `H^n(G, Q/Z)` for `n >= 1`, read off from the Smith normal form of
/// `d: C^n -> C^{n+1}` on normalized integer cochains: its torsion is
/// `H^{n+1}(G, Z)`. A column `v` of the transform behind a diagonal entry `d`
/// gives the representative `v / d`.
pub fn cohomology_group(g: &Arc<FiniteGroup>, n: usize, limits: &Limits) -> Result<CohomologyGroup> {
    cohomology_of_base(&Base::Group(g.clone()), n, limits)
}

pub(crate) fn cohomology_of_base(base: &Base, n: usize, limits: &Limits) -> Result<CohomologyGroup> {
    if n == 0 {
        return Err(Error::Unsupported("degree 0 cohomology with Q/Z coefficients is not finite".into()));
    }
    let ord = base.group().order() as u64;
    if ord == 1 {
        return Ok(CohomologyGroup { degree: n, factors: vec![], order: 1, representatives: vec![] });
    }
    let rows_sx = Simplices::new(base, n + 1, true);
    let cols_sx = Simplices::new(base, n, true);
    check_size(
        rows_sx.checked_count().unwrap_or(usize::MAX),
        cols_sx.checked_count().unwrap_or(usize::MAX),
        limits,
    )?;
    let m = ord * ord;
    let (rows, _, cols_sx) = coboundary_rows(base, n + 1, true);
    let snf = smith_mod(cols_sx.count(), reduce_rows(&rows, m), m, true);
    let full = Simplices::new(base, n, false);
    let mut args = vec![0; n];
    let mut factors = Vec::new();
    let mut representatives = Vec::new();
    for (d, col) in snf.torsion {
        let mut values = vec![0u64; full.count()];
        for (j, &v) in col.iter().enumerate() {
            if v % d != 0 {
                let x = cols_sx.decode(j, &mut args);
                values[full.encode(x, &args).unwrap()] = v % d;
            }
        }
        let rep = Cochain::from_level_values(base.clone(), n, d, values)?;
        if let Some(w) = rep.cocycle_violation() {
            return Err(Error::InternalVerificationFailed(format!("representative fails at {w:?}")));
        }
        factors.push(d);
        representatives.push(rep);
    }
    let order = factors.iter().product();
    Ok(CohomologyGroup { degree: n, factors, order, representatives })
}

/// `|H^2(N // G, Q/Z)|`, the number of isomorphism classes of
/// representations of a trivial gerbe on the `G`-set `N`.
pub fn groupoid_h2_order(a: &Arc<ActionGroupoid>, limits: &Limits) -> Result<u64> {
    Ok(cohomology_of_base(&Base::Groupoid(a.clone()), 2, limits)?.order)
}

/// `H^n(K, M)` for a finite abelian `M` with trivial action, with every
/// class listed by a normalized representative.
#[derive(Clone, Debug)]
pub struct ModuleCohomology {
    pub degree: usize,
    pub factors: Vec<u64>,
    pub order: u64,
    pub classes: Vec<ModuleCochain>,
}

/// One cyclic coefficient `Z/d`: canonical forms modulo coboundaries.
fn cyclic_classes(base: &Base, n: usize, d: u64, max_classes: usize) -> Result<(Vec<u64>, Vec<Vec<u64>>)> {
    let (rows_next, _, cols) = coboundary_rows(base, n + 1, true);
    let snf = smith_mod_full(cols.count(), reduce_rows(&rows_next, d), d, true, true);
    let mut gens: Vec<Vec<u64>> = snf.null_columns;
    for (dd, col) in snf.torsion {
        let k = d / dd;
        gens.push(col.iter().map(|&v| (v as u128 * k as u128 % d as u128) as u64).collect());
    }
    let mut ech = ModEchelon::new(cols.count(), d);
    if n >= 1 {
        let (rows_cur, _, prev) = coboundary_rows(base, n, true);
        let mut columns: Vec<Vec<(usize, u64)>> = vec![Vec::new(); prev.count()];
        for (r, row) in reduce_rows(&rows_cur, d).into_iter().enumerate() {
            for (c, v) in row {
                columns[c].push((r, v));
            }
        }
        for col in columns {
            if !col.is_empty() {
                ech.insert(col, 0);
            }
        }
    }
    let gens: Vec<Vec<u64>> = gens.into_iter().map(|g| ech.reduce(&g)).filter(|g| g.iter().any(|&v| v != 0)).collect();
    let zero = vec![0u64; cols.count()];
    let mut elems: Vec<Vec<u64>> = vec![zero.clone()];
    let mut index: BTreeMap<Vec<u64>, usize> = BTreeMap::from([(zero, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in &gens {
            let s: Vec<u64> = elems[i].iter().zip(g).map(|(&a, &b)| (a + b) % d).collect();
            let s = ech.reduce(&s);
            if !index.contains_key(&s) {
                if elems.len() >= max_classes {
                    return Err(Error::SizeLimitExceeded { rows: elems.len() + 1, cols: 0, limit: max_classes });
                }
                index.insert(s.clone(), elems.len());
                elems.push(s);
            }
        }
        i += 1;
    }
    let k = elems.len();
    let table: Vec<Vec<usize>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let s: Vec<u64> = elems[a].iter().zip(&elems[b]).map(|(&x, &y)| (x + y) % d).collect();
                    index[&ech.reduce(&s)]
                })
                .collect()
        })
        .collect();
    let (grp, _) = FiniteGroup::from_table(&table)?;
    let factors = abelian_invariants(&grp)?.invariants.factors().to_vec();
    Ok((factors, elems))
}

pub fn module_cohomology(
    k: &Arc<FiniteGroup>,
    module: &FiniteAbelianGroup,
    n: usize,
    max_classes: usize,
    limits: &Limits,
) -> Result<ModuleCohomology> {
    let base = Base::Group(k.clone());
    let rows_sx = Simplices::new(&base, n + 1, true);
    check_size(rows_sx.checked_count().unwrap_or(usize::MAX), 0, limits)?;
    let cols = Simplices::new(&base, n, true);
    let full = Simplices::new(&base, n, false);
    let mut per: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut cyclic = Vec::new();
    let mut total = 1usize;
    for &d in module.factors() {
        let (f, elems) = cyclic_classes(&base, n, d, max_classes)?;
        total = total.saturating_mul(elems.len());
        if total > max_classes {
            return Err(Error::SizeLimitExceeded { rows: total, cols: 0, limit: max_classes });
        }
        cyclic.extend(f);
        per.push(elems);
    }
    let r = module.rank();
    let mut classes = Vec::with_capacity(total);
    let mut args = vec![0; n];
    for mut code in 0..total {
        let mut picks = Vec::with_capacity(r);
        for comp in per.iter().rev() {
            picks.push(&comp[code % comp.len()]);
            code /= comp.len();
        }
        picks.reverse();
        let mut values = vec![0u64; full.count() * r];
        for j in 0..cols.count() {
            let x = cols.decode(j, &mut args);
            let idx = full.encode(x, &args).unwrap();
            for (i, p) in picks.iter().enumerate() {
                values[idx * r + i] = p[j];
            }
        }
        let c = ModuleCochain::from_fn(k.clone(), module.clone(), n, |a| {
            let idx = full.encode(0, a).unwrap();
            values[idx * r..idx * r + r].to_vec()
        })?;
        classes.push(c);
    }
    let factors = invariant_factors(&cyclic);
    let order = factors.iter().product();
    Ok(ModuleCohomology { degree: n, factors, order, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn cyclic_groups_alternate() {
        for m in 2..=6 {
            for n in 1..=4 {
                let h = cohomology_group(&z(m), n, &Limits::default()).unwrap();
                if n % 2 == 1 {
                    assert_eq!(h.factors, vec![m as u64], "m={m} n={n}");
                } else {
                    assert!(h.factors.is_empty(), "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn klein_four_degree_two_and_three() {
        let k = Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        assert_eq!(cohomology_group(&k, 1, &Limits::default()).unwrap().factors, vec![2, 2]);
        assert_eq!(cohomology_group(&k, 2, &Limits::default()).unwrap().factors, vec![2]);
        assert_eq!(cohomology_group(&k, 3, &Limits::default()).unwrap().factors, vec![2, 2, 2]);
    }

    #[test]
    fn module_classes_of_klein_four() {
        let k = Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        let h = module_cohomology(&k, &FiniteAbelianGroup::cyclic(2), 2, 1 << 12, &Limits::default()).unwrap();
        assert_eq!(h.factors, vec![2, 2, 2]);
        assert_eq!(h.classes.len(), 8);
        for (i, a) in h.classes.iter().enumerate() {
            assert!(a.is_cocycle() && a.is_normalized());
            for b in &h.classes[..i] {
                assert!(!a.classes_equal(b, &Limits::default()).unwrap());
            }
        }
    }

    #[test]
    fn groupoid_h2_is_product_over_stabilizers() {
        let k = Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        let pt = Arc::new(ActionGroupoid::point(k.clone()));
        assert_eq!(groupoid_h2_order(&pt, &Limits::default()).unwrap(), 2);
        let free = Arc::new(ActionGroupoid::right_regular(k));
        assert_eq!(groupoid_h2_order(&free, &Limits::default()).unwrap(), 1);
    }
}
