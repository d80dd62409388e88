use crate::arith::checked_lcm;
use crate::error::{Error, Result};
use crate::linalg::{solve_mod, SparseRow};

use super::{transfer, Base, Cochain, Limits, Simplices};

/// Integer coefficients of `d: C^{n-1} -> C^n` as sparse rows, one per
/// `n`-simplex of `rows`, with columns indexed by `cols`.
pub(crate) fn coboundary_rows(base: &Base, n: usize, normalized: bool) -> (Vec<Vec<(usize, i64)>>, Simplices, Simplices) {
    assert!(n >= 1);
    let rows_sx = Simplices::new(base, n, normalized);
    let cols_sx = Simplices::new(base, n - 1, normalized);
    let g = base.group();
    let mut args = vec![0usize; n];
    let mut face = vec![0usize; n - 1];
    let mut out = Vec::with_capacity(rows_sx.count());
    let mut terms: Vec<(usize, i64)> = Vec::with_capacity(n + 1);
    for r in 0..rows_sx.count() {
        let x = rows_sx.decode(r, &mut args);
        terms.clear();
        if let Some(c) = cols_sx.encode(base.act(x, args[0]), &args[1..]) {
            terms.push((c, 1));
        }
        for i in 1..n {
            face.clear();
            face.extend_from_slice(&args[..i - 1]);
            face.push(g.mul(args[i - 1], args[i]));
            face.extend_from_slice(&args[i + 1..]);
            if let Some(c) = cols_sx.encode(x, &face) {
                terms.push((c, if i % 2 == 1 { -1 } else { 1 }));
            }
        }
        if let Some(c) = cols_sx.encode(x, &args[..n - 1]) {
            terms.push((c, if n % 2 == 1 { -1 } else { 1 }));
        }
        terms.sort_unstable();
        let mut row: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for &(c, v) in terms.iter() {
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|&(_, v)| v != 0);
        out.push(row);
    }
    (out, rows_sx, cols_sx)
}

pub(crate) fn reduce_rows(rows: &[Vec<(usize, i64)>], m: u64) -> Vec<SparseRow> {
    rows.iter()
        .map(|r| {
            r.iter()
                .filter_map(|&(c, v)| {
                    let x = (v as i128).rem_euclid(m as i128) as u64;
                    (x != 0).then_some((c, x))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn check_size(rows: usize, cols: usize, limits: &Limits) -> Result<()> {
    if rows.max(cols) > limits.max_matrix_dim {
        return Err(Error::SizeLimitExceeded { rows, cols, limit: limits.max_matrix_dim });
    }
    Ok(())
}

/// Default solving level: lcm of the denominators of `c`, times the order of
/// the acting group, times the multiplier.
pub(crate) fn solving_level(c: &Cochain, limits: &Limits) -> Result<u64> {
    c.minimal_level()
        .checked_mul(c.base().size())
        .and_then(|l| l.checked_mul(limits.level_multiplier.max(1)))
        .ok_or_else(|| Error::Unsupported("solving level beyond 64 bits".into()))
}

/// Finds `b` with `d b = c`.
///
/// Normalized input gives a normalized `b`. The solve happens over
/// `(1/L) Z / Z` with `L` the default level; since positive-degree cohomology
/// of a finite group is killed by the group order, a coboundary always has a
/// primitive at that level, so a negative answer is definitive. On an action
/// groupoid the problem is transferred to the stabilizers.
pub fn solve_coboundary(c: &Cochain, limits: &Limits) -> Result<Cochain> {
    if c.degree() == 0 {
        return Err(Error::Unsupported("degree-0 cochains are not coboundaries".into()));
    }
    if let Some(w) = c.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    match c.base() {
        Base::Group(_) => solve_direct_unchecked(c, limits),
        Base::Groupoid(_) => transfer::solve_on_groupoid(c, limits),
    }
}

/// Same as [`solve_coboundary`] but always assembles the full linear system,
/// also on action groupoids.
pub fn solve_coboundary_direct(c: &Cochain, limits: &Limits) -> Result<Cochain> {
    if c.degree() == 0 {
        return Err(Error::Unsupported("degree-0 cochains are not coboundaries".into()));
    }
    if let Some(w) = c.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    solve_direct_unchecked(c, limits)
}

pub(crate) fn solve_direct_unchecked(c: &Cochain, limits: &Limits) -> Result<Cochain> {
    let n = c.degree();
    let level = solving_level(c, limits)?;
    let normalized = c.is_normalized();
    let rows_sx = Simplices::new(c.base(), n, normalized);
    let cols_sx = Simplices::new(c.base(), n - 1, normalized);
    check_size(rows_sx.checked_count().unwrap_or(usize::MAX), cols_sx.checked_count().unwrap_or(usize::MAX), limits)?;
    let (rows, rows_sx, cols_sx) = coboundary_rows(c.base(), n, normalized);
    let target = c.at_level(level)?;
    let mut args = vec![0; n];
    let rhs: Vec<u64> = (0..rows_sx.count())
        .map(|r| {
            let x = rows_sx.decode(r, &mut args);
            target.raw(x, &args)
        })
        .collect();
    let sol = solve_mod(cols_sx.count(), &reduce_rows(&rows, level), &rhs, level)
        .ok_or(Error::NoSolutionAtLevel { level })?;
    let mut b = Cochain::zero(c.base().clone(), n - 1).at_level(level)?;
    let full = Simplices::new(c.base(), n - 1, false);
    let mut args = vec![0; n - 1];
    for (j, &v) in sol.iter().enumerate() {
        if v != 0 {
            let x = cols_sx.decode(j, &mut args);
            let idx = full.encode(x, &args).unwrap();
            b.values[idx] = v;
        }
    }
    if b.delta() != *c {
        return Err(Error::InternalVerificationFailed("solver output is not a primitive".into()));
    }
    Ok(b)
}

/// Whether two cocycles differ by a coboundary.
pub fn classes_equal(a: &Cochain, b: &Cochain, limits: &Limits) -> Result<bool> {
    if a.base() != b.base() || a.degree() != b.degree() {
        return Err(Error::DomainMismatch);
    }
    for c in [a, b] {
        if let Some(w) = c.cocycle_violation() {
            return Err(Error::NotACocycle { witness: w });
        }
    }
    let d = a.sub(b)?;
    if d.is_zero() {
        return Ok(true);
    }
    match solve_coboundary(&d, limits) {
        Ok(_) => Ok(true),
        Err(Error::NoSolutionAtLevel { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Writes a cocycle as `c = c' + d b` with `c'` normalized; returns `(c', b)`.
pub fn normalized_representative(c: &Cochain, limits: &Limits) -> Result<(Cochain, Cochain)> {
    let n = c.degree();
    if let Some(w) = c.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    if n == 0 || c.is_normalized() {
        let zero = if n == 0 { Cochain::zero(c.base().clone(), 0) } else { Cochain::zero(c.base().clone(), n - 1) };
        return Ok((c.clone(), zero));
    }
    let level = checked_lcm(c.minimal_level(), 1).unwrap();
    let (rows, rows_sx, cols_sx) = coboundary_rows(c.base(), n, false);
    check_size(rows.len(), cols_sx.count(), limits)?;
    let target = c.at_level(level)?;
    let mut args = vec![0; n];
    let mut sel_rows = Vec::new();
    let mut rhs = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let x = rows_sx.decode(r, &mut args);
        if args.contains(&0) {
            sel_rows.push(row.clone());
            rhs.push(target.raw(x, &args));
        }
    }
    let sol = solve_mod(cols_sx.count(), &reduce_rows(&sel_rows, level), &rhs, level)
        .ok_or(Error::InternalVerificationFailed("cocycle could not be normalized".into()))?;
    let b = Cochain::from_level_values(c.base().clone(), n - 1, level, sol)?;
    let normal = c.sub(&b.delta())?;
    if !normal.is_normalized() {
        return Err(Error::InternalVerificationFailed("normalization left degenerate values".into()));
    }
    Ok((normal, b))
}
