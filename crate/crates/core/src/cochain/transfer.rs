//! Solving on an action groupoid by transfer to the stabilizers.
//!
//! Each orbit of `N // G` is equivalent to the one-object groupoid of the
//! stabilizer `H` of its least point `x0`. Pick `t(x)` in `G` with
//! `x0 . t(x) = x` and `t(x0) = e`, and set
//! `s(x, g) = t(x) g t(x g)^{-1}`, an element of `H`. The retraction `R` sends
//! an arrow `(x, g)` to the loop `s(x, g)`, and inclusion followed by `R` is
//! connected to the identity by the transformation `x -> t(x)^{-1}`. The
//! induced cochain homotopy is
//!
//! `(P f)(x0; g1..gn) = sum_i (-1)^i f(x0; g1..gi, t(xi)^{-1}, s(xi, g_{i+1}), .., s(x_{n-1}, gn))`
//!
//! with `xi = x0 . g1 .. gi`, and satisfies `dP + Pd = R^* I^* - id`. So if
//! `d b = I^* c` on `H`, then `R^* b - P c` is a primitive of `c`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

use super::solve::solve_direct_unchecked;
use super::{full_index, ActionGroupoid, Base, Cochain, Limits, Simplices};

pub(crate) struct OrbitData {
    pub orbit: Vec<usize>,
    pub base_point: usize,
    pub stabilizer: Subgroup,
    /// `t(x)` for points of the orbit, indexed by point.
    pub transport: Vec<usize>,
}

pub(crate) fn orbit_data(a: &ActionGroupoid) -> Result<Vec<OrbitData>> {
    let g = a.group();
    let mut out = Vec::new();
    for orbit in a.orbits() {
        let x0 = orbit[0];
        let mut transport = vec![usize::MAX; a.points()];
        for h in 0..g.order() {
            let y = a.act(x0, h);
            if transport[y] == usize::MAX {
                transport[y] = h;
            }
        }
        let stabilizer = g.subgroup(&a.stabilizer(x0))?;
        out.push(OrbitData { orbit, base_point: x0, stabilizer, transport });
    }
    Ok(out)
}

#[inline]
fn retract(g: &FiniteGroup, a: &ActionGroupoid, t: &[usize], x: usize, h: usize) -> usize {
    g.mul(g.mul(t[x], h), g.inv(t[a.act(x, h)]))
}

pub(crate) fn solve_on_groupoid(c: &Cochain, limits: &Limits) -> Result<Cochain> {
    let Base::Groupoid(a) = c.base() else { return Err(Error::DomainMismatch) };
    let a: &Arc<ActionGroupoid> = a;
    let g = a.group().clone();
    let n = c.degree();
    let ord = g.order();
    let mut level = c.level();
    let mut pieces: Vec<(OrbitData, Cochain)> = Vec::new();
    for od in orbit_data(a)? {
        let loops = c.restrict_to_loops(od.base_point, &od.stabilizer)?;
        let b = if loops.is_zero() {
            Cochain::zero(loops.base().clone(), n - 1)
        } else {
            solve_direct_unchecked(&loops, limits)?
        };
        level = crate::arith::checked_lcm(level, b.level())
            .ok_or_else(|| Error::Unsupported("common level beyond 64 bits".into()))?;
        pieces.push((od, b));
    }
    let cl = c.at_level(level)?;
    let m = n - 1;
    let full = Simplices::new(c.base(), m, false);
    let mut values = vec![0u64; full.count()];
    let mut args = vec![0usize; m];
    let mut pts = vec![0usize; m + 1];
    let mut sarg = vec![0usize; m];
    let mut term = vec![0usize; n];
    for (od, b) in &pieces {
        let b = b.at_level(level)?;
        let t = &od.transport;
        let hpos = &od.stabilizer.position;
        for &x0 in &od.orbit {
            for rest in 0..ord.pow(m as u32) {
                let idx = x0 * ord.pow(m as u32) + rest;
                full.decode(idx, &mut args);
                pts[0] = x0;
                for i in 0..m {
                    pts[i + 1] = a.act(pts[i], args[i]);
                    sarg[i] = retract(&g, a, t, pts[i], args[i]);
                }
                // R^* b
                let mut acc: u128 = {
                    let hargs: Vec<usize> = sarg.iter().map(|&s| hpos[s]).collect();
                    b.raw(0, &hargs) as u128
                };
                // - P c
                for i in 0..=m {
                    term[..i].copy_from_slice(&args[..i]);
                    term[i] = g.inv(t[pts[i]]);
                    term[i + 1..].copy_from_slice(&sarg[i..]);
                    let v = cl.values[full_index(ord, x0, &term)];
                    let signed = if i % 2 == 0 { level - v } else { v };
                    acc += (signed % level) as u128;
                }
                values[idx] = (acc % level as u128) as u64;
            }
        }
    }
    let beta = Cochain::from_level_values(c.base().clone(), m, level, values)?;
    if beta.delta() != *c {
        return Err(Error::InternalVerificationFailed("transferred primitive does not solve the equation".into()));
    }
    Ok(beta)
}
