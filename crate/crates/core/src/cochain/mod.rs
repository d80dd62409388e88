//! Inhomogeneous cochains with values in Q/Z on finite groups and on action
//! groupoids `N // G`.
//!
//! Conventions. For a group, `(df)(g1..g_{n+1}) = f(g2..g_{n+1})
//! + sum_{i=1}^{n} (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g1..g_n)`.
//! For a right `G`-set the first term becomes `f(x.g1; g2..)` and every other
//! term keeps the point `x`. A cochain is normalized when it vanishes as soon
//! as one group argument is the identity; the point is never constrained.

mod cohomology;
pub(crate) mod kvalued;
mod module;
mod solve;
mod transfer;

use std::sync::Arc;

use crate::arith::checked_lcm;
use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};

pub use cohomology::{cohomology_group, groupoid_h2_order, module_cohomology, CohomologyGroup, ModuleCohomology};
pub use kvalued::KValuedCochain;
pub use module::{evaluation_cup, ModuleCochain};
pub use solve::{classes_equal, normalized_representative, solve_coboundary, solve_coboundary_direct};

/// Caps and knobs shared by the solvers.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Extra factor applied to the default solving level.
    pub level_multiplier: u64,
    /// Largest number of equations or unknowns in one linear system.
    pub max_matrix_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { level_multiplier: 1, max_matrix_dim: 2_000_000 }
    }
}

/// A finite right `G`-set, stored as its action table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionGroupoid {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<u32>,
}

impl ActionGroupoid {
    /// `table[x][g] = x . g`. Checks `x . e = x` and `(x . g) . h = x . (g h)`.
    pub fn new(group: Arc<FiniteGroup>, table: &[Vec<usize>]) -> Result<Self> {
        let n = group.order();
        let points = table.len();
        if points == 0 {
            return Err(Error::InvalidAction("empty set of points".into()));
        }
        let mut action = vec![0u32; points * n];
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAction(format!("row {x} has the wrong length")));
            }
            for (g, &y) in row.iter().enumerate() {
                if y >= points {
                    return Err(Error::InvalidAction(format!("point {y} out of range")));
                }
                action[x * n + g] = y as u32;
            }
        }
        let a = ActionGroupoid { group, points, action };
        for x in 0..points {
            if a.act(x, 0) != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
            for g in 0..n {
                for h in 0..n {
                    if a.act(a.act(x, g), h) != a.act(x, a.group.mul(g, h)) {
                        return Err(Error::InvalidAction(format!(
                            "not a right action at point {x}, elements {g}, {h}"
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn point(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        ActionGroupoid { group, points: 1, action: vec![0; n] }
    }

    /// `G` acting on itself by right multiplication.
    pub fn right_regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let action = (0..n * n).map(|i| group.mul(i / n, i % n) as u32).collect();
        ActionGroupoid { group, points: n, action }
    }

    /// `K` with `G` acting through `pi: G -> K` by right multiplication.
    pub fn through_quotient(group: Arc<FiniteGroup>, k: &FiniteGroup, pi: &[usize]) -> Self {
        let n = group.order();
        let points = k.order();
        let action = (0..points * n).map(|i| k.mul(i / n, pi[i % n]) as u32).collect();
        ActionGroupoid { group, points, action }
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.action[x * self.group.order() + g] as usize
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.points).map(|x| (0..self.group.order()).map(|g| self.act(x, g)).collect()).collect()
    }

    /// Orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(x, g)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(x, g) == x).collect()
    }
}

/// Where a cochain lives.
#[derive(Clone, Debug)]
pub enum Base {
    Group(Arc<FiniteGroup>),
    Groupoid(Arc<ActionGroupoid>),
}

impl PartialEq for Base {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Base::Group(a), Base::Group(b)) => Arc::ptr_eq(a, b) || a == b,
            (Base::Groupoid(a), Base::Groupoid(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Base {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Base::Group(g) => g,
            Base::Groupoid(a) => &a.group,
        }
    }

    pub fn points(&self) -> usize {
        match self {
            Base::Group(_) => 1,
            Base::Groupoid(a) => a.points,
        }
    }

    pub fn is_groupoid(&self) -> bool {
        matches!(self, Base::Groupoid(_))
    }

    /// `x . g`; a group base has the single point 0.
    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        match self {
            Base::Group(_) => 0,
            Base::Groupoid(a) => a.act(x, g),
        }
    }

    /// Order used for the default solving level.
    pub fn size(&self) -> u64 {
        self.group().order() as u64
    }
}

/// Enumerates `(point, g1..gn)` either over all tuples or over the
/// normalized ones (no identity argument).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Simplices {
    pub order: usize,
    pub points: usize,
    pub degree: usize,
    pub normalized: bool,
}

impl Simplices {
    pub fn new(base: &Base, degree: usize, normalized: bool) -> Self {
        Simplices { order: base.group().order(), points: base.points(), degree, normalized }
    }

    fn radix(&self) -> usize {
        if self.normalized {
            self.order - 1
        } else {
            self.order
        }
    }

    pub fn count(&self) -> usize {
        self.points * self.radix().pow(self.degree as u32)
    }

    pub fn checked_count(&self) -> Option<usize> {
        self.radix().checked_pow(self.degree as u32)?.checked_mul(self.points)
    }

    pub fn encode(&self, x: usize, args: &[usize]) -> Option<usize> {
        let r = self.radix();
        let mut idx = x;
        for &g in args {
            let d = if self.normalized {
                if g == 0 {
                    return None;
                }
                g - 1
            } else {
                g
            };
            idx = idx * r + d;
        }
        Some(idx)
    }

    pub fn decode(&self, mut idx: usize, args: &mut [usize]) -> usize {
        let r = self.radix();
        for slot in args.iter_mut().rev() {
            let d = idx % r;
            idx /= r;
            *slot = if self.normalized { d + 1 } else { d };
        }
        idx
    }
}

/// A Q/Z-valued cochain stored densely over all argument tuples, with every
/// value written over a common level: the value at a tuple is
/// `values[i] / level`.
#[derive(Clone, Debug)]
pub struct Cochain {
    base: Base,
    degree: usize,
    level: u64,
    values: Vec<u64>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        if self.base != other.base || self.degree != other.degree {
            return false;
        }
        let Some(l) = checked_lcm(self.level, other.level) else { return false };
        let (fa, fb) = (l / self.level, l / other.level);
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| a as u128 * fa as u128 == b as u128 * fb as u128)
    }
}

pub(crate) fn full_index(order: usize, x: usize, args: &[usize]) -> usize {
    args.iter().fold(x, |acc, &g| acc * order + g)
}

impl Cochain {
    pub fn zero(base: Base, degree: usize) -> Cochain {
        let len = Simplices::new(&base, degree, false).count();
        Cochain { base, degree, level: 1, values: vec![0; len] }
    }

    /// Raw constructor: `values[i] / level` over all tuples in full order.
    pub fn from_level_values(base: Base, degree: usize, level: u64, values: Vec<u64>) -> Result<Cochain> {
        let len = Simplices::new(&base, degree, false).count();
        if values.len() != len || level == 0 {
            return Err(Error::Malformed(format!("expected {len} values at a positive level")));
        }
        let values = values.into_iter().map(|v| v % level).collect();
        Ok(Cochain { base, degree, level, values })
    }

    /// Builds from a function of `(point, args)`.
    pub fn from_fn(
        base: Base,
        degree: usize,
        mut f: impl FnMut(usize, &[usize]) -> CircleValue,
    ) -> Result<Cochain> {
        let sx = Simplices::new(&base, degree, false);
        let mut args = vec![0; degree];
        let mut vals = Vec::with_capacity(sx.count());
        for i in 0..sx.count() {
            let x = sx.decode(i, &mut args);
            vals.push(f(x, &args));
        }
        Self::from_circle_values(base, degree, &vals)
    }

    pub fn from_circle_values(base: Base, degree: usize, vals: &[CircleValue]) -> Result<Cochain> {
        let mut level = 1u64;
        for v in vals {
            let d = v
                .small_denominator()
                .ok_or_else(|| Error::Unsupported("denominator beyond 64 bits in a cochain".into()))?;
            level = checked_lcm(level, d)
                .ok_or_else(|| Error::Unsupported("common level beyond 64 bits".into()))?;
        }
        let values = vals.iter().map(|v| v.at_level(level).unwrap()).collect();
        Self::from_level_values(base, degree, level, values)
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The common level the values are written over (not necessarily minimal).
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn raw_values(&self) -> &[u64] {
        &self.values
    }

    /// Least common multiple of the actual denominators.
    pub fn minimal_level(&self) -> u64 {
        let g = self.values.iter().fold(self.level, |acc, &v| crate::arith::gcd(acc, v));
        self.level / g
    }

    pub fn reduced(mut self) -> Cochain {
        let m = self.minimal_level();
        let f = self.level / m;
        for v in self.values.iter_mut() {
            *v /= f;
        }
        self.level = m;
        self
    }

    pub fn get(&self, x: usize, args: &[usize]) -> CircleValue {
        CircleValue::new(self.values[full_index(self.base.group().order(), x, args)], self.level)
    }

    #[inline]
    pub(crate) fn raw(&self, x: usize, args: &[usize]) -> u64 {
        self.values[full_index(self.base.group().order(), x, args)]
    }

    /// Nonzero entries as `(point, args, value)`, in lexicographic order.
    pub fn entries(&self) -> Vec<(usize, Vec<usize>, CircleValue)> {
        let sx = Simplices::new(&self.base, self.degree, false);
        let mut args = vec![0; self.degree];
        let mut out = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            if v != 0 {
                let x = sx.decode(i, &mut args);
                out.push((x, args.clone(), CircleValue::new(v, self.level)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_normalized(&self) -> bool {
        let sx = Simplices::new(&self.base, self.degree, false);
        let mut args = vec![0; self.degree];
        self.values.iter().enumerate().all(|(i, &v)| {
            v == 0 || {
                sx.decode(i, &mut args);
                args.iter().all(|&g| g != 0)
            }
        })
    }

    /// Rewrites the values over a multiple of the current level.
    /// The same cochain written over `level`, which must be a multiple of
    /// [`Self::minimal_level`].
    pub fn at_level(&self, level: u64) -> Result<Cochain> {
        if level == 0 {
            return Err(Error::Unsupported("level 0".into()));
        }
        if !level.is_multiple_of(self.level) {
            let m = self.minimal_level();
            if !level.is_multiple_of(m) {
                return Err(Error::Unsupported(format!("level {level} is not a multiple of {m}")));
            }
            return self.clone().reduced().at_level(level);
        }
        let f = level / self.level;
        let values = self.values.iter().map(|&v| ((v as u128 * f as u128) % level as u128) as u64).collect();
        Ok(Cochain { base: self.base.clone(), degree: self.degree, level, values })
    }

    fn common(&self, other: &Cochain) -> Result<(Cochain, Cochain)> {
        if self.base != other.base || self.degree != other.degree {
            return Err(Error::DomainMismatch);
        }
        let l = checked_lcm(self.level, other.level)
            .ok_or_else(|| Error::Unsupported("common level beyond 64 bits".into()))?;
        Ok((self.at_level(l)?, other.at_level(l)?))
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        let (mut a, b) = self.common(other)?;
        let l = a.level;
        for (x, &y) in a.values.iter_mut().zip(&b.values) {
            *x = crate::arith::add_mod(*x, y, l);
        }
        Ok(a)
    }

    pub fn neg(&self) -> Cochain {
        let mut a = self.clone();
        for v in a.values.iter_mut() {
            *v = crate::arith::neg_mod(*v, a.level);
        }
        a
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let mut a = self.clone();
        let l = a.level as i128;
        for v in a.values.iter_mut() {
            *v = (*v as i128 * k as i128).rem_euclid(l) as u64;
        }
        a
    }

    /// Numerator at this cochain's level of `(d self)(x; args)`.
    fn delta_raw_at(&self, x: usize, args: &[usize], scratch: &mut Vec<usize>) -> u64 {
        let g = self.base.group();
        let n = self.degree;
        let l = self.level;
        let mut acc: u128 = 0;
        let neg = |v: u64| if v == 0 { 0 } else { l - v };
        // first face
        acc += self.raw(self.base.act(x, args[0]), &args[1..]) as u128;
        for i in 1..=n {
            scratch.clear();
            scratch.extend_from_slice(&args[..i - 1]);
            scratch.push(g.mul(args[i - 1], args[i]));
            scratch.extend_from_slice(&args[i + 1..]);
            let v = self.raw(x, scratch);
            acc += if i % 2 == 1 { neg(v) } else { v } as u128;
        }
        let v = self.raw(x, &args[..n]);
        acc += if (n + 1) % 2 == 1 { neg(v) } else { v } as u128;
        (acc % l as u128) as u64
    }

    pub fn delta(&self) -> Cochain {
        let sx = Simplices::new(&self.base, self.degree + 1, false);
        let mut args = vec![0; self.degree + 1];
        let mut scratch = Vec::with_capacity(self.degree + 1);
        let values = (0..sx.count())
            .map(|i| {
                let x = sx.decode(i, &mut args);
                self.delta_raw_at(x, &args, &mut scratch)
            })
            .collect();
        Cochain { base: self.base.clone(), degree: self.degree + 1, level: self.level, values }
    }

    /// First tuple `(point, args...)` in lexicographic order where the
    /// differential does not vanish; the point is omitted on a group base.
    pub fn cocycle_violation(&self) -> Option<Vec<usize>> {
        let sx = Simplices::new(&self.base, self.degree + 1, false);
        let mut args = vec![0; self.degree + 1];
        let mut scratch = Vec::with_capacity(self.degree + 1);
        for i in 0..sx.count() {
            let x = sx.decode(i, &mut args);
            if self.delta_raw_at(x, &args, &mut scratch) != 0 {
                let mut w = Vec::with_capacity(self.degree + 2);
                if self.base.is_groupoid() {
                    w.push(x);
                }
                w.extend_from_slice(&args);
                return Some(w);
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }

    /// `phi^* f` for a group cochain `f` on the target of `phi`.
    pub fn pullback(&self, phi: &GroupHom) -> Result<Cochain> {
        match &self.base {
            Base::Group(g) if **g == *phi.target => {}
            _ => return Err(Error::DomainMismatch),
        }
        let n = self.degree;
        let mut img = vec![0; n];
        let base = Base::Group(phi.source.clone());
        let sx = Simplices::new(&base, n, false);
        let mut args = vec![0; n];
        let values = (0..sx.count())
            .map(|i| {
                sx.decode(i, &mut args);
                for (s, &a) in img.iter_mut().zip(&args) {
                    *s = phi.apply(a);
                }
                self.raw(0, &img)
            })
            .collect();
        Ok(Cochain { base, degree: n, level: self.level, values })
    }

    /// Pulls a group cochain back to an action groupoid over the same group
    /// by forgetting the point.
    pub fn pullback_to_groupoid(&self, groupoid: &Arc<ActionGroupoid>) -> Result<Cochain> {
        match &self.base {
            Base::Group(g) if **g == *groupoid.group => {}
            _ => return Err(Error::DomainMismatch),
        }
        let mut values = Vec::with_capacity(groupoid.points * self.values.len());
        for _ in 0..groupoid.points {
            values.extend_from_slice(&self.values);
        }
        Ok(Cochain { base: Base::Groupoid(groupoid.clone()), degree: self.degree, level: self.level, values })
    }

    /// Restriction of a group cochain to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Cochain> {
        let Base::Group(_) = &self.base else { return Err(Error::DomainMismatch) };
        let phi = GroupHom {
            source: sub.group.clone(),
            target: self.base.group().clone(),
            images: sub.embedding.clone(),
        };
        self.pullback(&phi)
    }

    /// Restriction of a groupoid cochain to the loops at `x`, as a cochain
    /// on the stabilizer.
    pub fn restrict_to_loops(&self, x: usize, stab: &Subgroup) -> Result<Cochain> {
        let base = Base::Group(stab.group.clone());
        let sx = Simplices::new(&base, self.degree, false);
        let mut args = vec![0; self.degree];
        let mut img = vec![0; self.degree];
        let values = (0..sx.count())
            .map(|i| {
                sx.decode(i, &mut args);
                for (s, &a) in img.iter_mut().zip(&args) {
                    *s = stab.embedding[a];
                }
                self.raw(x, &img)
            })
            .collect();
        Ok(Cochain { base, degree: self.degree, level: self.level, values })
    }

    /// Transport along a map of right `G`-sets `F: N -> N'`: `(F^* f)(n; ..) = f(F(n); ..)`.
    pub fn pullback_along_points(&self, source: &Arc<ActionGroupoid>, f: &[usize]) -> Result<Cochain> {
        let Base::Groupoid(_) = &self.base else { return Err(Error::DomainMismatch) };
        let per = self.values.len() / self.base.points();
        let mut values = Vec::with_capacity(source.points * per);
        for x in 0..source.points {
            values.extend_from_slice(&self.values[f[x] * per..(f[x] + 1) * per]);
        }
        Ok(Cochain { base: Base::Groupoid(source.clone()), degree: self.degree, level: self.level, values })
    }
}
