use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::circle::pairing;
use crate::error::{Error, Result};
use crate::group::{ExtensionCocycle, FiniteGroup};
use crate::linalg::solve_mod;

use super::solve::{check_size, coboundary_rows, reduce_rows};
use super::{Base, Cochain, Limits, Simplices};

/// A cochain on a finite group with values in a finite abelian group with
/// trivial action. Values are coordinate tuples, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCochain {
    group: Arc<FiniteGroup>,
    module: FiniteAbelianGroup,
    degree: usize,
    values: Vec<u64>,
}

impl ModuleCochain {
    pub fn zero(group: Arc<FiniteGroup>, module: FiniteAbelianGroup, degree: usize) -> Self {
        let len = group.order().pow(degree as u32) * module.rank();
        ModuleCochain { group, module, degree, values: vec![0; len] }
    }

    pub fn from_fn(
        group: Arc<FiniteGroup>,
        module: FiniteAbelianGroup,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<u64>,
    ) -> Result<Self> {
        let base = Base::Group(group.clone());
        let sx = Simplices::new(&base, degree, false);
        let mut args = vec![0; degree];
        let mut values = Vec::with_capacity(sx.count() * module.rank());
        for i in 0..sx.count() {
            sx.decode(i, &mut args);
            let v = f(&args);
            if v.len() != module.rank() {
                return Err(Error::Malformed("module value has the wrong rank".into()));
            }
            values.extend(v.iter().zip(module.factors()).map(|(&x, &d)| x % d));
        }
        Ok(ModuleCochain { group, module, degree, values })
    }

    pub fn from_extension_cocycle(f: &ExtensionCocycle) -> Self {
        let s = f.s.clone();
        ModuleCochain::from_fn(f.k.clone(), s.clone(), 2, |a| s.element(f.get(a[0], a[1]))).expect("shape")
    }

    pub fn to_extension_cocycle(&self) -> Result<ExtensionCocycle> {
        if self.degree != 2 {
            return Err(Error::DomainMismatch);
        }
        let n = self.group.order();
        let values = (0..n * n).map(|i| self.module.index(self.get(&[i / n, i % n]))).collect();
        Ok(ExtensionCocycle { s: self.module.clone(), k: self.group.clone(), values })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn module(&self) -> &FiniteAbelianGroup {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn offset(&self, args: &[usize]) -> usize {
        super::full_index(self.group.order(), 0, args) * self.module.rank()
    }

    pub fn get(&self, args: &[usize]) -> &[u64] {
        let o = self.offset(args);
        &self.values[o..o + self.module.rank()]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_normalized(&self) -> bool {
        let base = Base::Group(self.group.clone());
        let sx = Simplices::new(&base, self.degree, false);
        let mut args = vec![0; self.degree];
        (0..sx.count()).all(|i| {
            sx.decode(i, &mut args);
            args.iter().all(|&g| g != 0) || self.get(&args).iter().all(|&v| v == 0)
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.group != other.group || self.module != other.module || self.degree != other.degree {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let r = self.module.rank();
        let mut out = self.clone();
        for (i, (x, &y)) in out.values.iter_mut().zip(&other.values).enumerate() {
            let d = self.module.factors()[i % r];
            *x = (*x + y) % d;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let r = self.module.rank();
        let mut out = self.clone();
        for (i, x) in out.values.iter_mut().enumerate() {
            let d = self.module.factors()[i % r];
            *x = (d - *x) % d;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Integer coordinate `i` of every value.
    fn component(&self, i: usize) -> Vec<u64> {
        let r = self.module.rank();
        self.values.iter().skip(i).step_by(r).copied().collect()
    }

    fn delta_component_at(&self, comp: &[u64], d: u64, args: &[usize], scratch: &mut Vec<usize>) -> u64 {
        let g = &self.group;
        let n = self.degree;
        let ord = g.order();
        let at = |a: &[usize]| comp[super::full_index(ord, 0, a)];
        let mut acc = at(&args[1..]) as i128;
        for i in 1..=n {
            scratch.clear();
            scratch.extend_from_slice(&args[..i - 1]);
            scratch.push(g.mul(args[i - 1], args[i]));
            scratch.extend_from_slice(&args[i + 1..]);
            let v = at(scratch) as i128;
            acc += if i % 2 == 1 { -v } else { v };
        }
        let v = at(&args[..n]) as i128;
        acc += if (n + 1) % 2 == 1 { -v } else { v };
        acc.rem_euclid(d as i128) as u64
    }

    pub fn delta(&self) -> ModuleCochain {
        let r = self.module.rank();
        let base = Base::Group(self.group.clone());
        let sx = Simplices::new(&base, self.degree + 1, false);
        let mut values = vec![0u64; sx.count() * r];
        let mut args = vec![0; self.degree + 1];
        let mut scratch = Vec::new();
        for (i, &d) in self.module.factors().iter().enumerate() {
            let comp = self.component(i);
            for s in 0..sx.count() {
                sx.decode(s, &mut args);
                values[s * r + i] = self.delta_component_at(&comp, d, &args, &mut scratch);
            }
        }
        ModuleCochain { group: self.group.clone(), module: self.module.clone(), degree: self.degree + 1, values }
    }

    pub fn cocycle_violation(&self) -> Option<Vec<usize>> {
        let base = Base::Group(self.group.clone());
        let sx = Simplices::new(&base, self.degree + 1, false);
        let comps: Vec<Vec<u64>> = (0..self.module.rank()).map(|i| self.component(i)).collect();
        let mut args = vec![0; self.degree + 1];
        let mut scratch = Vec::new();
        for s in 0..sx.count() {
            sx.decode(s, &mut args);
            for (comp, &d) in comps.iter().zip(self.module.factors()) {
                if self.delta_component_at(comp, d, &args, &mut scratch) != 0 {
                    return Some(args.clone());
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }

    /// Applies a homomorphism of coefficient groups given on tuple indices.
    pub fn map_values(&self, target: &FiniteAbelianGroup, map: &[usize]) -> ModuleCochain {
        let src = &self.module;
        ModuleCochain::from_fn(self.group.clone(), target.clone(), self.degree, |a| {
            target.element(map[src.index(self.get(a))])
        })
        .expect("shape")
    }

    /// The Q/Z-valued cochain `rho o F` for the character of `module` with
    /// dual coordinates `t`.
    pub fn evaluate(&self, t: &[u64]) -> Result<Cochain> {
        let m = &self.module;
        Cochain::from_fn(Base::Group(self.group.clone()), self.degree, |_, a| pairing(m, t, self.get(a)))
    }

    /// Solves `d b = self` coordinatewise; normalized input gives normalized `b`.
    pub fn solve_coboundary(&self, limits: &Limits) -> Result<ModuleCochain> {
        let n = self.degree;
        if n == 0 {
            return Err(Error::Unsupported("degree-0 cochains are not coboundaries".into()));
        }
        if let Some(w) = self.cocycle_violation() {
            return Err(Error::NotACocycle { witness: w });
        }
        let base = Base::Group(self.group.clone());
        let normalized = self.is_normalized();
        let (rows, rows_sx, cols_sx) = coboundary_rows(&base, n, normalized);
        check_size(rows.len(), cols_sx.count(), limits)?;
        let full_rows = Simplices::new(&base, n, false);
        let full_cols = Simplices::new(&base, n - 1, false);
        let r = self.module.rank();
        let mut out = ModuleCochain::zero(self.group.clone(), self.module.clone(), n - 1);
        let mut args = vec![0; n];
        let mut cargs = vec![0; n - 1];
        for (i, &d) in self.module.factors().iter().enumerate() {
            let comp = self.component(i);
            let rhs: Vec<u64> = (0..rows_sx.count())
                .map(|k| {
                    let x = rows_sx.decode(k, &mut args);
                    comp[full_rows.encode(x, &args).unwrap()]
                })
                .collect();
            let sol = solve_mod(cols_sx.count(), &reduce_rows(&rows, d), &rhs, d)
                .ok_or(Error::NoSolutionAtLevel { level: d })?;
            for (j, &v) in sol.iter().enumerate() {
                let x = cols_sx.decode(j, &mut cargs);
                out.values[full_cols.encode(x, &cargs).unwrap() * r + i] = v;
            }
        }
        if out.delta() != *self {
            return Err(Error::InternalVerificationFailed("module solver output is not a primitive".into()));
        }
        Ok(out)
    }

    pub fn classes_equal(&self, other: &ModuleCochain, limits: &Limits) -> Result<bool> {
        self.same_shape(other)?;
        for c in [self, other] {
            if let Some(w) = c.cocycle_violation() {
                return Err(Error::NotACocycle { witness: w });
            }
        }
        match self.sub(other)?.solve_coboundary(limits) {
            Ok(_) => Ok(true),
            Err(Error::NoSolutionAtLevel { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

/// `(k1..k_{p+q}) -> Fhat(k1..kp)(F(k_{p+1}..k_{p+q}))` for `Fhat` valued in the
/// dual of the coefficient group of `F`.
pub fn evaluation_cup(fhat: &ModuleCochain, f: &ModuleCochain) -> Result<Cochain> {
    if fhat.group != f.group || fhat.module != f.module {
        return Err(Error::DomainMismatch);
    }
    let p = fhat.degree;
    let s = &f.module;
    Cochain::from_fn(Base::Group(f.group.clone()), p + f.degree, |_, a| pairing(s, fhat.get(&a[..p]), f.get(&a[p..])))
}
