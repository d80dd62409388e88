use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

use super::{full_index, Base, Cochain};

/// A `K`-cochain of degree `i` whose values are cochains on `K // G`, where
/// `G` acts on `K` through a quotient map. `K` acts on the right on such
/// cochains by `(f . h)(k; ..) = f(h k; ..)`.
#[derive(Clone, Debug)]
pub struct KValuedCochain {
    k: Arc<FiniteGroup>,
    outer_degree: usize,
    components: Vec<Cochain>,
}

/// `(f . h)(k; ..) = f(h k; ..)`.
pub(crate) fn translate(f: &Cochain, k: &FiniteGroup, h: usize) -> Cochain {
    let per = f.values.len() / k.order();
    let mut values = Vec::with_capacity(f.values.len());
    for x in 0..k.order() {
        let y = k.mul(h, x);
        values.extend_from_slice(&f.values[y * per..(y + 1) * per]);
    }
    Cochain { base: f.base.clone(), degree: f.degree, level: f.level, values }
}

impl KValuedCochain {
    pub fn new(k: Arc<FiniteGroup>, outer_degree: usize, components: Vec<Cochain>) -> Result<Self> {
        if components.len() != k.order().pow(outer_degree as u32) {
            return Err(Error::Malformed("wrong number of components".into()));
        }
        let first = components.first().ok_or_else(|| Error::Malformed("no components".into()))?;
        let Base::Groupoid(a) = first.base() else { return Err(Error::DomainMismatch) };
        if a.points() != k.order() {
            return Err(Error::DomainMismatch);
        }
        for h in 0..k.order() {
            for x in 0..k.order() {
                for g in 0..a.group().order() {
                    if a.act(k.mul(h, x), g) != k.mul(h, a.act(x, g)) {
                        return Err(Error::InvalidAction("left translation is not equivariant".into()));
                    }
                }
            }
        }
        if components.iter().any(|c| c.base() != first.base() || c.degree() != first.degree()) {
            return Err(Error::DomainMismatch);
        }
        Ok(KValuedCochain { k, outer_degree, components })
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    pub fn outer_degree(&self) -> usize {
        self.outer_degree
    }

    pub fn inner_degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn component(&self, args: &[usize]) -> &Cochain {
        &self.components[full_index(self.k.order(), 0, args)]
    }

    pub fn components(&self) -> &[Cochain] {
        &self.components
    }

    /// The `K`-differential:
    /// `(dF)(k1..k_{i+1}) = F(k2..) + sum_r (-1)^r F(.., k_r k_{r+1}, ..) + (-1)^{i+1} F(k1..k_i) . k_{i+1}`.
    pub fn d_k(&self) -> Result<KValuedCochain> {
        let i = self.outer_degree;
        let nk = self.k.order();
        let count = nk.pow(i as u32 + 1);
        let mut out = Vec::with_capacity(count);
        let mut args = vec![0usize; i + 1];
        let mut face = vec![0usize; i];
        for idx in 0..count {
            let mut t = idx;
            for slot in args.iter_mut().rev() {
                *slot = t % nk;
                t /= nk;
            }
            let mut acc = self.component(&args[1..]).clone();
            for r in 1..=i {
                face.clear();
                face.extend_from_slice(&args[..r - 1]);
                face.push(self.k.mul(args[r - 1], args[r]));
                face.extend_from_slice(&args[r + 1..]);
                let term = self.component(&face);
                acc = if r % 2 == 1 { acc.sub(term)? } else { acc.add(term)? };
            }
            let last = translate(self.component(&args[..i]), &self.k, args[i]);
            acc = if (i + 1) % 2 == 1 { acc.sub(&last)? } else { acc.add(&last)? };
            out.push(acc);
        }
        Ok(KValuedCochain { k: self.k.clone(), outer_degree: i + 1, components: out })
    }

    /// Componentwise groupoid differential.
    pub fn inner_delta(&self) -> KValuedCochain {
        KValuedCochain {
            k: self.k.clone(),
            outer_degree: self.outer_degree,
            components: self.components.iter().map(|c| c.delta()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

impl PartialEq for KValuedCochain {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.outer_degree == other.outer_degree && self.components == other.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CircleValue;
    use crate::cochain::ActionGroupoid;

    #[test]
    fn d_k_squared_vanishes() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        // K = G acting on itself.
        let a = Arc::new(ActionGroupoid::right_regular(g.clone()));
        let mut seed = 9u64;
        let comps: Vec<Cochain> = (0..6)
            .map(|_| {
                Cochain::from_fn(Base::Groupoid(a.clone()), 1, |x, args| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                    CircleValue::new((seed >> 40) + (x + args[0]) as u64, 6)
                })
                .unwrap()
            })
            .collect();
        let f = KValuedCochain::new(g.clone(), 1, comps).unwrap();
        assert!(f.d_k().unwrap().d_k().unwrap().is_zero());
        // degree 0: (d beta)(h) = beta - beta . h
        let beta = f.components()[2].clone();
        let b = KValuedCochain::new(g.clone(), 0, vec![beta.clone()]).unwrap();
        let db = b.d_k().unwrap();
        for h in 0..6 {
            assert_eq!(*db.component(&[h]), beta.sub(&translate(&beta, &g, h)).unwrap());
        }
    }
}
