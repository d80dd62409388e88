//! Multiplicative gerbes on finite groups and their representations on
//! finite `G`-sets.
//!
//! A gerbe is a normalized 3-cocycle `alpha` on `G`. A representation on a
//! right `G`-set `N` is a 2-cochain `beta` on `N // G` with
//! `d beta = pi^* alpha`.

use std::sync::Arc;

use crate::cochain::{normalized_representative, solve_coboundary, ActionGroupoid, Base, Cochain, Limits};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
pub struct MultiplicativeGerbe {
    group: Arc<FiniteGroup>,
    alpha: Cochain,
}

/// Validates `alpha` and stores a normalized representative of its class.
pub fn make_gerbe(group: Arc<FiniteGroup>, alpha: Cochain, limits: &Limits) -> Result<MultiplicativeGerbe> {
    if alpha.degree() != 3 || *alpha.base() != Base::Group(group.clone()) {
        return Err(Error::DomainMismatch);
    }
    let (alpha, _) = normalized_representative(&alpha, limits)?;
    Ok(MultiplicativeGerbe { group, alpha })
}

impl MultiplicativeGerbe {
    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let alpha = Cochain::zero(Base::Group(group.clone()), 3);
        MultiplicativeGerbe { group, alpha }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn alpha(&self) -> &Cochain {
        &self.alpha
    }
}

#[derive(Clone, Debug)]
pub struct GerbeRepresentation {
    pub gerbe: MultiplicativeGerbe,
    pub space: Arc<ActionGroupoid>,
    pub beta: Cochain,
}

impl GerbeRepresentation {
    pub fn new(gerbe: MultiplicativeGerbe, space: Arc<ActionGroupoid>, beta: Cochain) -> Result<Self> {
        if **space.group() != *gerbe.group || beta.degree() != 2 || *beta.base() != Base::Groupoid(space.clone()) {
            return Err(Error::DomainMismatch);
        }
        let target = gerbe.alpha.pullback_to_groupoid(&space)?;
        let diff = beta.delta().sub(&target)?;
        if let Some((x, args, _)) = diff.entries().into_iter().next() {
            let mut w = vec![x];
            w.extend(args);
            return Err(Error::RepresentationFails { witness: w });
        }
        Ok(GerbeRepresentation { gerbe, space, beta })
    }
}

/// `G` acting on itself with `beta(k; g1, g2) = alpha(k, g1, g2)`.
pub fn canonical_representation(gerbe: &MultiplicativeGerbe) -> GerbeRepresentation {
    let space = Arc::new(ActionGroupoid::right_regular(gerbe.group.clone()));
    let alpha = &gerbe.alpha;
    let beta = Cochain::from_fn(Base::Groupoid(space.clone()), 2, |k, a| alpha.get(0, &[k, a[0], a[1]]))
        .expect("same level as alpha");
    GerbeRepresentation { gerbe: gerbe.clone(), space, beta }
}

/// A `beta` with `d beta = pi^* alpha` on `N // G`, or `None` when there is
/// none. The search runs at the default level, which is complete.
pub fn representation_exists(
    gerbe: &MultiplicativeGerbe,
    space: &Arc<ActionGroupoid>,
    limits: &Limits,
) -> Result<Option<Cochain>> {
    if **space.group() != *gerbe.group {
        return Err(Error::InvalidAction("action is by a different group".into()));
    }
    let target = gerbe.alpha.pullback_to_groupoid(space)?;
    if target.is_zero() {
        return Ok(Some(Cochain::zero(Base::Groupoid(space.clone()), 2)));
    }
    match solve_coboundary(&target, limits) {
        Ok(beta) => Ok(Some(beta)),
        Err(Error::NoSolutionAtLevel { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Number of isomorphism classes of representations on `N`: zero when none
/// exists, otherwise `|H^2(N // G, Q/Z)|`, since the classes form a torsor
/// under that group.
pub fn count_representation_classes(
    gerbe: &MultiplicativeGerbe,
    space: &Arc<ActionGroupoid>,
    limits: &Limits,
) -> Result<u64> {
    if representation_exists(gerbe, space, limits)?.is_none() {
        return Ok(0);
    }
    crate::cochain::groupoid_h2_order(space, limits)
}

/// `(F, gamma)` from `source` to `target` with `beta - F^* beta' = d gamma`.
#[derive(Clone, Debug)]
pub struct RepMorphism {
    pub source: GerbeRepresentation,
    pub target: GerbeRepresentation,
    pub map: Vec<usize>,
    pub gamma: Cochain,
}

pub fn validate_rep_morphism(m: &RepMorphism) -> Result<()> {
    let (a, b) = (&m.source.space, &m.target.space);
    if a.group() != b.group() || m.map.len() != a.points() || m.map.iter().any(|&y| y >= b.points()) {
        return Err(Error::DomainMismatch);
    }
    for x in 0..a.points() {
        for g in 0..a.group().order() {
            if m.map[a.act(x, g)] != b.act(m.map[x], g) {
                return Err(Error::NotEquivariant { point: x, element: g });
            }
        }
    }
    if m.gamma.degree() != 1 || *m.gamma.base() != Base::Groupoid(a.clone()) {
        return Err(Error::DomainMismatch);
    }
    let pulled = m.target.beta.pullback_along_points(a, &m.map)?;
    let diff = m.source.beta.sub(&pulled)?.sub(&m.gamma.delta())?;
    if let Some((x, args, _)) = diff.entries().into_iter().next() {
        let mut w = vec![x];
        w.extend(args);
        return Err(Error::MorphismFails { witness: w });
    }
    Ok(())
}

pub fn identity_morphism(r: &GerbeRepresentation) -> RepMorphism {
    RepMorphism {
        source: r.clone(),
        target: r.clone(),
        map: (0..r.space.points()).collect(),
        gamma: Cochain::zero(Base::Groupoid(r.space.clone()), 1),
    }
}

/// `second o first`, with `gamma = gamma1 + F1^* gamma2`.
pub fn compose_morphisms(first: &RepMorphism, second: &RepMorphism) -> Result<RepMorphism> {
    if first.target.space != second.source.space {
        return Err(Error::DomainMismatch);
    }
    let map = first.map.iter().map(|&y| second.map[y]).collect();
    let gamma = first.gamma.add(&second.gamma.pullback_along_points(&first.source.space, &first.map)?)?;
    Ok(RepMorphism { source: first.source.clone(), target: second.target.clone(), map, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CircleValue;

    fn nontrivial_on_z2() -> MultiplicativeGerbe {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = Cochain::from_fn(Base::Group(g.clone()), 3, |_, x| {
            if x == [1, 1, 1] { CircleValue::new(1, 2) } else { CircleValue::zero() }
        })
        .unwrap();
        make_gerbe(g, a, &Limits::default()).unwrap()
    }

    #[test]
    fn canonical_representation_satisfies_its_equation() {
        let gerbe = nontrivial_on_z2();
        let r = canonical_representation(&gerbe);
        assert!(GerbeRepresentation::new(gerbe, r.space.clone(), r.beta.clone()).is_ok());
    }

    #[test]
    fn point_representations_exist_iff_class_vanishes() {
        let gerbe = nontrivial_on_z2();
        let pt = Arc::new(ActionGroupoid::point(gerbe.group().clone()));
        assert!(representation_exists(&gerbe, &pt, &Limits::default()).unwrap().is_none());
        let triv = MultiplicativeGerbe::trivial(gerbe.group().clone());
        assert!(representation_exists(&triv, &pt, &Limits::default()).unwrap().is_some());
        assert_eq!(count_representation_classes(&triv, &pt, &Limits::default()).unwrap(), 1);
    }

    #[test]
    fn morphisms_compose() {
        let gerbe = nontrivial_on_z2();
        let r = canonical_representation(&gerbe);
        let id = identity_morphism(&r);
        validate_rep_morphism(&id).unwrap();
        let c = compose_morphisms(&id, &id).unwrap();
        validate_rep_morphism(&c).unwrap();
        let mut bad = id.clone();
        bad.map = vec![0, 0];
        assert!(matches!(validate_rep_morphism(&bad), Err(Error::NotEquivariant { .. })));
    }
}
