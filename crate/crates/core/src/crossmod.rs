//! Finite crossed modules `phi: N -> E` with a right action of `E` on `N`,
//! and the pair of modules attached to a central extension with a
//! nondegenerate bilinear form on the fibre.

use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::circle::BilinearForm;
use crate::error::{Error, Result};
use crate::group::{abelian_invariants, CentralExtension, FiniteGroup, GroupHom};

#[derive(Clone, Debug)]
pub struct CrossedModule {
    pub n: Arc<FiniteGroup>,
    pub e: Arc<FiniteGroup>,
    pub phi: Vec<usize>,
    /// `action[e][n] = n^e`.
    pub action: Vec<Vec<usize>>,
}

impl CrossedModule {
    pub fn new(n: Arc<FiniteGroup>, e: Arc<FiniteGroup>, phi: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        if phi.len() != n.order()
            || phi.iter().any(|&x| x >= e.order())
            || action.len() != e.order()
            || action.iter().any(|row| row.len() != n.order() || row.iter().any(|&x| x >= n.order()))
        {
            return Err(Error::Malformed("crossed module tables have the wrong shape".into()));
        }
        Ok(CrossedModule { n, e, phi, action })
    }

    /// Conjugation action of `E` on a normal subgroup, with the inclusion.
    pub fn normal_inclusion(e: Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        if !e.is_normal(elements) {
            return Err(Error::NotSubgroup("not a normal subgroup".into()));
        }
        let sub = e.subgroup(elements)?;
        let action = (0..e.order())
            .map(|x| {
                (0..sub.group.order())
                    .map(|m| sub.position[e.mul(e.inv(x), e.mul(sub.embedding[m], x))])
                    .collect()
            })
            .collect();
        CrossedModule::new(sub.group.clone(), e, sub.embedding.clone(), action)
    }

    /// Checks, in order: `phi` is a homomorphism, the action is a right
    /// action by automorphisms, equivariance `phi(n^e) = e^-1 phi(n) e`, and
    /// the Peiffer identity `n^{phi(m)} = m^-1 n m`. Reports the first
    /// violation.
    pub fn validate(&self) -> Result<()> {
        let (n, e) = (&self.n, &self.e);
        let fail = |s: String| Err(Error::CrossedModuleAxiom(s));
        for a in 0..n.order() {
            for b in 0..n.order() {
                if self.phi[n.mul(a, b)] != e.mul(self.phi[a], self.phi[b]) {
                    return fail(format!("phi is not a homomorphism at ({a}, {b})"));
                }
            }
        }
        if (0..n.order()).any(|m| self.action[0][m] != m) {
            return fail("identity does not act trivially".into());
        }
        for x in 0..e.order() {
            let row = &self.action[x];
            for a in 0..n.order() {
                for b in 0..n.order() {
                    if row[n.mul(a, b)] != n.mul(row[a], row[b]) {
                        return fail(format!("element {x} does not act by a homomorphism at ({a}, {b})"));
                    }
                }
            }
            for y in 0..e.order() {
                let xy = e.mul(x, y);
                if let Some(m) = (0..n.order()).find(|&m| self.action[y][row[m]] != self.action[xy][m]) {
                    return fail(format!("not a right action at ({x}, {y}) on {m}"));
                }
            }
        }
        for x in 0..e.order() {
            for m in 0..n.order() {
                if self.phi[self.action[x][m]] != e.mul(e.inv(x), e.mul(self.phi[m], x)) {
                    return fail(format!("equivariance fails at (n = {m}, e = {x})"));
                }
            }
        }
        for m in 0..n.order() {
            for a in 0..n.order() {
                if self.action[self.phi[m]][a] != n.mul(n.inv(m), n.mul(a, m)) {
                    return fail(format!("Peiffer identity fails at (n = {a}, m = {m})"));
                }
            }
        }
        Ok(())
    }
}

/// `pi1 -> N -> E -> pi0`.
#[derive(Clone, Debug)]
pub struct FourTermSequence {
    pub pi1: FiniteAbelianGroup,
    /// Tuple index of `pi1` -> element of `N`.
    pub pi1_elements: Vec<usize>,
    pub pi0: Arc<FiniteGroup>,
    /// `E -> pi0`.
    pub projection: Vec<usize>,
}

pub fn four_term(x: &CrossedModule) -> Result<FourTermSequence> {
    x.validate()?;
    let (n, e) = (&x.n, &x.e);
    let kernel: Vec<usize> = (0..n.order()).filter(|&m| x.phi[m] == 0).collect();
    let sub = n.subgroup(&kernel)?;
    if !sub.group.is_abelian() {
        return Err(Error::InternalVerificationFailed("kernel of phi is not abelian".into()));
    }
    let st = abelian_invariants(&sub.group)?;
    let pi1_elements = st.from_tuple.iter().map(|&t| sub.embedding[t]).collect();

    let mut image: Vec<usize> = x.phi.clone();
    image.sort_unstable();
    image.dedup();
    let mut coset = vec![usize::MAX; e.order()];
    let mut reps = Vec::new();
    for g in 0..e.order() {
        if coset[g] == usize::MAX {
            for &h in &image {
                coset[e.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
    }
    let table: Vec<Vec<usize>> =
        reps.iter().map(|&a| reps.iter().map(|&b| coset[e.mul(a, b)]).collect()).collect();
    let (pi0, relabel) = FiniteGroup::from_table(&table)?;
    let projection = coset.iter().map(|&c| relabel[c]).collect();
    Ok(FourTermSequence { pi1: st.invariants, pi1_elements, pi0: Arc::new(pi0), projection })
}

/// The two crossed modules on `N = S x (1/L)Z/Z` and `E = S x G`.
#[derive(Clone, Debug)]
pub struct FiniteFiberPair {
    pub first: CrossedModule,
    pub second: CrossedModule,
    pub first_sequence: FourTermSequence,
    pub second_sequence: FourTermSequence,
    /// `G -> pi0(first)`, `g -> [(0, g)]`.
    pub first_iso: GroupHom,
    /// `S x K -> pi0(second)`, `(s, k) -> [(s, sigma(k))]`.
    pub second_iso: GroupHom,
}

impl FiniteFiberPair {
    /// Whether the two `pi0` are told apart by commutativity or by their
    /// element-order census.
    pub fn pi0_distinguished(&self) -> bool {
        let (a, b) = (&self.first_sequence.pi0, &self.second_sequence.pi0);
        a.is_abelian() != b.is_abelian() || a.order_census() != b.order_census()
    }
}

fn check_form(ext: &CentralExtension, b: &BilinearForm, level: u64) -> Result<()> {
    if b.domain != ext.fibre.group {
        return Err(Error::DomainMismatch);
    }
    if !b.is_nondegenerate() {
        return Err(Error::NotNondegenerate);
    }
    if level == 0 || !level.is_multiple_of(b.level()) {
        return Err(Error::LevelTooCoarse { level });
    }
    Ok(())
}

fn pair_groups(ext: &CentralExtension, level: u64) -> (Arc<FiniteGroup>, Arc<FiniteGroup>) {
    let sg = FiniteGroup::from_abelian(&ext.fibre.group);
    let n = FiniteGroup::direct_product(&sg, &FiniteGroup::cyclic(level as usize));
    let e = FiniteGroup::direct_product(&sg, &ext.group);
    (Arc::new(n), Arc::new(e))
}

/// `(sbar, lambda)^{(s, g)} = (sbar, lambda + b(sbar, s))`.
fn twisted_action(ext: &CentralExtension, b: &BilinearForm, level: u64) -> Vec<Vec<usize>> {
    let s = &ext.fibre.group;
    let (ns, ng, l) = (s.order(), ext.group.order(), level as usize);
    (0..ns * ng)
        .map(|x| {
            let sx = s.element(x / ng);
            (0..ns * l)
                .map(|m| {
                    let (sb, lam) = (m / l, m % l);
                    let shift = b.value(&s.element(sb), &sx).at_level(level).expect("level checked") as usize;
                    sb * l + (lam + shift) % l
                })
                .collect()
        })
        .collect()
}

/// The module with target `(sbar, lambda) -> (sbar, e)` and the product
/// twisted by `b`, exactly as in the displayed formulas. For nondegenerate
/// `b` it violates the Peiffer identity; kept for comparison.
pub fn twisted_first_module(ext: &CentralExtension, b: &BilinearForm, level: u64) -> Result<CrossedModule> {
    check_form(ext, b, level)?;
    let (n, e) = pair_groups(ext, level);
    let (ng, l) = (ext.group.order(), level as usize);
    let phi = (0..n.order()).map(|m| (m / l) * ng).collect();
    CrossedModule::new(n, e, phi, twisted_action(ext, b, level))
}

/// Builds both modules, validates them and checks `pi0` against `G` and
/// `S x K` through explicit isomorphisms.
///
/// The first module uses the untwisted action: with the twist, the Peiffer
/// identity fails (see [`twisted_first_module`]). The second uses the
/// twisted action and target `(sbar, lambda) -> (0, sbar)`.
pub fn finite_fiber_pair(ext: &CentralExtension, b: &BilinearForm, level: u64) -> Result<FiniteFiberPair> {
    check_form(ext, b, level)?;
    let (n, e) = pair_groups(ext, level);
    let (ng, l) = (ext.group.order(), level as usize);
    let phi1 = (0..n.order()).map(|m| (m / l) * ng).collect();
    let trivial = vec![(0..n.order()).collect::<Vec<_>>(); e.order()];
    let first = CrossedModule::new(n.clone(), e.clone(), phi1, trivial)?;
    let phi2 = (0..n.order()).map(|m| ext.fibre.elements[m / l]).collect();
    let second = CrossedModule::new(n, e, phi2, twisted_action(ext, b, level))?;
    let first_sequence = four_term(&first)?;
    let second_sequence = four_term(&second)?;

    let first_iso = GroupHom::new(
        ext.group.clone(),
        first_sequence.pi0.clone(),
        (0..ng).map(|g| first_sequence.projection[g]).collect(),
    )?;
    let s = &ext.fibre.group;
    let sk = Arc::new(FiniteGroup::direct_product(&FiniteGroup::from_abelian(s), &ext.quotient));
    let nk = ext.quotient.order();
    let second_iso = GroupHom::new(
        sk,
        second_sequence.pi0.clone(),
        (0..s.order() * nk).map(|x| second_sequence.projection[(x / nk) * ng + ext.section[x % nk]]).collect(),
    )?;
    if !first_iso.is_isomorphism() || !second_iso.is_isomorphism() {
        return Err(Error::InternalVerificationFailed("pi0 comparison is not bijective".into()));
    }
    for seq in [&first_sequence, &second_sequence] {
        if seq.pi1.factors() != [level] {
            return Err(Error::InternalVerificationFailed("pi1 is not the truncated circle".into()));
        }
    }
    Ok(FiniteFiberPair { first, second, first_sequence, second_sequence, first_iso, second_iso })
}
