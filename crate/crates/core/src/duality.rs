//! Fibrewise Pontrjagin duality for gerbes over central extensions
//! `S -> G -> K` with finite abelian `S`.
//!
//! Additive notation throughout: characters of `S` are dual coordinate
//! tuples, circle values are fractions mod 1. The groupoid `K // G` has the
//! cosets as points and `k . g = k pi(g)`; `K` acts on its cochains by
//! `(f . h)(k; ..) = f(h k; ..)`.
//!
//! The dual 3-cocycle is read off from the endomorphisms of the
//! representation `(K, beta)`: each `x = (rho, h)` of the dual group gets the
//! 1-cochain `L(x) = psi(rho) - gamma(h)` where
//! `psi(rho)(k; g) = rho(a(g) + F(k, pi(g)))`. Composition fails to be strict
//! by `D(x, y) = L(y) + L(x) . h_y - L(xy) = d eta(x, y)`, and
//! `alpha_hat(x, y, z) = eta(x, y) . h_z + eta(xy, z) - eta(x, yz) - eta(y, z)`,
//! which is a constant function on `K`.

use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::circle::pairing;
use crate::cochain::{
    evaluation_cup, solve_coboundary, ActionGroupoid, Base, Cochain, KValuedCochain, Limits, ModuleCochain,
};
use crate::error::{Error, Result};
use crate::gerbe::{make_gerbe, MultiplicativeGerbe};
use crate::group::{central_extension, quotient_by_central, CentralExtension, Fibre, GroupHom};

/// A gerbe together with a central subgroup, presented as an extension with
/// a section.
#[derive(Clone, Debug)]
pub struct DualityInput {
    pub gerbe: MultiplicativeGerbe,
    pub extension: CentralExtension,
}

impl DualityInput {
    /// `S` given by its elements; coordinates and section are the default
    /// ones (least coset representatives).
    pub fn new(gerbe: MultiplicativeGerbe, central_subgroup: &[usize]) -> Result<Self> {
        let fibre = Fibre::from_subgroup(gerbe.group(), central_subgroup)?;
        let extension = quotient_by_central(gerbe.group(), fibre)?;
        Ok(DualityInput { gerbe, extension })
    }

    pub fn from_extension(gerbe: MultiplicativeGerbe, extension: CentralExtension) -> Result<Self> {
        if *extension.group != **gerbe.group() {
            return Err(Error::DomainMismatch);
        }
        extension.fibre.check_central(&extension.group)?;
        Ok(DualityInput { gerbe, extension })
    }

    pub fn fibre(&self) -> &FiniteAbelianGroup {
        &self.extension.fibre.group
    }

    pub fn groupoid(&self) -> Arc<ActionGroupoid> {
        let e = &self.extension;
        Arc::new(ActionGroupoid::through_quotient(e.group.clone(), &e.quotient, &e.pi))
    }
}

/// `d beta = pi^* alpha` on `K // G` and `beta - beta . h = d gamma(h)`.
#[derive(Clone, Debug)]
pub struct OmegaWitness {
    pub groupoid: Arc<ActionGroupoid>,
    pub beta: Cochain,
    pub gamma: KValuedCochain,
}

impl OmegaWitness {
    pub fn verify(&self, input: &DualityInput) -> Result<()> {
        let target = input.gerbe.alpha().pullback_to_groupoid(&self.groupoid)?;
        if self.beta.delta() != target {
            return Err(Error::InternalVerificationFailed("beta does not solve its equation".into()));
        }
        let k = &input.extension.quotient;
        for h in 0..k.order() {
            let lhs = self.beta.sub(&crate::cochain::kvalued::translate(&self.beta, k, h))?;
            if lhs != self.gamma.component(&[h]).delta() {
                return Err(Error::InternalVerificationFailed(format!("gamma({h}) does not solve its equation")));
            }
        }
        Ok(())
    }
}

fn stage_failure(stage: u8, e: Error) -> Error {
    match e {
        Error::NoSolutionAtLevel { level } => Error::NotInOmega { stage, level },
        e => e,
    }
}

/// Decides membership in the dualizable subgroup by solving for `beta`,
/// then for `gamma(h)` for every `h` in `K` (with `gamma(e) = 0`).
pub fn omega_membership(input: &DualityInput, limits: &Limits) -> Result<OmegaWitness> {
    let groupoid = input.groupoid();
    let base = Base::Groupoid(groupoid.clone());
    let target = input.gerbe.alpha().pullback_to_groupoid(&groupoid)?;
    let beta = if target.is_zero() {
        Cochain::zero(base.clone(), 2)
    } else {
        solve_coboundary(&target, limits).map_err(|e| stage_failure(1, e))?
    };
    let k = &input.extension.quotient;
    let mut comps = Vec::with_capacity(k.order());
    for h in 0..k.order() {
        let c = beta.sub(&crate::cochain::kvalued::translate(&beta, k, h))?;
        comps.push(if c.is_zero() {
            Cochain::zero(base.clone(), 1)
        } else {
            solve_coboundary(&c, limits).map_err(|e| stage_failure(2, e))?
        });
    }
    let gamma = KValuedCochain::new(k.clone(), 1, comps)?;
    Ok(OmegaWitness { groupoid, beta, gamma })
}

/// `F_hat(h1, h2)` is the character `s -> -(d_K gamma)(h1, h2)(e; s)`.
///
/// The sign makes the explicit formula hold on the nose: there the witness
/// is `beta = -alpha(k, g1, g2)` in additive notation.
pub fn extract_f_hat(input: &DualityInput, witness: &OmegaWitness) -> Result<ModuleCochain> {
    let ext = &input.extension;
    let s = &ext.fibre.group;
    let k = &ext.quotient;
    let gamma = |h: usize, x: usize, g: usize| witness.gamma.component(&[h]).get(x, &[g]);
    let mut failure = None;
    let f_hat = ModuleCochain::from_fn(k.clone(), s.clone(), 2, |a| {
        let (h1, h2) = (a[0], a[1]);
        let z = |si: usize| {
            let g = ext.fibre.elements[si];
            gamma(h2, 0, g).sub(&gamma(k.mul(h1, h2), 0, g)).add(&gamma(h1, h2, g)).neg()
        };
        let mut t = Vec::with_capacity(s.rank());
        for (i, &d) in s.factors().iter().enumerate() {
            let mut e = vec![0u64; s.rank()];
            e[i] = 1;
            let v = z(s.index(&e));
            match v.at_level(d) {
                Some(n) => t.push(n),
                None => {
                    failure.get_or_insert(vec![h1, h2]);
                    t.push(0);
                }
            }
        }
        for si in 0..s.order() {
            if z(si) != pairing(s, &t, &s.element(si)) {
                failure.get_or_insert(vec![h1, h2, si]);
            }
        }
        t
    })?;
    if let Some(w) = failure {
        return Err(Error::RestrictionNotCharacter { witness: w });
    }
    if let Some(w) = f_hat.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    Ok(f_hat)
}

/// The dual extension `S^ -> G^ -> K` classified by the extracted `F_hat`.
pub fn extract_dual_extension(input: &DualityInput, witness: &OmegaWitness) -> Result<(ModuleCochain, CentralExtension)> {
    let f_hat = extract_f_hat(input, witness)?;
    let ext = central_extension(&f_hat.to_extension_cocycle()?)?;
    Ok((f_hat, ext))
}

#[derive(Clone, Debug)]
pub struct DualGerbe {
    pub f_hat: ModuleCochain,
    pub extension: CentralExtension,
    pub gerbe: MultiplicativeGerbe,
}

impl DualGerbe {
    pub fn alpha_hat(&self) -> &Cochain {
        self.gerbe.alpha()
    }

    /// The dual viewed as input for dualizing again over `S^`.
    pub fn as_input(&self) -> DualityInput {
        DualityInput { gerbe: self.gerbe.clone(), extension: self.extension.clone() }
    }
}

pub fn dual_gerbe(input: &DualityInput, witness: &OmegaWitness, limits: &Limits) -> Result<DualGerbe> {
    let (f_hat, dual) = extract_dual_extension(input, witness)?;
    let ext = &input.extension;
    let s = &ext.fibre.group;
    let k = &ext.quotient;
    let g = &ext.group;
    let gh = &dual.group;
    let (nk, ng, nh) = (k.order(), g.order(), gh.order());

    let a_of: Vec<Vec<u64>> = (0..ng).map(|x| s.element(ext.fibre_coordinate(x))).collect();
    let f_of = |k1: usize, k2: usize| s.element(ext.cocycle.get(k1, k2));
    let psi = |rho: &[u64], x: usize, gg: usize| {
        let v = s.add(&a_of[gg], &f_of(x, ext.pi[gg]));
        pairing(s, rho, &v)
    };
    let rho_of: Vec<Vec<u64>> = (0..nh).map(|x| s.element(x / nk)).collect();
    let h_of = |x: usize| dual.pi[x];
    let lambda = |x: usize, pt: usize, gg: usize| {
        psi(&rho_of[x], pt, gg).sub(&witness.gamma.component(&[h_of(x)]).get(pt, &[gg]))
    };

    // lam[(x * nk + pt) * nk + q] = L(x)(pt; sigma(q))
    let mut lam = Vec::with_capacity(nh * nk * nk);
    for x in 0..nh {
        for pt in 0..nk {
            for q in 0..nk {
                lam.push(lambda(x, pt, ext.section[q]));
            }
        }
    }
    let lam_at = |x: usize, pt: usize, q: usize| &lam[(x * nk + pt) * nk + q];
    let mut eta = Vec::with_capacity(nh * nh * nk);
    for x in 0..nh {
        for y in 0..nh {
            let xy = gh.mul(x, y);
            for q in 0..nk {
                eta.push(lam_at(y, 0, q).add(lam_at(x, h_of(y), q)).sub(lam_at(xy, 0, q)));
            }
        }
    }
    let eta_at = |x: usize, y: usize, q: usize| &eta[(x * nh + y) * nk + q];

    for x in 0..nh {
        for y in 0..nh {
            let xy = gh.mul(x, y);
            for pt in 0..nk {
                for gg in 0..ng {
                    let d = lambda(y, pt, gg).add(&lambda(x, k.mul(h_of(y), pt), gg)).sub(&lambda(xy, pt, gg));
                    let de = eta_at(x, y, k.mul(pt, ext.pi[gg])).sub(eta_at(x, y, pt));
                    if d != de {
                        return Err(Error::InternalVerificationFailed(
                            "composition defect is not a coboundary".into(),
                        ));
                    }
                }
            }
        }
    }

    let mut nonconstant = false;
    let alpha_hat = Cochain::from_fn(Base::Group(gh.clone()), 3, |_, a| {
        let (x, y, z) = (a[0], a[1], a[2]);
        let (xy, yz) = (gh.mul(x, y), gh.mul(y, z));
        let val = |q: usize| {
            eta_at(x, y, k.mul(h_of(z), q)).add(eta_at(xy, z, q)).sub(eta_at(x, yz, q)).sub(eta_at(y, z, q))
        };
        let v0 = val(0);
        if (1..nk).any(|q| val(q) != v0) {
            nonconstant = true;
        }
        v0
    })?;
    if nonconstant {
        return Err(Error::InternalVerificationFailed("dual 3-cochain depends on the point".into()));
    }
    if let Some(w) = alpha_hat.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    let gerbe = make_gerbe(gh.clone(), alpha_hat, limits)?;
    Ok(DualGerbe { f_hat, extension: dual, gerbe })
}

/// `S`, `K`, `F` in `Z^2(K, S)`, `F_hat` in `Z^2(K, S^)` and `epsilon` with
/// `d epsilon = F_hat(k1, k2)(F(k3, k4))`.
#[derive(Clone, Debug)]
pub struct ExplicitFormulaData {
    pub f: ModuleCochain,
    pub f_hat: ModuleCochain,
    pub epsilon: Cochain,
}

impl ExplicitFormulaData {
    pub fn check(&self) -> Result<()> {
        if self.f.group() != self.f_hat.group()
            || self.f.module() != self.f_hat.module()
            || self.f.degree() != 2
            || self.f_hat.degree() != 2
            || self.epsilon.degree() != 3
            || *self.epsilon.base() != Base::Group(self.f.group().clone())
        {
            return Err(Error::DomainMismatch);
        }
        for c in [&self.f, &self.f_hat] {
            if let Some(w) = c.cocycle_violation() {
                return Err(Error::NotACocycle { witness: w });
            }
            if !c.is_normalized() {
                return Err(Error::Malformed("extension cocycles must be normalized".into()));
            }
        }
        let diff = self.epsilon.delta().sub(&evaluation_cup(&self.f_hat, &self.f)?)?;
        if let Some((_, w, _)) = diff.entries().into_iter().next() {
            return Err(Error::CompatibilityFailed { witness: w });
        }
        Ok(())
    }
}

/// The two gerbes of the explicit formula.
#[derive(Clone, Debug)]
pub struct ExplicitPair {
    /// `G = S x_F K`, `alpha((a,k)..) = F_hat(k1, k2)(a3) + epsilon(k1, k2, k3)`.
    pub extension: CentralExtension,
    pub alpha: Cochain,
    /// `G^ = S^ x_F_hat K`, `alpha_hat((rho,k)..) = epsilon(k1, k2, k3) + rho1(F(k2, k3))`.
    pub dual_extension: CentralExtension,
    pub alpha_hat: Cochain,
}

impl ExplicitPair {
    pub fn input(&self, limits: &Limits) -> Result<DualityInput> {
        let gerbe = make_gerbe(self.extension.group.clone(), self.alpha.clone(), limits)?;
        DualityInput::from_extension(gerbe, self.extension.clone())
    }
}

pub fn build_explicit_pair(data: &ExplicitFormulaData) -> Result<ExplicitPair> {
    data.check()?;
    let s = data.f.module();
    let nk = data.f.group().order();
    let extension = central_extension(&data.f.to_extension_cocycle()?)?;
    let dual_extension = central_extension(&data.f_hat.to_extension_cocycle()?)?;
    let eps = &data.epsilon;
    let alpha = Cochain::from_fn(Base::Group(extension.group.clone()), 3, |_, a| {
        let (k1, k2, k3) = (a[0] % nk, a[1] % nk, a[2] % nk);
        pairing(s, data.f_hat.get(&[k1, k2]), &s.element(a[2] / nk)).add(&eps.get(0, &[k1, k2, k3]))
    })?;
    let alpha_hat = Cochain::from_fn(Base::Group(dual_extension.group.clone()), 3, |_, a| {
        let (k1, k2, k3) = (a[0] % nk, a[1] % nk, a[2] % nk);
        eps.get(0, &[k1, k2, k3]).add(&pairing(s, &s.element(a[0] / nk), data.f.get(&[k2, k3])))
    })?;
    for c in [&alpha, &alpha_hat] {
        if let Some(w) = c.cocycle_violation() {
            return Err(Error::NotACocycle { witness: w });
        }
    }
    Ok(ExplicitPair { extension, alpha, dual_extension, alpha_hat })
}

/// For two extensions of `K` by the same `S` with cocycles `F1`, `F2` in the
/// same class, the isomorphism `(a, k) -> (a + c(k), k)` where
/// `d c = F1 - F2`.
pub fn extension_isomorphism(from: &CentralExtension, to: &CentralExtension, limits: &Limits) -> Result<GroupHom> {
    extension_isomorphism_along(from, to, |a| a.to_vec(), limits)
}

/// `(a, k) -> (m(a) + c(k), k)` for an automorphism `m` of `S`, with
/// `d c = m o F1 - F2`.
pub fn extension_isomorphism_along(
    from: &CentralExtension,
    to: &CentralExtension,
    m: impl Fn(&[u64]) -> Vec<u64>,
    limits: &Limits,
) -> Result<GroupHom> {
    if from.fibre.group != to.fibre.group || from.quotient != to.quotient {
        return Err(Error::DomainMismatch);
    }
    let s = &from.fibre.group;
    let mapped: Vec<usize> = (0..s.order()).map(|i| s.index(&m(&s.element(i)))).collect();
    let f1 = ModuleCochain::from_extension_cocycle(&from.cocycle).map_values(s, &mapped);
    let f2 = ModuleCochain::from_extension_cocycle(&to.cocycle);
    let diff = f1.sub(&f2)?;
    let c = if diff.is_zero() {
        ModuleCochain::zero(from.quotient.clone(), s.clone(), 1)
    } else {
        diff.solve_coboundary(limits).map_err(|e| match e {
            Error::NoSolutionAtLevel { .. } => Error::ComparisonNotIso("extension classes differ".into()),
            e => e,
        })?
    };
    let images = (0..from.group.order())
        .map(|x| {
            let k = from.pi[x];
            let a = s.add(&s.element(mapped[from.fibre_coordinate(x)]), c.get(&[k]));
            to.group.mul(to.fibre.elements[s.index(&a)], to.section[k])
        })
        .collect();
    let hom = GroupHom::new(from.group.clone(), to.group.clone(), images)
        .map_err(|_| Error::ComparisonNotIso("comparison map is not a homomorphism".into()))?;
    if !hom.is_isomorphism() {
        return Err(Error::ComparisonNotIso("comparison map is not bijective".into()));
    }
    Ok(hom)
}

#[derive(Clone, Debug)]
pub struct DoubleDualReport {
    pub dual: DualGerbe,
    pub double_dual: DualGerbe,
    /// `G -> G^^`, fibrewise the evaluation map `S -> S^^`.
    pub comparison: GroupHom,
    /// `alpha^^` pulled back to `G`.
    pub transported: Cochain,
}

/// Dualizes twice and compares with the input. Characters of `S^` are
/// written in the coordinates of `S`, so evaluation `S -> S^^` is the
/// identity on tuples.
pub fn double_dual_check(input: &DualityInput, witness: &OmegaWitness, limits: &Limits) -> Result<DoubleDualReport> {
    let dual = dual_gerbe(input, witness, limits)?;
    let second_input = dual.as_input();
    let second_witness = omega_membership(&second_input, limits)?;
    let double_dual = dual_gerbe(&second_input, &second_witness, limits)?;
    let comparison = extension_isomorphism(&input.extension, &double_dual.extension, limits)?;
    let transported = double_dual.alpha_hat().pullback(&comparison)?;
    if !crate::cochain::classes_equal(&transported, input.gerbe.alpha(), limits)? {
        return Err(Error::ClassMismatch);
    }
    Ok(DoubleDualReport { dual, double_dual, comparison, transported })
}

/// Compares a computed dual with the closed form of the explicit formula,
/// transporting along the isomorphism of dual extensions.
pub fn matches_explicit_dual(dual: &DualGerbe, pair: &ExplicitPair, limits: &Limits) -> Result<bool> {
    let iso = extension_isomorphism(&dual.extension, &pair.dual_extension, limits)?;
    let pulled = pair.alpha_hat.pullback(&iso)?;
    crate::cochain::classes_equal(&pulled, dual.alpha_hat(), limits)
}

/// `rho1(F(k2, k3))` on `K x S^` for the extension `S -> G -> K`.
pub fn trivial_gerbe_dual_formula(ext: &CentralExtension) -> Result<(CentralExtension, Cochain)> {
    let s = &ext.fibre.group;
    let k = &ext.quotient;
    let nk = k.order();
    let zero = ModuleCochain::zero(k.clone(), s.clone(), 2);
    let dual = central_extension(&zero.to_extension_cocycle()?)?;
    let alpha = Cochain::from_fn(Base::Group(dual.group.clone()), 3, |_, a| {
        pairing(s, &s.element(a[0] / nk), &s.element(ext.cocycle.get(a[1] % nk, a[2] % nk)))
    })?;
    Ok((dual, alpha))
}
