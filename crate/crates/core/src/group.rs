//! Finite groups as multiplication tables.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::linalg::smith_integer;

pub const DEFAULT_MAX_ORDER: usize = 4096;

/// A finite group with elements `0..order` and identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a Cayley table. Returns the group and the relabelling
    /// `old index -> new index` that moves the identity to 0 and keeps the
    /// remaining elements in their original order.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<(FiniteGroup, Vec<usize>)> {
        Self::from_table_capped(rows, DEFAULT_MAX_ORDER)
    }

    pub fn from_table_capped(rows: &[Vec<usize>], cap: usize) -> Result<(FiniteGroup, Vec<usize>)> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Malformed("empty table".into()));
        }
        if n > cap {
            return Err(Error::OrderLimitExceeded { limit: cap });
        }
        for r in rows {
            if r.len() != n {
                return Err(Error::Malformed("table is not square".into()));
            }
            if let Some(&x) = r.iter().find(|&&x| x >= n) {
                return Err(Error::Malformed(format!("entry {x} out of range")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        let mut order: Vec<usize> = vec![e];
        order.extend((0..n).filter(|&x| x != e));
        let mut relabel = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = relabel[rows[order[a]][order[b]]] as u32;
            }
        }
        let g = Self::from_flat(n, table)?;
        g.check_associative()?;
        Ok((g, relabel))
    }

    /// Builds from a flat table already in canonical form (identity at 0).
    /// Checks inverses but not associativity.
    fn from_flat(n: usize, table: Vec<u32>) -> Result<FiniteGroup> {
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a * n + b] == 0 && table[b * n + a] == 0);
            match b {
                Some(b) => inv[a] = b as u32,
                None => return Err(Error::NotInvertible { element: a }),
            }
        }
        Ok(FiniteGroup { n, table, inv })
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Closure of permutations of `0..degree`. Products compose left to right:
    /// `(x y)(i) = y(x(i))`. Elements are numbered in breadth-first order over
    /// the generators in the order given, starting from the identity.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::Malformed("generator has the wrong degree".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::Malformed("generator is not a permutation".into()));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        let compose = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().map(|&i| y[i]).collect() };
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let y = compose(&elems[i], g);
                if !index.contains_key(&y) {
                    if elems.len() >= cap {
                        return Err(Error::OrderLimitExceeded { limit: cap });
                    }
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elems[a], &elems[b])] as u32;
            }
        }
        Self::from_flat(n, table)
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup { n: 1, table: vec![0], inv: vec![0] }
    }

    pub fn cyclic(m: usize) -> FiniteGroup {
        Self::from_abelian(&FiniteAbelianGroup::new(vec![m as u64]).expect("positive order"))
    }

    /// The group with the same indexing as the abelian group's tuples.
    pub fn from_abelian(a: &FiniteAbelianGroup) -> FiniteGroup {
        let n = a.order();
        let elems: Vec<Vec<u64>> = (0..n).map(|i| a.element(i)).collect();
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = a.index(&a.add(&elems[x], &elems[y])) as u32;
            }
        }
        let inv = (0..n).map(|x| a.index(&a.neg(&elems[x])) as u32).collect();
        FiniteGroup { n, table, inv }
    }

    /// Elements `(a, b)` indexed `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
            }
        }
        let inv = (0..n).map(|x| (a.inv(x / nb) * nb + b.inv(x % nb)) as u32).collect();
        FiniteGroup { n, table, inv }
    }

    /// Dihedral group of order `2m`, generated by a rotation and a reflection.
    pub fn dihedral(m: usize) -> FiniteGroup {
        let r: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let s: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        Self::from_permutations(m, &[r, s], DEFAULT_MAX_ORDER).expect("small dihedral group")
    }

    /// Quaternion group of order 8. Element `2*b + s` is `(-1)^s` times the
    /// basis unit `b` in `1, i, j, k`.
    pub fn quaternion() -> FiniteGroup {
        // unit products: (sign, unit)
        const PROD: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let rows: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (sx, bx) = (x % 2, x / 2);
                        let (sy, by) = (y % 2, y / 2);
                        let (sp, bp) = PROD[bx][by];
                        2 * bp + (sx + sy + sp) % 2
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&rows).expect("quaternion table").0
    }

    pub fn symmetric(d: usize) -> FiniteGroup {
        let mut gens = Vec::new();
        if d > 1 {
            gens.push((0..d).map(|i| (i + 1) % d).collect());
            let mut t: Vec<usize> = (0..d).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        Self::from_permutations(d, &gens, DEFAULT_MAX_ORDER).expect("small symmetric group")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.commute(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|g| self.commute(z, g))).collect()
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.n {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m
    }

    /// Sorted closure of the given elements.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subgroup on a subset, with elements relabelled in increasing order.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        if let Some(&x) = elems.iter().find(|&&x| x >= self.n) {
            return Err(Error::NotSubgroup(format!("element {x} out of range")));
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let k = elems.len();
        let mut table = vec![0u32; k * k];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::NotSubgroup(format!("not closed: {a}*{b}")));
                }
                table[i * k + j] = p as u32;
            }
        }
        let group = Self::from_flat(k, table)?;
        Ok(Subgroup { group: Arc::new(group), embedding: elems, position: pos })
    }

    pub fn is_normal(&self, elements: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in elements {
            member[x] = true;
        }
        (0..self.n).all(|g| elements.iter().all(|&h| member[self.mul(self.mul(self.inv(g), h), g)]))
    }
}

/// A subgroup together with its embedding into the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: Arc<FiniteGroup>,
    /// Subgroup index -> parent index (increasing).
    pub embedding: Vec<usize>,
    /// Parent index -> subgroup index, `usize::MAX` when absent.
    pub position: Vec<usize>,
}

impl Subgroup {
    pub fn contains(&self, x: usize) -> bool {
        self.position[x] != usize::MAX
    }
}

/// A homomorphism given by its table of images.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::Malformed("image table has the wrong shape".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_injective(&self) -> bool {
        self.kernel() == vec![0]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.images {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.source.order()).filter(|&x| self.images[x] == 0).collect()
    }

    pub fn compose(&self, after: &GroupHom) -> Result<GroupHom> {
        if self.target.order() != after.source.order() {
            return Err(Error::DomainMismatch);
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: after.target.clone(),
            images: self.images.iter().map(|&x| after.images[x]).collect(),
        })
    }
}

/// An abelian group identified with `Z/d_1 x ... x Z/d_r`.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    pub invariants: FiniteAbelianGroup,
    /// Group element -> tuple index.
    pub to_tuple: Vec<usize>,
    /// Tuple index -> group element.
    pub from_tuple: Vec<usize>,
}

/// Invariant factors of an abelian group, computed from the Smith normal form
/// of the relation matrix of a greedy generating set, with an explicit
/// isomorphism.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<AbelianStructure> {
    let n = g.order();
    for a in 0..n {
        for b in a + 1..n {
            if !g.commute(a, b) {
                return Err(Error::NotAbelian { a, b });
            }
        }
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut rels: Vec<Vec<i128>> = Vec::new();
    // coordinates of the elements of the subgroup generated so far
    let mut coords: Vec<Option<Vec<i128>>> = vec![None; n];
    coords[0] = Some(vec![]);
    let mut members = vec![0usize];
    for x in 0..n {
        if coords[x].is_some() {
            continue;
        }
        let j = gens.len();
        gens.push(x);
        for &m in &members {
            coords[m].as_mut().unwrap().push(0);
        }
        let mut mult = 1u64;
        let mut p = x;
        while coords[p].is_none() {
            p = g.mul(p, x);
            mult += 1;
        }
        let mut rel: Vec<i128> = coords[p].as_ref().unwrap().iter().map(|&c| -c).collect();
        rel[j] = mult as i128;
        rels.push(rel);
        let old = members.clone();
        let mut power = 0usize;
        for t in 1..mult {
            power = g.mul(power, x);
            for &h in &old {
                let y = g.mul(h, power);
                let mut c = coords[h].clone().unwrap();
                c[j] = t as i128;
                coords[y] = Some(c);
                members.push(y);
            }
        }
    }
    let r = gens.len();
    let rels: Vec<Vec<i128>> = rels.into_iter().map(|mut v| {
        v.resize(r, 0);
        v
    }).collect();
    let (diag, v) = smith_integer(rels, r);
    let keep: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] != 1).collect();
    let factors: Vec<u64> = keep.iter().map(|&i| diag[i] as u64).collect();
    let invariants = FiniteAbelianGroup::new(factors.clone())?;
    let mut to_tuple = vec![0usize; n];
    let mut from_tuple = vec![usize::MAX; n];
    for x in 0..n {
        let mut c = coords[x].clone().unwrap();
        c.resize(r, 0);
        let y: Vec<u64> = keep
            .iter()
            .zip(&factors)
            .map(|(&k, &d)| {
                let s: i128 = (0..r).map(|i| c[i] * v[i][k]).sum();
                s.rem_euclid(d as i128) as u64
            })
            .collect();
        let t = invariants.index(&y);
        if from_tuple[t] != usize::MAX {
            return Err(Error::InternalVerificationFailed("abelian invariants map is not injective".into()));
        }
        to_tuple[x] = t;
        from_tuple[t] = x;
    }
    Ok(AbelianStructure { invariants, to_tuple, from_tuple })
}

/// A finite abelian group sitting inside a group, with explicit coordinates.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub group: FiniteAbelianGroup,
    /// Tuple index -> ambient element.
    pub elements: Vec<usize>,
    /// Ambient element -> tuple index, `usize::MAX` outside the fibre.
    pub position: Vec<usize>,
}

impl Fibre {
    /// Uses the computed invariant-factor coordinates of the subgroup.
    pub fn from_subgroup(g: &FiniteGroup, elements: &[usize]) -> Result<Fibre> {
        let sub = g.subgroup(elements)?;
        let st = abelian_invariants(&sub.group)?;
        let emb: Vec<usize> = st.from_tuple.iter().map(|&x| sub.embedding[x]).collect();
        Fibre::from_embedding(g, st.invariants, emb)
    }

    /// Uses caller-supplied coordinates; checks that they define an injective
    /// homomorphism.
    pub fn from_embedding(g: &FiniteGroup, s: FiniteAbelianGroup, elements: Vec<usize>) -> Result<Fibre> {
        if elements.len() != s.order() {
            return Err(Error::Malformed("fibre embedding has the wrong size".into()));
        }
        let mut position = vec![usize::MAX; g.order()];
        for (i, &x) in elements.iter().enumerate() {
            if x >= g.order() || position[x] != usize::MAX {
                return Err(Error::Malformed("fibre embedding is not injective".into()));
            }
            position[x] = i;
        }
        for i in 0..s.order() {
            for j in 0..s.order() {
                let k = s.index(&s.add(&s.element(i), &s.element(j)));
                if g.mul(elements[i], elements[j]) != elements[k] {
                    return Err(Error::NotHomomorphism { a: i, b: j });
                }
            }
        }
        Ok(Fibre { group: s, elements, position })
    }

    pub fn check_central(&self, g: &FiniteGroup) -> Result<()> {
        for &s in &self.elements {
            for x in 0..g.order() {
                if !g.commute(s, x) {
                    return Err(Error::NotCentral { element: s, witness: x });
                }
            }
        }
        Ok(())
    }
}

/// Group 2-cocycle data: `F(k1, k2)` as tuple indices of `S`, dense over
/// `K x K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCocycle {
    pub s: FiniteAbelianGroup,
    pub k: Arc<FiniteGroup>,
    pub values: Vec<usize>,
}

impl ExtensionCocycle {
    #[inline]
    pub fn get(&self, k1: usize, k2: usize) -> usize {
        self.values[k1 * self.k.order() + k2]
    }
}

/// A central extension `S -> G -> K` with a set-theoretic section.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub group: Arc<FiniteGroup>,
    pub fibre: Fibre,
    pub quotient: Arc<FiniteGroup>,
    pub pi: Vec<usize>,
    /// `K -> G` with `section[0] = 0`.
    pub section: Vec<usize>,
    pub cocycle: ExtensionCocycle,
}

impl CentralExtension {
    /// `S`-coordinate of `g` relative to the section: `g = a(g) * s(pi(g))`.
    pub fn fibre_coordinate(&self, g: usize) -> usize {
        let sk = self.section[self.pi[g]];
        self.fibre.position[self.group.mul(g, self.group.inv(sk))]
    }
}

/// Builds `S x_F K` on pairs `(a, k)` indexed `a * |K| + k`, with product
/// `(a1, k1)(a2, k2) = (a1 + a2 + F(k1, k2), k1 k2)`. `F` must be a normalized
/// 2-cocycle.
pub fn central_extension(f: &ExtensionCocycle) -> Result<CentralExtension> {
    let s = &f.s;
    let k = &f.k;
    let (ns, nk) = (s.order(), k.order());
    if f.values.len() != nk * nk || f.values.iter().any(|&v| v >= ns) {
        return Err(Error::Malformed("extension cocycle has the wrong shape".into()));
    }
    for x in 0..nk {
        if f.get(0, x) != 0 || f.get(x, 0) != 0 {
            return Err(Error::Malformed("extension cocycle is not normalized".into()));
        }
    }
    let sel: Vec<Vec<u64>> = (0..ns).map(|i| s.element(i)).collect();
    for a in 0..nk {
        for b in 0..nk {
            for c in 0..nk {
                // F(b,c) - F(ab,c) + F(a,bc) - F(a,b) = 0
                let lhs = s.add(&sel[f.get(b, c)], &sel[f.get(a, k.mul(b, c))]);
                let rhs = s.add(&sel[f.get(k.mul(a, b), c)], &sel[f.get(a, b)]);
                if lhs != rhs {
                    return Err(Error::NotACocycle { witness: vec![a, b, c] });
                }
            }
        }
    }
    let n = ns * nk;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a1, k1) = (x / nk, x % nk);
        for y in 0..n {
            let (a2, k2) = (y / nk, y % nk);
            let mut a = s.add(&sel[a1], &sel[a2]);
            s.add_into(&mut a, &sel[f.get(k1, k2)]);
            table[x * n + y] = (s.index(&a) * nk + k.mul(k1, k2)) as u32;
        }
    }
    let group = Arc::new(FiniteGroup::from_flat(n, table)?);
    let fibre = Fibre {
        group: s.clone(),
        elements: (0..ns).map(|a| a * nk).collect(),
        position: (0..n).map(|x| if x % nk == 0 { x / nk } else { usize::MAX }).collect(),
    };
    Ok(CentralExtension {
        group,
        fibre,
        quotient: k.clone(),
        pi: (0..n).map(|x| x % nk).collect(),
        section: (0..nk).collect(),
        cocycle: f.clone(),
    })
}

/// `G -> G/S` for a central subgroup `S` with coordinates. Cosets are ordered
/// by their least element, which is also the chosen section.
pub fn quotient_by_central(g: &Arc<FiniteGroup>, fibre: Fibre) -> Result<CentralExtension> {
    fibre.check_central(g)?;
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut section = Vec::new();
    for x in 0..n {
        if coset[x] != usize::MAX {
            continue;
        }
        let c = section.len();
        section.push(x);
        for &s in &fibre.elements {
            coset[g.mul(x, s)] = c;
        }
    }
    let nk = section.len();
    let mut table = vec![0u32; nk * nk];
    for i in 0..nk {
        for j in 0..nk {
            table[i * nk + j] = coset[g.mul(section[i], section[j])] as u32;
        }
    }
    let k = Arc::new(FiniteGroup::from_flat(nk, table)?);
    let mut values = vec![0usize; nk * nk];
    for i in 0..nk {
        for j in 0..nk {
            let prod = g.mul(section[i], section[j]);
            let r = g.mul(prod, g.inv(section[k.mul(i, j)]));
            values[i * nk + j] = fibre.position[r];
        }
    }
    let cocycle = ExtensionCocycle { s: fibre.group.clone(), k: k.clone(), values };
    Ok(CentralExtension { group: g.clone(), fibre, quotient: k, pi: coset, section, cocycle })
}
