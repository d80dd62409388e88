//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the solvers or the differentials of the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use gerbe_core::cochain::Cochain;
use gerbe_core::{FiniteAbelianGroup, FiniteGroup};

/// Dense tuples `(g1..gn)` in lexicographic order, `g_i < n`.
pub fn tuples(n: usize, deg: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..deg {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

fn index(n: usize, x: usize, args: &[usize]) -> usize {
    args.iter().fold(x, |acc, &g| acc * n + g)
}

/// Bar differential on a right `G`-set given by `action[x][g]`, values
/// integers mod `level`, dense over `points x G^deg`. A group is the case of
/// a single point.
pub fn delta(g: &FiniteGroup, action: &[Vec<usize>], level: u64, deg: usize, f: &[u64]) -> Vec<u64> {
    let n = g.order();
    let points = action.len();
    let mut out = Vec::with_capacity(points * n.pow(deg as u32 + 1));
    for x in 0..points {
        for t in tuples(n, deg + 1) {
            let mut acc = f[index(n, action[x][t[0]], &t[1..])] as i128;
            for i in 1..=deg {
                let mut face = t[..i - 1].to_vec();
                face.push(g.mul(t[i - 1], t[i]));
                face.extend_from_slice(&t[i + 1..]);
                let v = f[index(n, x, &face)] as i128;
                acc += if i % 2 == 1 { -v } else { v };
            }
            let v = f[index(n, x, &t[..deg])] as i128;
            acc += if (deg + 1) % 2 == 1 { -v } else { v };
            out.push(acc.rem_euclid(level as i128) as u64);
        }
    }
    out
}

pub fn point_action(n: usize) -> Vec<Vec<usize>> {
    vec![vec![0; n]]
}

pub fn regular_action(g: &FiniteGroup) -> Vec<Vec<usize>> {
    (0..g.order()).map(|x| (0..g.order()).map(|h| g.mul(x, h)).collect()).collect()
}

/// Right cosets `H x` of the subgroup `h` with `(H x) . g = H x g`.
pub fn coset_action(g: &FiniteGroup, h: &[usize]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if label[x] == usize::MAX {
            for &s in h {
                label[g.mul(s, x)] = reps.len();
            }
            reps.push(x);
        }
    }
    reps.iter().map(|&r| (0..g.order()).map(|y| label[g.mul(r, y)]).collect()).collect()
}

/// Values of a library cochain at a common level, dense.
pub fn dense(c: &Cochain, level: u64) -> Vec<u64> {
    let n = c.base().group().order();
    let mut out = Vec::new();
    for x in 0..c.base().points() {
        for t in tuples(n, c.degree()) {
            out.push(c.get(x, &t).at_level(level).expect("level divides"));
        }
    }
    out
}

pub fn is_degenerate(t: &[usize]) -> bool {
    t.contains(&0)
}

/// All normalized cochains of degree `deg` on `g` with values mod `level`.
pub fn all_normalized(g: &FiniteGroup, level: u64, deg: usize) -> Vec<Vec<u64>> {
    let ts = tuples(g.order(), deg);
    let free: Vec<usize> = (0..ts.len()).filter(|&i| !is_degenerate(&ts[i])).collect();
    let total = (level as usize).pow(free.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut f = vec![0u64; ts.len()];
            for &i in &free {
                f[i] = (code % level as usize) as u64;
                code /= level as usize;
            }
            f
        })
        .collect()
}

/// Number of classes of level-`level` normalized cocycles modulo
/// coboundaries of cochains at level `prim_level` (a multiple of `level`).
pub fn count_classes(g: &FiniteGroup, deg: usize, level: u64, prim_level: u64) -> usize {
    let scale = prim_level / level;
    let action = point_action(g.order());
    let zero = vec![0u64; g.order().pow(deg as u32 + 1)];
    let cocycles: Vec<Vec<u64>> = all_normalized(g, level, deg)
        .into_iter()
        .map(|f| f.into_iter().map(|v| v * scale).collect::<Vec<_>>())
        .filter(|f| delta(g, &action, prim_level, deg, f) == zero)
        .collect();
    let bounds: HashSet<Vec<u64>> = if deg == 0 {
        HashSet::from([vec![0]])
    } else {
        all_normalized(g, prim_level, deg - 1).iter().map(|b| delta(g, &action, prim_level, deg - 1, b)).collect()
    };
    let inside = cocycles.iter().filter(|z| bounds.contains(*z)).count();
    cocycles.len() / inside
}

/// Module-valued normalized 2-cochains on `k` with values in `s`, stored as
/// tuple indices dense over `K x K`.
pub struct ModuleOracle {
    pub s: FiniteAbelianGroup,
    pub k: Arc<FiniteGroup>,
    pub boundaries: HashSet<Vec<usize>>,
    pub representatives: Vec<Vec<usize>>,
}

fn module_delta2(k: &FiniteGroup, s: &FiniteAbelianGroup, f: &[usize]) -> bool {
    let n = k.order();
    let at = |a: usize, b: usize| s.element(f[a * n + b]);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = s.add(&at(b, c), &at(a, k.mul(b, c)));
                let rhs = s.add(&at(k.mul(a, b), c), &at(a, b));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

impl ModuleOracle {
    /// Enumerates `H^2(K, S)` by listing every normalized cocycle.
    pub fn new(s: FiniteAbelianGroup, k: Arc<FiniteGroup>) -> Self {
        let n = k.order();
        let m = s.order();
        let mut boundaries = HashSet::new();
        for code in 0..m.pow(n.saturating_sub(1) as u32) {
            let mut c = vec![0usize; n];
            let mut r = code;
            for slot in c.iter_mut().skip(1) {
                *slot = r % m;
                r /= m;
            }
            let f: Vec<usize> = (0..n * n)
                .map(|i| {
                    let (a, b) = (i / n, i % n);
                    let v = s.add(&s.element(c[a]), &s.element(c[b]));
                    s.index(&s.add(&v, &s.neg(&s.element(c[k.mul(a, b)]))))
                })
                .collect();
            boundaries.insert(f);
        }
        let free: Vec<usize> = (0..n * n).filter(|&i| i / n != 0 && i % n != 0).collect();
        let mut representatives: Vec<Vec<usize>> = Vec::new();
        let mut covered: HashSet<Vec<usize>> = HashSet::new();
        for code in 0..m.pow(free.len() as u32) {
            let mut f = vec![0usize; n * n];
            let mut r = code;
            for &i in &free {
                f[i] = r % m;
                r /= m;
            }
            if covered.contains(&f) || !module_delta2(&k, &s, &f) {
                continue;
            }
            for b in &boundaries {
                let g: Vec<usize> = f.iter().zip(b).map(|(&x, &y)| s.index(&s.add(&s.element(x), &s.element(y)))).collect();
                covered.insert(g);
            }
            representatives.push(f);
        }
        ModuleOracle { s, k, boundaries, representatives }
    }

    pub fn cohomologous(&self, a: &[usize], b: &[usize]) -> bool {
        let d: Vec<usize> =
            a.iter().zip(b).map(|(&x, &y)| self.s.index(&self.s.add(&self.s.element(x), &self.s.neg(&self.s.element(y))))).collect();
        self.boundaries.contains(&d)
    }
}

/// Finite abelian groups of order at most `max`, as invariant factor lists
/// `d1 | d2 | ...`.
pub fn abelian_groups(max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: Vec<u64>, prod: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied();
        let mut d = last.unwrap_or(2);
        while prod * d <= max {
            if last.is_none_or(|l| d % l == 0) {
                let mut p = prefix.clone();
                p.push(d);
                extend(p, prod * d, max, out);
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(Vec::new(), 1, max, &mut out);
    out
}

pub fn census(g: &FiniteGroup) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for x in 0..g.order() {
        let mut y = x;
        let mut k = 1u64;
        while y != 0 {
            y = g.mul(y, x);
            k += 1;
        }
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

pub fn abelian(g: &FiniteGroup) -> bool {
    (0..g.order()).all(|a| (0..g.order()).all(|b| g.mul(a, b) == g.mul(b, a)))
}

/// Solutions of `x^m = e` for every `m <= |G|`; determines a finite abelian
/// group up to isomorphism.
pub fn torsion_profile(g: &FiniteGroup) -> Vec<usize> {
    (1..=g.order() as u64).map(|m| (0..g.order()).filter(|&x| g.pow(x, m) == 0).count()).collect()
}

pub fn torsion_profile_of_factors(factors: &[u64], order: usize) -> Vec<usize> {
    (1..=order as u64)
        .map(|m| factors.iter().map(|&d| gcd(m, d) as usize).product())
        .collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn is_hom(a: &FiniteGroup, b: &FiniteGroup, images: &[usize]) -> bool {
    (0..a.order()).all(|x| (0..a.order()).all(|y| images[a.mul(x, y)] == b.mul(images[x], images[y])))
}

pub fn is_bijection(images: &[usize], n: usize) -> bool {
    let set: HashSet<usize> = images.iter().copied().collect();
    images.len() == n && set.len() == n && images.iter().all(|&x| x < n)
}

/// The groups of order at most 8 up to isomorphism.
pub fn groups_up_to_eight() -> Vec<(&'static str, FiniteGroup)> {
    let ab = |f: &[u64]| FiniteGroup::from_abelian(&FiniteAbelianGroup::new(f.to_vec()).unwrap());
    vec![
        ("1", FiniteGroup::trivial()),
        ("Z2", FiniteGroup::cyclic(2)),
        ("Z3", FiniteGroup::cyclic(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("Z2xZ2", ab(&[2, 2])),
        ("Z5", FiniteGroup::cyclic(5)),
        ("Z6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::symmetric(3)),
        ("Z7", FiniteGroup::cyclic(7)),
        ("Z8", FiniteGroup::cyclic(8)),
        ("Z2xZ4", ab(&[2, 4])),
        ("Z2^3", ab(&[2, 2, 2])),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
    ]
}
