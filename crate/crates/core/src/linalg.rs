//! Sparse linear algebra over `Z/m` and small dense Smith normal forms over Z.

use crate::arith::{ext_gcd, gcd, inv_mod};

/// Sparse row: strictly increasing column indices with nonzero values mod m.
pub type SparseRow = Vec<(usize, u64)>;

/// `ca * a + cb * b` mod m.
pub fn combine(a: &SparseRow, ca: u64, b: &SparseRow, cb: u64, m: u64) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mm = m as u128;
    let push = |out: &mut SparseRow, c: usize, v: u128| {
        let v = (v % mm) as u64;
        if v != 0 {
            out.push((c, v));
        }
    };
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(c1, v1)), Some(&(c2, v2))) if c1 == c2 => {
                push(&mut out, c1, v1 as u128 * ca as u128 + v2 as u128 * cb as u128);
                i += 1;
                j += 1;
            }
            (Some(&(c1, v1)), Some(&(c2, _))) if c1 < c2 => {
                push(&mut out, c1, v1 as u128 * ca as u128);
                i += 1;
            }
            (Some(&(c1, v1)), None) => {
                push(&mut out, c1, v1 as u128 * ca as u128);
                i += 1;
            }
            (_, Some(&(c2, v2))) => {
                push(&mut out, c2, v2 as u128 * cb as u128);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn scale_row(a: &SparseRow, c: u64, m: u64) -> SparseRow {
    a.iter()
        .filter_map(|&(col, v)| {
            let x = ((v as u128 * c as u128) % m as u128) as u64;
            (x != 0).then_some((col, x))
        })
        .collect()
}

#[inline]
fn to_mod(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Solves `g * x = t (mod m)` with the least nonnegative solution.
fn solve_scalar(g: u64, t: u64, m: u64) -> Option<u64> {
    let gg = gcd(g, m);
    if !t.is_multiple_of(gg) {
        return None;
    }
    let m2 = m / gg;
    if m2 == 1 {
        return Some(0);
    }
    let inv = inv_mod((g / gg) % m2, m2)?;
    Some(((t / gg) as u128 * inv as u128 % m2 as u128) as u64)
}

/// Echelon form over `Z/m` with the Howell closure property: every pivot row
/// is accompanied by its annihilator multiple, so back substitution never
/// gets stuck on a consistent system.
pub struct ModEchelon {
    m: u64,
    ncols: usize,
    pivots: Vec<Option<(SparseRow, u64)>>,
    consistent: bool,
}

impl ModEchelon {
    pub fn new(ncols: usize, m: u64) -> Self {
        ModEchelon { m, ncols, pivots: vec![None; ncols], consistent: true }
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn insert(&mut self, row: SparseRow, rhs: u64) {
        let m = self.m;
        let mut stack = vec![(row, rhs % m)];
        while let Some((mut row, mut rhs)) = stack.pop() {
            loop {
                let Some(&(c, p)) = row.first() else {
                    if rhs != 0 {
                        self.consistent = false;
                    }
                    break;
                };
                match self.pivots[c].take() {
                    None => {
                        let g = gcd(p, m);
                        if g != 1 {
                            let k = m / g;
                            stack.push((scale_row(&row, k, m), ((rhs as u128 * k as u128) % m as u128) as u64));
                        }
                        self.pivots[c] = Some((row, rhs));
                        break;
                    }
                    Some((prow, prhs)) => {
                        let q = prow[0].1;
                        if let Some(f) = solve_scalar(q, p, m).filter(|_| p % gcd(q, m) == 0) {
                            // row -= f * prow
                            let nf = m - f % m;
                            row = combine(&row, 1, &prow, nf % m, m);
                            rhs = ((rhs as u128 + nf as u128 * prhs as u128) % m as u128) as u64;
                            self.pivots[c] = Some((prow, prhs));
                        } else {
                            let (g, x, y) = ext_gcd(p as i128, q as i128);
                            let (x, y) = (to_mod(x, m), to_mod(y, m));
                            let a = to_mod(-((q as i128) / g), m);
                            let b = to_mod((p as i128) / g, m);
                            let new_p = combine(&row, x, &prow, y, m);
                            let new_p_rhs = ((x as u128 * rhs as u128 + y as u128 * prhs as u128) % m as u128) as u64;
                            let other = combine(&row, a, &prow, b, m);
                            let other_rhs = ((a as u128 * rhs as u128 + b as u128 * prhs as u128) % m as u128) as u64;
                            stack.push((new_p, new_p_rhs));
                            row = other;
                            rhs = other_rhs;
                        }
                    }
                }
            }
        }
    }

    /// Canonical representative of `v` modulo the row span: each pivot
    /// coordinate is brought into `[0, gcd(pivot, m))`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let m = self.m;
        let mut v = v.to_vec();
        for c in 0..self.ncols {
            let Some((row, _)) = &self.pivots[c] else { continue };
            let p = row[0].1;
            let g = gcd(p, m);
            let r = v[c] % g;
            if v[c] == r {
                continue;
            }
            let q = solve_scalar(p, (v[c] + m - r) % m, m).expect("pivot divides the difference");
            let nq = (m - q) % m;
            for &(j, a) in row {
                v[j] = ((v[j] as u128 + nq as u128 * a as u128) % m as u128) as u64;
            }
        }
        v
    }

    /// Back substitution with free coordinates set to zero.
    pub fn solution(&self) -> Option<Vec<u64>> {
        if !self.consistent {
            return None;
        }
        let m = self.m;
        let mut x = vec![0u64; self.ncols];
        for c in (0..self.ncols).rev() {
            let Some((row, rhs)) = &self.pivots[c] else { continue };
            let mut t = *rhs as u128;
            for &(j, v) in &row[1..] {
                t += (m - v) as u128 * x[j] as u128;
            }
            let t = (t % m as u128) as u64;
            x[c] = solve_scalar(row[0].1, t, m)?;
        }
        Some(x)
    }
}

/// Solves `A x = b (mod m)` for sparse `A` with `ncols` unknowns.
/// Returns the deterministic solution with free parameters zero.
pub fn solve_mod(ncols: usize, rows: &[SparseRow], rhs: &[u64], m: u64) -> Option<Vec<u64>> {
    if m == 1 {
        return Some(vec![0; ncols]);
    }
    let mut e = ModEchelon::new(ncols, m);
    for (r, &b) in rows.iter().zip(rhs) {
        e.insert(r.clone(), b);
        if !e.is_consistent() {
            return None;
        }
    }
    let x = e.solution()?;
    debug_assert!(rows.iter().zip(rhs).all(|(r, &b)| {
        let s: u128 = r.iter().map(|&(j, v)| v as u128 * x[j] as u128).sum();
        (s % m as u128) as u64 == b % m
    }));
    Some(x)
}

/// A column operation `V <- V E` where `E` touches two columns `s`, `t`:
/// `E e_s = a e_s + c e_t`, `E e_t = b e_s + d e_t`.
#[derive(Clone, Copy, Debug)]
struct ColOp {
    s: usize,
    t: usize,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

/// Smith normal form of a sparse matrix over `Z/m`, tracking enough of the
/// column transform to recover the columns of `V` behind non-unit pivots.
#[derive(Clone, Debug)]
pub struct ModSmith {
    pub modulus: u64,
    /// Pivots equal to 1.
    pub unit_rank: usize,
    /// Non-unit, nonzero diagonal entries (divisors of the modulus), in
    /// divisibility order, each with the matching column of `V`.
    pub torsion: Vec<(u64, Vec<u64>)>,
    /// Total number of nonzero diagonal entries.
    pub rank: usize,
    /// Columns of `V` behind zero diagonal entries (only when requested).
    pub null_columns: Vec<Vec<u64>>,
}

pub fn smith_mod(ncols: usize, rows: Vec<SparseRow>, m: u64, want_columns: bool) -> ModSmith {
    smith_mod_full(ncols, rows, m, want_columns, false)
}

/// As [`smith_mod`], optionally also returning the kernel-side columns.
pub fn smith_mod_full(ncols: usize, rows: Vec<SparseRow>, m: u64, want_columns: bool, want_null: bool) -> ModSmith {
    let want_columns = want_columns || want_null;
    let mut ops: Vec<ColOp> = Vec::new();
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().map(|r| (!r.is_empty()).then_some(r)).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for &(c, _) in r {
                col_rows[c].push(i);
            }
        }
    }
    let mut col_done = vec![false; ncols];
    let mut unit_rank = 0usize;

    // Sparse phase: eliminate unit pivots, shortest row first.
    loop {
        let mut progress = false;
        for c in 0..ncols {
            if col_done[c] {
                continue;
            }
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            let mut best: Option<(usize, usize, u64)> = None;
            col_rows[c].retain(|&i| {
                let Some(r) = &rows[i] else { return false };
                match r.binary_search_by_key(&c, |e| e.0) {
                    Ok(pos) => {
                        let v = r[pos].1;
                        if gcd(v, m) == 1 && best.is_none_or(|(_, len, _)| r.len() < len) {
                            best = Some((i, r.len(), v));
                        }
                        true
                    }
                    Err(_) => false,
                }
            });
            let Some((pr, _, pv)) = best else { continue };
            progress = true;
            let prow = rows[pr].take().unwrap();
            let inv = inv_mod(pv, m).unwrap();
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != pr).collect();
            for i in others {
                let Some(r) = rows[i].take() else { continue };
                let Ok(pos) = r.binary_search_by_key(&c, |e| e.0) else {
                    rows[i] = Some(r);
                    continue;
                };
                let f = ((r[pos].1 as u128 * inv as u128) % m as u128) as u64;
                let nr = combine(&r, 1, &prow, (m - f) % m, m);
                for &(cc, _) in &nr {
                    col_rows[cc].push(i);
                }
                rows[i] = (!nr.is_empty()).then_some(nr);
            }
            if want_columns {
                for &(j, v) in &prow {
                    if j != c {
                        let q = ((v as u128 * inv as u128) % m as u128) as u64;
                        // col_j -= q col_c
                        ops.push(ColOp { s: c, t: j, a: 1, b: (m - q) % m, c: 0, d: 1 });
                    }
                }
            }
            col_done[c] = true;
            col_rows[c].clear();
            unit_rank += 1;
        }
        if !progress {
            break;
        }
    }

    // Dense phase on whatever is left.
    let live_rows: Vec<SparseRow> = rows.into_iter().flatten().collect();
    let mut colid: Vec<usize> = (0..ncols).filter(|&c| !col_done[c]).collect();
    let mut pos_of = vec![usize::MAX; ncols];
    for (k, &c) in colid.iter().enumerate() {
        pos_of[c] = k;
    }
    let nc = colid.len();
    let nr = live_rows.len();
    let mut a: Vec<Vec<u64>> = live_rows
        .iter()
        .map(|r| {
            let mut d = vec![0u64; nc];
            for &(c, v) in r {
                d[pos_of[c]] = v;
            }
            d
        })
        .collect();
    let mm = m as u128;
    let mut diag: Vec<u64> = Vec::new();
    let mut t = 0usize;
    while t < nr.min(nc) {
        // Pivot with the smallest gcd against m.
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 {
                    let g = gcd(v, m);
                    if best.is_none_or(|(_, _, bg)| g < bg) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            colid.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                let b = a[i][t];
                if b == 0 {
                    continue;
                }
                let p = a[t][t];
                if let Some(f) = b.is_multiple_of(gcd(p, m)).then(|| solve_scalar(p, b, m)).flatten() {
                    let nf = (m - f) % m;
                    for j in t..nc {
                        a[i][j] = ((a[i][j] as u128 + nf as u128 * a[t][j] as u128) % mm) as u64;
                    }
                } else {
                    let (g, x, y) = ext_gcd(p as i128, b as i128);
                    let (x, y) = (to_mod(x, m), to_mod(y, m));
                    let u = to_mod(-(b as i128 / g), m);
                    let w = to_mod(p as i128 / g, m);
                    for j in t..nc {
                        let (rt, ri) = (a[t][j] as u128, a[i][j] as u128);
                        a[t][j] = ((x as u128 * rt + y as u128 * ri) % mm) as u64;
                        a[i][j] = ((u as u128 * rt + w as u128 * ri) % mm) as u64;
                    }
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                let b = a[t][j];
                if b == 0 {
                    continue;
                }
                let p = a[t][t];
                if let Some(f) = b.is_multiple_of(gcd(p, m)).then(|| solve_scalar(p, b, m)).flatten() {
                    let nf = (m - f) % m;
                    for row in a.iter_mut().skip(t) {
                        row[j] = ((row[j] as u128 + nf as u128 * row[t] as u128) % mm) as u64;
                    }
                    if want_columns {
                        ops.push(ColOp { s: colid[t], t: colid[j], a: 1, b: nf, c: 0, d: 1 });
                    }
                } else {
                    let (g, x, y) = ext_gcd(p as i128, b as i128);
                    let (x, y) = (to_mod(x, m), to_mod(y, m));
                    let u = to_mod(-(b as i128 / g), m);
                    let w = to_mod(p as i128 / g, m);
                    for row in a.iter_mut().skip(t) {
                        let (ct, cj) = (row[t] as u128, row[j] as u128);
                        row[t] = ((x as u128 * ct + y as u128 * cj) % mm) as u64;
                        row[j] = ((u as u128 * ct + w as u128 * cj) % mm) as u64;
                    }
                    if want_columns {
                        ops.push(ColOp { s: colid[t], t: colid[j], a: x, c: y, b: u, d: w });
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let g = gcd(a[t][t], m);
            let offender = (t + 1..nr).find(|&i| a[i][t + 1..].iter().any(|&v| v % g != 0));
            match offender {
                Some(i) => {
                    for j in t..nc {
                        a[t][j] = ((a[t][j] as u128 + a[i][j] as u128) % mm) as u64;
                    }
                }
                None => break,
            }
        }
        diag.push(gcd(a[t][t], m));
        t += 1;
    }

    let mut torsion = Vec::new();
    for (k, &d) in diag.iter().enumerate() {
        if d == 1 || d == m {
            continue;
        }
        let col = if want_columns { apply_ops(&ops, colid[k], ncols, m) } else { Vec::new() };
        torsion.push((d, col));
    }
    let mut null_columns = Vec::new();
    if want_null {
        for (k, &c) in colid.iter().enumerate() {
            if k >= diag.len() || diag[k] == m {
                null_columns.push(apply_ops(&ops, c, ncols, m));
            }
        }
    }
    let rank = unit_rank + diag.iter().filter(|&&d| d != m).count();
    let unit_rank = unit_rank + diag.iter().filter(|&&d| d == 1).count();
    ModSmith { modulus: m, unit_rank, torsion, rank, null_columns }
}

fn apply_ops(ops: &[ColOp], col: usize, n: usize, m: u64) -> Vec<u64> {
    let mut w = vec![0u64; n];
    w[col] = 1;
    let mm = m as u128;
    for op in ops.iter().rev() {
        let (ws, wt) = (w[op.s] as u128, w[op.t] as u128);
        if ws == 0 && wt == 0 {
            continue;
        }
        w[op.s] = ((op.a as u128 * ws + op.b as u128 * wt) % mm) as u64;
        w[op.t] = ((op.c as u128 * ws + op.d as u128 * wt) % mm) as u64;
    }
    w
}

/// Smith normal form over Z of a small dense matrix: returns the diagonal and
/// the column transform `V` with `U A V = D`.
pub fn smith_integer(mut a: Vec<Vec<i128>>, ncols: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let nr = a.len();
    let nc = ncols;
    let mut v: Vec<Vec<i128>> = (0..nc).map(|i| (0..nc).map(|j| (i == j) as i128).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t] == 0 {
                    continue;
                }
                let q = a[i][t].div_euclid(a[t][t]);
                for j in t..nc {
                    a[i][j] -= q * a[t][j];
                }
                if a[i][t] != 0 {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j] == 0 {
                    continue;
                }
                let q = a[t][j].div_euclid(a[t][t]);
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
                for row in v.iter_mut() {
                    row[j] -= q * row[t];
                }
                if a[t][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let p = a[t][t];
            let offender = (t + 1..nr).find(|&i| a[i][t + 1..].iter().any(|&x| x % p != 0));
            match offender {
                Some(i) => {
                    for j in t..nc {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    (diag, v)
}
