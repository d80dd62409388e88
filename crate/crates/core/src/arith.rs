//! Small integer helpers shared by the modular solvers.

pub use num_integer::{gcd, lcm};

/// Extended gcd on signed values: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        (a as u128 + m as u128 - b as u128) as u64
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Checked lcm that reports overflow instead of wrapping.
pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    let g = gcd(a, b);
    (a / g).checked_mul(b)
}

/// Invariant factors (each dividing the next) of a direct sum of cyclic groups.
/// Trivial summands are dropped.
pub fn invariant_factors(cyclic: &[u64]) -> Vec<u64> {
    let mut prime_powers: Vec<(u64, Vec<u64>)> = Vec::new();
    for &c in cyclic {
        for (p, e) in factorize(c) {
            let q = p.pow(e);
            match prime_powers.iter_mut().find(|(pp, _)| *pp == p) {
                Some((_, v)) => v.push(q),
                None => prime_powers.push((p, vec![q])),
            }
        }
    }
    let width = prime_powers.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; width];
    for (_, mut v) in prime_powers {
        v.sort_unstable();
        let offset = width - v.len();
        for (i, q) in v.into_iter().enumerate() {
            out[offset + i] *= q;
        }
    }
    out
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
