//! Exact values in Q/Z, characters and bilinear forms on finite abelian groups.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::FiniteAbelianGroup;
use crate::arith::{checked_lcm, gcd};
use crate::error::{Error, Result};

/// An element `p/q` of Q/Z kept in lowest terms with `0 <= p < q`.
///
/// Denominators up to `u64::MAX` take the machine-word path; anything that
/// overflows is carried as a big rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CircleValue {
    Small { num: u64, den: u64 },
    Big { num: BigUint, den: BigUint },
}

impl Default for CircleValue {
    fn default() -> Self {
        CircleValue::zero()
    }
}

impl CircleValue {
    pub fn zero() -> Self {
        CircleValue::Small { num: 0, den: 1 }
    }

    /// `num/den` reduced mod 1. Panics on a zero denominator.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let n = num % den;
        let g = gcd(n, den);
        CircleValue::Small { num: n / g, den: den / g }
    }

    /// Signed numerator, reduced mod 1.
    pub fn from_signed(num: i128, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let n = num.rem_euclid(den as i128) as u64;
        CircleValue::new(n, den)
    }

    pub fn from_big(num: BigUint, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let n = num % &den;
        let g = n.gcd(&den);
        let (n, d) = if g.is_zero() { (n, den) } else { (&n / &g, &den / &g) };
        match (n.to_u64(), d.to_u64()) {
            (Some(num), Some(den)) => CircleValue::Small { num, den },
            _ => CircleValue::Big { num: n, den: d },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CircleValue::Small { num, .. } => *num == 0,
            CircleValue::Big { num, .. } => num.is_zero(),
        }
    }

    fn parts(&self) -> (BigUint, BigUint) {
        match self {
            CircleValue::Small { num, den } => (BigUint::from(*num), BigUint::from(*den)),
            CircleValue::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn denominator(&self) -> BigUint {
        self.parts().1
    }

    /// Denominator if it fits in a machine word.
    pub fn small_denominator(&self) -> Option<u64> {
        match self {
            CircleValue::Small { den, .. } => Some(*den),
            CircleValue::Big { den, .. } => den.to_u64(),
        }
    }

    /// Numerator of this value written over `level`, if `level` is a multiple
    /// of the denominator.
    pub fn at_level(&self, level: u64) -> Option<u64> {
        match self {
            CircleValue::Small { num, den } => {
                if !level.is_multiple_of(*den) {
                    None
                } else {
                    Some(((*num as u128 * (level / den) as u128) % level as u128) as u64)
                }
            }
            CircleValue::Big { .. } => None,
        }
    }

    pub fn add(&self, other: &CircleValue) -> CircleValue {
        if let (CircleValue::Small { num: a, den: b }, CircleValue::Small { num: c, den: d }) =
            (self, other)
        {
            if let Some(l) = checked_lcm(*b, *d) {
                let x = *a as u128 * (l / b) as u128 + *c as u128 * (l / d) as u128;
                return CircleValue::new((x % l as u128) as u64, l);
            }
        }
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        CircleValue::from_big(&a * &d + &c * &b, b * d)
    }

    pub fn neg(&self) -> CircleValue {
        match self {
            CircleValue::Small { num, den } => CircleValue::new(den - num, *den),
            CircleValue::Big { num, den } => CircleValue::from_big(den - num, den.clone()),
        }
    }

    pub fn sub(&self, other: &CircleValue) -> CircleValue {
        self.add(&other.neg())
    }

    /// Integer multiple, possibly negative.
    pub fn scale(&self, k: i64) -> CircleValue {
        match self {
            CircleValue::Small { num, den } => {
                let n = (*num as i128 * k as i128).rem_euclid(*den as i128) as u64;
                CircleValue::new(n, *den)
            }
            CircleValue::Big { num, den } => {
                let m = BigUint::from(k.unsigned_abs()) * num % den;
                let v = CircleValue::from_big(m, den.clone());
                if k < 0 {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    /// Additive order in Q/Z, i.e. the reduced denominator.
    pub fn order(&self) -> BigUint {
        self.denominator()
    }
}

impl PartialOrd for CircleValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CircleValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        (a * &d).cmp(&(c * &b)).then(b.cmp(&d))
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (n, d) = self.parts();
        write!(f, "{}/{}", n, d)
    }
}

impl FromStr for CircleValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("not a rational value: {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        let n: BigUint = n.parse().map_err(|_| bad())?;
        let d: BigUint = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        let v = CircleValue::from_big(n, d);
        Ok(if neg { v.neg() } else { v })
    }
}

impl Serialize for CircleValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CircleValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(CircleValue::from_signed(n as i128, 1)),
        }
    }
}

/// A homomorphism from a finite abelian group to Q/Z, stored by its values on
/// the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub domain: FiniteAbelianGroup,
    pub values: Vec<CircleValue>,
}

impl Character {
    pub fn new(domain: FiniteAbelianGroup, values: Vec<CircleValue>) -> Result<Self> {
        if values.len() != domain.rank() {
            return Err(Error::Malformed("character needs one value per generator".into()));
        }
        for (v, &d) in values.iter().zip(domain.factors()) {
            if !v.scale(d as i64).is_zero() {
                return Err(Error::Malformed(format!("value {v} is not killed by {d}")));
            }
        }
        Ok(Character { domain, values })
    }

    /// The character whose value on the i-th generator is `t_i / d_i`.
    pub fn from_dual_coords(domain: &FiniteAbelianGroup, t: &[u64]) -> Self {
        let values = t
            .iter()
            .zip(domain.factors())
            .map(|(&x, &d)| CircleValue::new(x, d))
            .collect();
        Character { domain: domain.clone(), values }
    }

    /// Inverse of [`Character::from_dual_coords`].
    pub fn dual_coords(&self) -> Vec<u64> {
        self.values
            .iter()
            .zip(self.domain.factors())
            .map(|(v, &d)| v.at_level(d).expect("character value has the right order"))
            .collect()
    }

    pub fn evaluate(&self, s: &[u64]) -> CircleValue {
        let mut acc = CircleValue::zero();
        for (v, &x) in self.values.iter().zip(s) {
            acc = acc.add(&v.scale(x as i64));
        }
        acc
    }
}

/// The Pontryagin dual of `S`, presented with the same invariant factors.
/// The i-th basis character sends the i-th generator to `1/d_i`.
pub fn dual_group(s: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    s.clone()
}

/// Evaluation of `x` in `S` against the dual-coordinate vector `t` of a
/// character: `sum_i x_i t_i / d_i`, written over the exponent of `S`.
pub fn pairing(s: &FiniteAbelianGroup, t: &[u64], x: &[u64]) -> CircleValue {
    let e = s.exponent();
    let mut acc: u128 = 0;
    for ((&ti, &xi), &d) in t.iter().zip(x).zip(s.factors()) {
        acc += (ti as u128 * xi as u128 % d as u128) * (e / d) as u128;
    }
    CircleValue::new((acc % e as u128) as u64, e)
}

/// The map `S -> dual(dual(S))`; in the coordinates used here it is the
/// identity on tuples, returned as an index table.
pub fn double_dual_iso(s: &FiniteAbelianGroup) -> Vec<usize> {
    let dd = dual_group(&dual_group(s));
    (0..s.order())
        .map(|i| {
            let x = s.element(i);
            // ev(x) evaluated on the basis characters gives x_j / d_j.
            let coords: Vec<u64> = (0..s.rank())
                .map(|j| {
                    let mut t = vec![0; s.rank()];
                    t[j] = 1;
                    pairing(s, &t, &x).at_level(s.factors()[j]).unwrap()
                })
                .collect();
            dd.index(&coords)
        })
        .collect()
}

/// A bilinear form `S x S -> Q/Z` given by its values on pairs of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub domain: FiniteAbelianGroup,
    pub matrix: Vec<Vec<CircleValue>>,
}

impl BilinearForm {
    pub fn new(domain: FiniteAbelianGroup, matrix: Vec<Vec<CircleValue>>) -> Result<Self> {
        let r = domain.rank();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Malformed("bilinear form matrix has the wrong shape".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let g = gcd(domain.factors()[i], domain.factors()[j]);
                if !matrix[i][j].scale(g as i64).is_zero() {
                    return Err(Error::Malformed(format!(
                        "entry ({i},{j}) is not killed by the orders of both generators"
                    )));
                }
            }
        }
        Ok(BilinearForm { domain, matrix })
    }

    pub fn value(&self, x: &[u64], y: &[u64]) -> CircleValue {
        let mut acc = CircleValue::zero();
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                if xi != 0 && yj != 0 {
                    acc = acc.add(&self.matrix[i][j].scale((xi * yj) as i64));
                }
            }
        }
        acc
    }

    /// Least common multiple of the denominators of the matrix entries.
    pub fn level(&self) -> u64 {
        self.matrix
            .iter()
            .flatten()
            .map(|v| v.small_denominator().unwrap_or(1))
            .fold(1, |a, b| checked_lcm(a, b).unwrap_or(u64::MAX))
    }

    /// `b#: S -> dual(S)`, `x -> b(x, -)`, as an index table into the dual,
    /// together with whether it is bijective.
    pub fn sharp(&self) -> (Vec<usize>, bool) {
        let s = &self.domain;
        let dual = dual_group(s);
        let map: Vec<usize> = (0..s.order())
            .map(|i| {
                let x = s.element(i);
                let coords: Vec<u64> = (0..s.rank())
                    .map(|j| {
                        let mut e = vec![0; s.rank()];
                        e[j] = 1;
                        self.value(&x, &e).at_level(s.factors()[j]).unwrap()
                    })
                    .collect();
                dual.index(&coords)
            })
            .collect();
        let mut seen = vec![false; dual.order()];
        let mut bijective = true;
        for &m in &map {
            if seen[m] {
                bijective = false;
            }
            seen[m] = true;
        }
        (map, bijective)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.sharp().1
    }
}
