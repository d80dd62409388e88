//! Finite abelian groups in invariant-factor form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z/d_1 x ... x Z/d_r` with `d_i | d_{i+1}` and every `d_i > 1`.
///
/// Elements are coordinate tuples; the flat index is mixed radix with the
/// first coordinate most significant, so index 0 is the zero tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteAbelianGroup::new(v)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

impl FiniteAbelianGroup {
    /// Accepts invariant factors; factors equal to 1 are dropped.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::Malformed("invariant factor 0 (infinite cyclic) is not allowed".into()));
        }
        let factors: Vec<u64> = factors.into_iter().filter(|&d| d > 1).collect();
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Malformed(format!(
                    "invariant factors must divide each other: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// Any list of cyclic orders; brought into invariant-factor form.
    pub fn from_cyclic(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Malformed("cyclic order 0 is not allowed".into()));
        }
        FiniteAbelianGroup::new(crate::arith::invariant_factors(orders))
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        FiniteAbelianGroup::new(vec![n]).expect("positive order")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        out
    }

    pub fn index(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&xi, &d) in x.iter().zip(&self.factors) {
            idx = idx * d as usize + (xi % d) as usize;
        }
        idx
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.factors).map(|((&a, &b), &d)| (a + b) % d).collect()
    }

    pub fn add_into(&self, acc: &mut [u64], y: &[u64]) {
        for ((a, &b), &d) in acc.iter_mut().zip(y).zip(&self.factors) {
            *a = (*a + b) % d;
        }
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.factors).map(|(&a, &d)| (d - a % d) % d).collect()
    }

    pub fn scale(&self, x: &[u64], k: i64) -> Vec<u64> {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &d)| (a as i128 * k as i128).rem_euclid(d as i128) as u64)
            .collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &d)| d / crate::arith::gcd(a, d))
            .fold(1, crate::arith::lcm)
    }

    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> Vec<u64> {
        let mut v = self.factors.clone();
        v.extend_from_slice(&other.factors);
        v
    }
}
