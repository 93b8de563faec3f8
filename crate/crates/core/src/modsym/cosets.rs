//! Cosets of `Gamma_1(M)` in `SL_2(Z)` up to sign, encoded by bottom rows.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Bottom row `(c, d)` modulo `M`, with `gcd(c, d, M) = 1`, up to a global
/// sign. The stored pair is the lexicographically smaller of `(c, d)` and
/// `(-c, -d)` with entries in `0..M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ManinCoset {
    pub level: u64,
    pub c: u64,
    pub d: u64,
}

impl ManinCoset {
    pub fn new(level: u64, c: i128, d: i128) -> Result<Self> {
        let m = level as i128;
        let (c, d) = (c.rem_euclid(m), d.rem_euclid(m));
        if arith::gcd(arith::gcd(c as i64, d as i64), level as i64) != 1 {
            return Err(Error::InvalidParameters(format!("({c}, {d}) is not primitive modulo {level}")));
        }
        let neg = ((m - c) % m, (m - d) % m);
        let (c, d) = if neg < (c, d) { neg } else { (c, d) };
        Ok(ManinCoset { level, c: c as u64, d: d as u64 })
    }

    /// Membership in `S_M^0`: neither entry is divisible by `M`.
    pub fn in_s0(&self) -> bool {
        self.c != 0 && self.d != 0
    }

    /// A matrix `(a b; c' d')` in `SL_2(Z)` with bottom row congruent to
    /// `(c, d)` modulo `M`.
    pub fn lift(&self) -> [i128; 4] {
        lift_bottom_row(self.level, self.c as i128, self.d as i128)
    }

    /// Right action of `sigma = (0 -1; 1 0)`: `(c, d) -> (d, -c)`.
    pub fn sigma(&self) -> Self {
        Self::new(self.level, self.d as i128, -(self.c as i128)).unwrap()
    }

    /// Right action of `tau = (0 -1; 1 -1)`: `(c, d) -> (d, -c - d)`.
    pub fn tau(&self) -> Self {
        Self::new(self.level, self.d as i128, -(self.c as i128) - self.d as i128).unwrap()
    }

    /// Diamond operator: `(c, d) -> (tc, td)`.
    pub fn diamond(&self, t: i64) -> Result<Self> {
        if arith::gcd(t, self.level as i64) != 1 {
            return Err(Error::NotCoprime { t, level: self.level });
        }
        Self::new(self.level, t as i128 * self.c as i128, t as i128 * self.d as i128)
    }
}

/// Lifts a primitive bottom row modulo `M` to `SL_2(Z)`.
pub fn lift_bottom_row(level: u64, c: i128, d: i128) -> [i128; 4] {
    let m = level as i128;
    let c0 = c.rem_euclid(m);
    let c1 = if c0 == 0 { m } else { c0 };
    let mut d1 = d.rem_euclid(m);
    while gcd128(c1, d1) != 1 {
        d1 += m;
    }
    let (g, x, y) = egcd128(d1, c1);
    debug_assert_eq!(g, 1);
    // a d1 - b c1 = 1 with a = x, b = -y
    [x, -y, c1, d1]
}

pub(crate) fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `(g, x, y)` with `a x + b y = g >= 0`.
pub(crate) fn egcd128(a: i128, b: i128) -> (i128, i128, i128) {
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

/// All cosets at level `M`, sorted, with an index.
#[derive(Clone, Debug)]
pub struct CosetTable {
    level: u64,
    cosets: Vec<ManinCoset>,
    index: HashMap<(u64, u64), usize>,
}

impl CosetTable {
    pub fn new(level: u64) -> Result<Self> {
        let cosets = enumerate_cosets(level)?;
        let index = cosets.iter().enumerate().map(|(i, x)| ((x.c, x.d), i)).collect();
        Ok(CosetTable { level, cosets, index })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[ManinCoset] {
        &self.cosets
    }

    pub fn get(&self, i: usize) -> ManinCoset {
        self.cosets[i]
    }

    /// Index of the coset of an arbitrary primitive bottom row.
    pub fn index_of(&self, c: i128, d: i128) -> usize {
        let x = ManinCoset::new(self.level, c, d).expect("primitive bottom row");
        self.index[&(x.c, x.d)]
    }

    pub fn position(&self, x: &ManinCoset) -> usize {
        self.index[&(x.c, x.d)]
    }
}

/// All normalized cosets at level `M >= 4`.
pub fn enumerate_cosets(level: u64) -> Result<Vec<ManinCoset>> {
    if level < 4 {
        return Err(Error::InvalidLevel { level, reason: "Gamma_1(M) has torsion for M < 4" });
    }
    let mut out = Vec::new();
    for c in 0..level {
        for d in 0..level {
            if let Ok(x) = ManinCoset::new(level, c as i128, d as i128) {
                if x.c == c && x.d == d {
                    out.push(x);
                }
            }
        }
    }
    Ok(out)
}

/// Number of cosets up to sign: `(M^2 / 2) prod_{p | M} (1 - 1/p^2)`.
pub fn coset_count(level: u64) -> u64 {
    let full = arith::factorize(level)
        .into_iter()
        .fold(level * level, |acc, (p, _)| acc / (p * p) * (p * p - 1));
    full / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        // 12 primitive pairs modulo 4, paired up by sign
        assert_eq!(enumerate_cosets(4).unwrap().len(), 6);
        let five = enumerate_cosets(5).unwrap();
        assert_eq!(five.len(), 12);
        assert_eq!(five.iter().filter(|x| x.in_s0()).count(), 8);
        for m in 4..40 {
            assert_eq!(enumerate_cosets(m).unwrap().len() as u64, coset_count(m));
        }
        assert!(enumerate_cosets(3).is_err());
    }

    #[test]
    fn zero_one_outside_s0() {
        for m in 4..20 {
            assert!(!ManinCoset::new(m, 0, 1).unwrap().in_s0());
        }
    }

    #[test]
    fn lifts_have_determinant_one() {
        for m in [4u64, 6, 12, 25] {
            for x in enumerate_cosets(m).unwrap() {
                let [a, b, c, d] = x.lift();
                assert_eq!(a * d - b * c, 1);
                assert_eq!(ManinCoset::new(m, c, d).unwrap(), x);
            }
        }
    }

    #[test]
    fn sigma_and_tau_orders() {
        for x in enumerate_cosets(12).unwrap() {
            assert_eq!(x.sigma().sigma(), x);
            assert_eq!(x.tau().tau().tau(), x);
            assert_ne!(x.sigma(), x);
            assert_ne!(x.tau(), x);
        }
    }

    #[test]
    fn diamond_example() {
        let x = ManinCoset::new(5, 1, 0).unwrap();
        assert_eq!(x.diamond(2).unwrap(), ManinCoset::new(5, 2, 0).unwrap());
    }
}
