//! Cusps of `X_1(N)`: classification, diamond action and orbit structure.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cosets::gcd128;
use crate::arith;
use crate::error::{Error, Result};

/// A point of `P^1(Q)` as a reduced fraction `p/q` with `q >= 0`; `1/0` is
/// the cusp at infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    pub p: i128,
    pub q: i128,
}

impl Cusp {
    pub fn new(p: i128, q: i128) -> Self {
        assert!(p != 0 || q != 0, "0/0 is not a cusp");
        let g = gcd128(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Cusp { p, q }
    }

    pub fn infinity() -> Self {
        Cusp { p: 1, q: 0 }
    }

    pub fn zero() -> Self {
        Cusp { p: 0, q: 1 }
    }

    pub fn integer(n: i128) -> Self {
        Cusp { p: n, q: 1 }
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    /// Image under a matrix `(a b; c d)` acting by Moebius transformation.
    pub fn act(&self, m: [i128; 4]) -> Self {
        let [a, b, c, d] = m;
        Cusp::new(a * self.p + b * self.q, c * self.p + d * self.q)
    }
}

impl fmt::Debug for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "oo")
        } else if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// `Gamma_1(N)`-class invariant of a cusp `a/c`: the pair
/// `(c mod N, a mod gcd(c, N))`, taken up to simultaneous sign.
pub fn cusp_key(level: u64, x: &Cusp) -> (u64, u64) {
    normalize_key(level, x.q, x.p)
}

fn normalize_key(level: u64, c: i128, a: i128) -> (u64, u64) {
    let n = level as i128;
    let c = c.rem_euclid(n);
    let g = gcd128(c, n);
    let a = a.rem_euclid(g);
    let neg = ((n - c) % n, (g - a) % g);
    let key = if neg < (c, a) { neg } else { (c, a) };
    (key.0 as u64, key.1 as u64)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspClass {
    pub key: (u64, u64),
    pub rep: Cusp,
    /// In `C_N^0`: not in the diamond orbit of `0` (denominator not a unit).
    pub in_c0_upper: bool,
    /// In the diamond orbit of `0`.
    pub in_orbit_of_zero: bool,
    /// In the diamond orbit of `infinity`.
    pub in_orbit_of_infinity: bool,
}

/// Cusp classes of `X_1(N)`.
#[derive(Clone, Debug)]
pub struct CuspTable {
    level: u64,
    classes: Vec<CuspClass>,
    index: HashMap<(u64, u64), usize>,
}

impl CuspTable {
    pub fn new(level: u64) -> Result<Self> {
        if level < 4 {
            return Err(Error::InvalidLevel { level, reason: "cusp tables need N >= 4" });
        }
        let n = level as i128;
        let mut keys = BTreeSet::new();
        for c in 0..n {
            let g = gcd128(c, n);
            for a in 0..g {
                if gcd128(a, g) == 1 {
                    keys.insert(normalize_key(level, c, a));
                }
            }
        }
        let mut classes = Vec::with_capacity(keys.len());
        for key in keys {
            let rep = representative(level, key);
            let g = gcd128(key.0 as i128, n);
            classes.push(CuspClass {
                key,
                rep,
                in_c0_upper: g != 1,
                in_orbit_of_zero: g == 1,
                in_orbit_of_infinity: key.0 == 0,
            });
        }
        let index = classes.iter().enumerate().map(|(i, c)| (c.key, i)).collect();
        Ok(CuspTable { level, classes, index })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[CuspClass] {
        &self.classes
    }

    pub fn class_of(&self, x: &Cusp) -> usize {
        self.index[&cusp_key(self.level, x)]
    }

    pub fn infinity(&self) -> usize {
        self.class_of(&Cusp::infinity())
    }

    pub fn zero(&self) -> usize {
        self.class_of(&Cusp::zero())
    }

    /// Class index of `<t> c`: `(c, a) -> (tc, t^{-1} a)`.
    pub fn diamond(&self, class: usize, t: i64) -> usize {
        let n = self.level as i64;
        let tinv = arith::inv_mod(t, n).expect("t coprime to the level") as i128;
        let (c, a) = self.classes[class].key;
        self.index[&normalize_key(self.level, t as i128 * c as i128, tinv * a as i128)]
    }

    /// Orbits of the given units acting by diamond operators, as sorted
    /// lists of class indices, ordered by smallest member.
    pub fn orbits_under(&self, units: &[u64]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                if orbit.insert(x) {
                    seen[x] = true;
                    for &t in units {
                        stack.push(self.diamond(x, t as i64));
                    }
                }
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Orbits under all of `(Z/N)^*`.
    pub fn diamond_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_under(&arith::units_mod(self.level))
    }

    /// Orbits of `ker((Z/N)^* -> (Z/M)^*)` for a divisor `M` of `N`.
    pub fn kernel_orbits(&self, sublevel: u64) -> Result<Vec<Vec<usize>>> {
        if !self.level.is_multiple_of(sublevel) {
            return Err(Error::IncompatibleLevels(sublevel, self.level));
        }
        Ok(self.orbits_under(&reduction_kernel(self.level, sublevel)))
    }

    pub fn orbit_of_infinity(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].in_orbit_of_infinity).collect()
    }

    pub fn orbit_of_zero(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].in_orbit_of_zero).collect()
    }

    pub fn c0_upper(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].in_c0_upper).collect()
    }
}

/// Units of `Z/N` congruent to 1 modulo `M`.
pub fn reduction_kernel(level: u64, sublevel: u64) -> Vec<u64> {
    arith::units_mod(level).into_iter().filter(|t| t % sublevel == 1 % sublevel).collect()
}

fn representative(level: u64, key: (u64, u64)) -> Cusp {
    let n = level as i128;
    let (c, a) = (key.0 as i128, key.1 as i128);
    if c == 0 && (a == 1 || a == n - 1) {
        return Cusp::infinity();
    }
    let c = if c == 0 { n } else { c };
    let g = gcd128(c, n);
    let mut a = a;
    while gcd128(a, c) != 1 {
        a += g;
    }
    Cusp::new(a, c)
}

/// Independent count: `(1/2) sum_{d | N} phi(d) phi(N/d)` for `N >= 5`, and 3
/// for `N = 4`.
pub fn cusp_count(level: u64) -> u64 {
    if level == 4 {
        return 3;
    }
    arith::divisors(level)
        .into_iter()
        .map(|d| arith::euler_phi(d) * arith::euler_phi(level / d))
        .sum::<u64>()
        / 2
}

/// Genus of `X_1(N)` for `N >= 4`: `1 + mu/12 - c/2`.
pub fn genus(level: u64) -> u64 {
    let mu2 = arith::factorize(level)
        .into_iter()
        .fold(level * level, |acc, (p, _)| acc / (p * p) * (p * p - 1));
    // mu = mu2 / 2; genus = 1 + mu2/24 - c/2
    let num = 24 + mu2 as i64 - 12 * cusp_count(level) as i64;
    assert!(num % 24 == 0 && num >= 0);
    (num / 24) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_formula() {
        for n in 4..61 {
            assert_eq!(CuspTable::new(n).unwrap().len() as u64, cusp_count(n), "N={n}");
        }
        assert_eq!(cusp_count(5), 4);
    }

    #[test]
    fn genus_values() {
        for (n, g) in [(4, 0), (5, 0), (10, 0), (11, 1), (13, 2), (16, 2), (22, 6), (23, 12), (24, 5)] {
            assert_eq!(genus(n), g, "N={n}");
        }
    }

    #[test]
    fn zero_and_infinity() {
        let t = CuspTable::new(5).unwrap();
        let oo = t.infinity();
        let z = t.zero();
        assert!(t.classes()[oo].in_c0_upper);
        assert!(!t.classes()[z].in_c0_upper);
        assert_eq!(t.class_of(&Cusp::new(1, 1)), z);
        assert_eq!(t.class_of(&Cusp::new(1, 5)), oo);
        assert_eq!(t.class_of(&Cusp::new(4, 5)), oo);
        assert_ne!(t.class_of(&Cusp::new(2, 5)), oo);
    }

    #[test]
    fn representatives_are_in_their_class() {
        for n in [4u64, 9, 12, 30] {
            let t = CuspTable::new(n).unwrap();
            for (i, c) in t.classes().iter().enumerate() {
                assert_eq!(t.class_of(&c.rep), i);
            }
        }
    }

    #[test]
    fn kernel_orbits_twelve_over_four() {
        assert_eq!(reduction_kernel(12, 4), vec![1, 5]);
        let t = CuspTable::new(12).unwrap();
        let orbits = t.kernel_orbits(4).unwrap();
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        assert_eq!(total, t.len());
        assert!(orbits.iter().all(|o| o.len() <= 2));
    }

    /// Diamond action on keys agrees with the action of a matrix in Gamma_0(N).
    #[test]
    fn diamond_matches_matrices() {
        let n = 12u64;
        let t = CuspTable::new(n).unwrap();
        for d in arith::units_mod(n) {
            let d = d as i128;
            // (a b; 12 d) with a d - 12 b = 1
            let (_, x, y) = super::super::cosets::egcd128(d, 12);
            let m = [x, -y, 12, d];
            assert_eq!(m[0] * m[3] - m[1] * m[2], 1);
            for (i, c) in t.classes().iter().enumerate() {
                assert_eq!(t.class_of(&c.rep.act(m)), t.diamond(i, d as i64));
            }
        }
    }
}
