//! `K_1 = (+)_D Q(D)^x` over the divisors `z1^a z2^c = eta` of `G_m^2`,
//! the symbols `<a, c>`, and pullback and pushforward along isogenies.
//!
//! The divisor `(a, c, eta)` (with `gcd(a, c) = 1`) is parametrized by
//! `s = z1^b z2^d` for the canonical completion `(b, d)` with `ad - bc = 1`;
//! on it, `z^(x, y) = eta^(xd - yb) s^(ay - cx)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::function::{DivisorFn, Root};
use crate::arith;
use crate::error::{Error, Result};

pub type Mat2 = [i64; 4];

/// A primitive vector `(a, c)` up to sign, with the sign rule `a > 0`, or
/// `a = 0` and `c > 0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PrimVec {
    pub a: i64,
    pub c: i64,
}

impl PrimVec {
    pub fn new(a: i64, c: i64) -> Result<(Self, bool)> {
        if arith::gcd(a, c) != 1 {
            return Err(Error::InvalidParameters(format!("({a}, {c}) is not primitive")));
        }
        let flip = a < 0 || (a == 0 && c < 0);
        Ok(if flip { (PrimVec { a: -a, c: -c }, true) } else { (PrimVec { a, c }, false) })
    }

    /// `(b, d)` with `ad - bc = 1`, `0 <= b < a` (or `(-1, 0)` when `a = 0`).
    pub fn completion(&self) -> (i64, i64) {
        let (a, c) = (self.a, self.c);
        if a == 0 {
            return (-1, 0);
        }
        let cinv = arith::inv_mod(c.rem_euclid(a), a).unwrap_or(0);
        let b = (-cinv).rem_euclid(a);
        let b = if a == 1 { 0 } else { b };
        let d = (1 + b * c) / a;
        debug_assert_eq!(a * d - b * c, 1);
        (b, d)
    }
}

/// The divisor `z1^a z2^c = eta`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DivKey {
    pub dir: PrimVec,
    pub eta: Root,
}

impl DivKey {
    pub fn new(a: i64, c: i64, eta: Root) -> Result<Self> {
        let (dir, flip) = PrimVec::new(a, c)?;
        Ok(DivKey { dir, eta: if flip { eta.inv() } else { eta } })
    }

    /// `z^(x, y)` restricted to the divisor, as `(kappa, mu)` meaning
    /// `kappa s^mu`.
    pub fn restrict_monomial(&self, x: i64, y: i64) -> (Root, i64) {
        let (a, c) = (self.dir.a, self.dir.c);
        let (b, d) = self.dir.completion();
        let mu = a * y - c * x;
        let lambda = x * d - y * b;
        (self.eta.pow(lambda), mu)
    }
}

/// A finitely supported element of `K_1`, written multiplicatively.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct K1Elem {
    #[serde(with = "component_list")]
    components: BTreeMap<DivKey, DivisorFn>,
}

mod component_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<DivKey, DivisorFn>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<DivKey, DivisorFn>, D::Error> {
        let v: Vec<(DivKey, DivisorFn)> = Vec::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

impl K1Elem {
    pub fn one() -> Self {
        K1Elem::default()
    }

    pub fn is_one(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<DivKey, DivisorFn> {
        &self.components
    }

    pub fn component(&self, key: &DivKey) -> DivisorFn {
        self.components.get(key).cloned().unwrap_or_else(DivisorFn::one)
    }

    pub fn single(key: DivKey, f: DivisorFn) -> Self {
        let mut x = Self::one();
        x.mul_component(key, &f);
        x
    }

    fn mul_component(&mut self, key: DivKey, f: &DivisorFn) {
        let g = self.component(&key).mul(f);
        if g.is_one() {
            self.components.remove(&key);
        } else {
            self.components.insert(key, g);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (k, f) in &other.components {
            x.mul_component(*k, f);
        }
        x
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut x = Self::one();
        for (key, f) in &self.components {
            x.mul_component(*key, &f.pow(k));
        }
        x
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// `self / other` (difference in additive notation).
    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Pullback along the right action `(z1, z2) gamma = (z1^a z2^c, z1^b z2^d)`.
    pub fn pullback(&self, g: Mat2) -> Self {
        let [al, be, ga, de] = g;
        let mut out = Self::one();
        for (key, f) in &self.components {
            let (a, c) = (key.dir.a, key.dir.c);
            let new = DivKey::new(al * a + be * c, ga * a + de * c, key.eta).expect("SL_2 keeps vectors primitive");
            let (b, d) = key.dir.completion();
            let (kappa, mu) = new.restrict_monomial(al * b + be * d, ga * b + de * d);
            out.mul_component(new, &f.substitute(kappa, mu));
        }
        out
    }

    /// Pushforward along `(z1, z2) -> (z1, z2^p)`.
    pub fn pushforward_alpha(&self, p: i64) -> Self {
        let mut out = Self::one();
        for (key, f) in &self.components {
            let (a, c) = (key.dir.a, key.dir.c);
            let g = arith::gcd(c, p);
            let new = DivKey::new(p * a / g, c / g, key.eta.pow(p / g)).expect("primitive image");
            let (b2, d2) = new.dir.completion();
            let (kappa, mu) = key.restrict_monomial(b2, p * d2);
            assert_eq!(mu.abs(), g, "degree of the induced map");
            let h = if mu > 0 { f.clone() } else { f.substitute(Root::one(), -1) };
            out.mul_component(new, &h.norm(kappa, g));
        }
        out
    }

    /// Pullback along `(z1, z2) -> (z1, z2^p)`.
    pub fn pullback_alpha(&self, p: i64) -> Self {
        let mut out = Self::one();
        for (key, f) in &self.components {
            let (a, c) = (key.dir.a, key.dir.c);
            let g = arith::gcd(a, p);
            let (b2, d2) = key.dir.completion();
            for rho in key.eta.roots(g) {
                let comp = DivKey::new(a / g, p * c / g, rho).expect("primitive component");
                let (kappa, mu) = comp.restrict_monomial(b2, p * d2);
                out.mul_component(comp, &f.substitute(kappa, mu));
            }
        }
        out
    }
}

impl fmt::Debug for K1Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(k, v)| format!("[({}, {}, {:?}): {v:?}]", k.dir.a, k.dir.c, k.eta))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Any `(b, d)` with `ad - bc = 1`.
pub fn complete(a: i64, c: i64) -> Result<(i64, i64)> {
    let (g, x, y) = arith::egcd(a, c);
    if g != 1 {
        return Err(Error::InvalidParameters(format!("({a}, {c}) is not primitive")));
    }
    // a x + c y = 1, so d = x, b = -y.
    Ok((-y, x))
}

/// `<a, c>`: supported on `1 - z1^a z2^c = 0`, given there by `1 - z1^b z2^d`.
pub fn bracket_symbol(a: i64, c: i64) -> Result<K1Elem> {
    let (b, d) = complete(a, c)?;
    bracket_with_completion(a, c, b, d)
}

/// `<a, c>` computed from a specific completion `(b, d)`.
pub fn bracket_with_completion(a: i64, c: i64, b: i64, d: i64) -> Result<K1Elem> {
    if a * d - b * c != 1 {
        return Err(Error::InvalidParameters(format!("({b}, {d}) does not complete ({a}, {c})")));
    }
    let key = DivKey::new(a, c, Root::one())?;
    let (kappa, mu) = key.restrict_monomial(b, d);
    Ok(K1Elem::single(key, DivisorFn::one_minus_monomial(kappa, mu)))
}

pub fn mat_mul(x: Mat2, y: Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_inv(x: Mat2) -> Mat2 {
    [x[3], -x[1], -x[2], x[0]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_zero_one() {
        let x = bracket_symbol(0, 1).unwrap();
        let key = DivKey::new(0, 1, Root::one()).unwrap();
        assert_eq!(x.component(&key), DivisorFn::one_minus_s());
        assert_eq!(x.components().len(), 1);
    }

    #[test]
    fn bracket_independent_of_completion() {
        for (a, c) in [(1, 0), (0, 1), (2, 3), (-3, 5), (5, -7), (0, -1)] {
            let (b, d) = complete(a, c).unwrap();
            let base = bracket_with_completion(a, c, b, d).unwrap();
            for k in -3..=3 {
                assert_eq!(bracket_with_completion(a, c, b + k * a, d + k * c).unwrap(), base);
            }
        }
    }

    #[test]
    fn sign_flip_reparametrizes() {
        // <-a, -c> read in the parameter of (a, c) is 1 - s^{-1}.
        let (a, c) = (2, 3);
        let key = DivKey::new(a, c, Root::one()).unwrap();
        let flipped = bracket_symbol(-a, -c).unwrap();
        assert_eq!(flipped.component(&key), DivisorFn::one_minus_s().substitute(Root::one(), -1));
        assert_eq!(bracket_symbol(a, c).unwrap().component(&key), DivisorFn::one_minus_s());
    }

    #[test]
    fn pullback_of_zero_one() {
        for g in [[2, 1, 1, 1], [1, 0, 5, 1], [3, -2, 5, -3], [0, -1, 1, 0]] {
            let x = bracket_symbol(0, 1).unwrap().pullback(g);
            assert_eq!(x, bracket_symbol(g[1], g[3]).unwrap(), "{g:?}");
        }
        let x = bracket_symbol(3, 4).unwrap();
        assert_eq!(x.pullback([1, 0, 0, 1]), x);
    }

    #[test]
    fn pullback_is_functorial() {
        let (g1, g2) = ([2, 1, 1, 1], [1, -2, 1, -1]);
        let x = bracket_symbol(3, 7).unwrap().mul(&bracket_symbol(-1, 4).unwrap().pow(2));
        assert_eq!(x.pullback(mat_mul(g1, g2)), x.pullback(g2).pullback(g1));
    }

    #[test]
    fn pushforward_examples() {
        for p in [2, 3, 5] {
            assert_eq!(bracket_symbol(0, 1).unwrap().pushforward_alpha(p), bracket_symbol(0, 1).unwrap());
        }
        assert_eq!(bracket_symbol(1, 1).unwrap().pushforward_alpha(3), bracket_symbol(3, 1).unwrap());
    }

    #[test]
    fn projection_formula() {
        let x = bracket_symbol(2, 3).unwrap().mul(&bracket_symbol(1, 4).unwrap().inv());
        for p in [2, 3, 5] {
            assert_eq!(x.pullback_alpha(p).pushforward_alpha(p), x.pow(p));
        }
        let y = K1Elem::single(DivKey::new(3, 2, Root::from_frac(1, 3)).unwrap(), DivisorFn::one_minus_s());
        assert_eq!(y.pullback_alpha(3).pushforward_alpha(3), y.pow(3));
    }
}
