//! Rational functions on a one-dimensional torus of the form
//! `eta_0 * s^m * prod (1 - theta s)^{e_theta}` with roots of unity `eta_0`,
//! `theta`, stored as elements of `Q/Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A root of unity `exp(2 pi i r)`, stored as `r` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(Rational64);

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let (n, m) = text.split_once('/').ok_or_else(|| serde::de::Error::custom("expected n/d"))?;
        let n: i64 = n.trim().parse().map_err(serde::de::Error::custom)?;
        let m: i64 = m.trim().parse().map_err(serde::de::Error::custom)?;
        if m <= 0 {
            return Err(serde::de::Error::custom("nonpositive denominator"));
        }
        Ok(Root::from_frac(n, m))
    }
}

impl Root {
    pub fn new(r: Rational64) -> Self {
        Root(r - r.floor())
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(Rational64::new(num, den))
    }

    pub fn one() -> Self {
        Root(Rational64::zero())
    }

    pub fn minus_one() -> Self {
        Self::from_frac(1, 2)
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// Group law (multiplication of roots).
    pub fn mul(self, other: Root) -> Root {
        Root::new(self.0 + other.0)
    }

    pub fn pow(self, k: i64) -> Root {
        Root::new(self.0 * Rational64::from_integer(k))
    }

    pub fn inv(self) -> Root {
        self.pow(-1)
    }

    /// All `k`-th roots of `self` (`k > 0`).
    pub fn roots(self, k: i64) -> Vec<Root> {
        assert!(k > 0);
        (0..k).map(|j| Root::new((self.0 + Rational64::from_integer(j)) / Rational64::from_integer(k))).collect()
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "1")
        } else {
            write!(f, "e({})", self.0)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorFn {
    pub constant: Root,
    pub power: i64,
    /// Exponent of each linear factor `1 - theta s`.
    pub factors: BTreeMap<Root, i64>,
}

impl Default for DivisorFn {
    fn default() -> Self {
        Self::one()
    }
}

impl DivisorFn {
    pub fn one() -> Self {
        DivisorFn { constant: Root::one(), power: 0, factors: BTreeMap::new() }
    }

    pub fn is_one(&self) -> bool {
        self.constant.is_one() && self.power == 0 && self.factors.is_empty()
    }

    /// `1 - s`.
    pub fn one_minus_s() -> Self {
        Self::one_minus_monomial(Root::one(), 1)
    }

    /// `1 - kappa s^mu` for `mu != 0`, factored into linear factors.
    pub fn one_minus_monomial(kappa: Root, mu: i64) -> Self {
        assert!(mu != 0, "1 - kappa is a constant");
        let mut f = Self::one();
        if mu > 0 {
            for w in kappa.roots(mu) {
                f.add_factor(w, 1);
            }
        } else {
            // 1 - kappa s^mu = -kappa s^mu (1 - kappa^{-1} s^{-mu})
            f.constant = Root::minus_one().mul(kappa);
            f.power = mu;
            for w in kappa.inv().roots(-mu) {
                f.add_factor(w, 1);
            }
        }
        f
    }

    fn add_factor(&mut self, theta: Root, e: i64) {
        let x = self.factors.entry(theta).or_insert(0);
        *x += e;
        if *x == 0 {
            self.factors.remove(&theta);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut f = self.clone();
        f.constant = f.constant.mul(other.constant);
        f.power += other.power;
        for (&t, &e) in &other.factors {
            f.add_factor(t, e);
        }
        f
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut f = Self::one();
        f.constant = self.constant.pow(k);
        f.power = self.power * k;
        for (&t, &e) in &self.factors {
            f.add_factor(t, e * k);
        }
        f
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// `F(s) -> F(kappa s^mu)`.
    pub fn substitute(&self, kappa: Root, mu: i64) -> Self {
        assert!(mu != 0);
        let mut f = Self::one();
        f.constant = self.constant.mul(kappa.pow(self.power));
        f.power = self.power * mu;
        for (&t, &e) in &self.factors {
            f = f.mul(&Self::one_minus_monomial(t.mul(kappa), mu).pow(e));
        }
        f
    }

    /// Norm along `t = kappa s^g` (`g > 0`): `prod_{zeta^g = 1} F(zeta s)` as a
    /// function of `t`.
    pub fn norm(&self, kappa: Root, g: i64) -> Self {
        assert!(g > 0);
        let mut f = Self::one();
        // prod zeta = (-1)^{g-1}, so N(s) = (-1)^{g-1} kappa^{-1} t.
        let n_s = Root::minus_one().pow(g - 1).mul(kappa.inv());
        f.constant = self.constant.pow(g).mul(n_s.pow(self.power));
        f.power = self.power;
        for (&t, &e) in &self.factors {
            f = f.mul(&Self::one_minus_monomial(t.pow(g).mul(kappa.inv()), 1).pow(e));
        }
        f
    }
}

impl fmt::Debug for DivisorFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}*s^{}", self.constant, self.power)?;
        for (t, e) in &self.factors {
            write!(f, "*(1-{t:?}s)^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_identity() {
        // 1 - s^{-1} = -s^{-1} (1 - s)
        let f = DivisorFn::one_minus_s().substitute(Root::one(), -1);
        assert_eq!(f.constant, Root::minus_one());
        assert_eq!(f.power, -1);
        assert_eq!(f.factors.get(&Root::one()), Some(&1));
    }

    #[test]
    fn norm_of_linear_factor() {
        // N(1 - s) along t = s^3 is 1 - t
        let f = DivisorFn::one_minus_s().norm(Root::one(), 3);
        assert_eq!(f, DivisorFn::one_minus_s());
        // N(s) along t = s^2 is -t
        let s = DivisorFn { power: 1, ..DivisorFn::one() };
        let n = s.norm(Root::one(), 2);
        assert_eq!((n.constant, n.power), (Root::minus_one(), 1));
    }

    #[test]
    fn substitution_then_norm_is_power() {
        let f = DivisorFn::one_minus_monomial(Root::from_frac(1, 3), 1).mul(&DivisorFn { power: 2, ..DivisorFn::one() });
        let up = f.substitute(Root::from_frac(1, 5), 4);
        assert_eq!(up.norm(Root::from_frac(1, 5), 4), f.pow(4));
    }
}
