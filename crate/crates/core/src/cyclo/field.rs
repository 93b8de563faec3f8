//! Exact arithmetic in `Q(zeta_M)`, represented modulo the `M`-th cyclotomic
//! polynomial.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree
/// first. Cached per `n`.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in arith::divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = exact_div_monic(&num, &den);
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    quo
}

/// Element of `Q(zeta_M)` as a polynomial of degree `< phi(M)` in `zeta_M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    level: u64,
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycElt {
    fn degree_bound(level: u64) -> usize {
        arith::euler_phi(level) as usize
    }

    pub fn zero(level: u64) -> Self {
        assert!(level >= 1);
        CycElt { level, coeffs: vec![BigRational::zero(); Self::degree_bound(level)] }
    }

    pub fn from_integer(level: u64, n: i64) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q(n);
        z
    }

    pub fn one(level: u64) -> Self {
        Self::from_integer(level, 1)
    }

    /// `zeta_M^k` for any integer `k`.
    pub fn zeta_pow(level: u64, k: i64) -> Self {
        let mut cyc = vec![BigRational::zero(); level as usize];
        cyc[arith::modulo(k, level as i64) as usize] = BigRational::one();
        Self::from_cyclic(level, cyc)
    }

    /// `1 - zeta_M^k`.
    pub fn one_minus_zeta_pow(level: u64, k: i64) -> Self {
        Self::one(level).sub(&Self::zeta_pow(level, k))
    }

    /// Reduces a polynomial in `zeta_M` of arbitrary degree.
    pub fn from_poly(level: u64, mut coeffs: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(level);
        let d = phi.len() - 1;
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for (j, &b) in phi[..d].iter().enumerate() {
                if b != 0 {
                    coeffs[shift + j] -= &top * q(b);
                }
            }
        }
        coeffs.resize(d, BigRational::zero());
        CycElt { level, coeffs }
    }

    /// Reduces an element given modulo `x^M - 1` (length `M`).
    pub fn from_cyclic(level: u64, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), level as usize);
        Self::from_poly(level, coeffs)
    }

    pub fn from_int_cyclic(level: u64, coeffs: &[i128]) -> Self {
        let c = coeffs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Self::from_cyclic(level, c)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational number this element equals, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn check_level(&self, other: &CycElt) {
        assert_eq!(self.level, other.level, "operands at different levels");
    }

    pub fn add(&self, other: &CycElt) -> CycElt {
        self.check_level(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycElt { level: self.level, coeffs }
    }

    pub fn sub(&self, other: &CycElt) -> CycElt {
        self.check_level(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycElt { level: self.level, coeffs }
    }

    pub fn neg(&self) -> CycElt {
        CycElt { level: self.level, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &CycElt) -> CycElt {
        self.check_level(other);
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_poly(self.level, prod)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Result<CycElt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.level));
        }
        let modulus: Vec<BigRational> = cyclotomic_poly(self.level).iter().map(|&c| q(c)).collect();
        let a = trim(self.coeffs.clone());
        // Invariant: s * a == r (mod modulus)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (quo, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // gcd nontrivial: impossible for a nonzero element of a field
                unreachable!("cyclotomic polynomial is irreducible");
            }
        }
        let c = r1[0].clone();
        let s: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_poly(self.level, s))
    }

    pub fn div(&self, other: &CycElt) -> Result<CycElt> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<CycElt> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycElt::one(self.level);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The Galois automorphism `zeta_M -> zeta_M^t`.
    pub fn galois(&self, t: i64) -> Result<CycElt> {
        let m = self.level as i64;
        if arith::gcd(t, m) != 1 {
            return Err(Error::NotCoprime { t, level: self.level });
        }
        let mut cyc = vec![BigRational::zero(); self.level as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                cyc[arith::modulo(i as i64 * t, m) as usize] += c;
            }
        }
        Ok(Self::from_cyclic(self.level, cyc))
    }

    /// Image under `Q(zeta_M) -> Q(zeta_N)`, `zeta_M = zeta_N^{N/M}`.
    pub fn embed(&self, target: u64) -> Result<CycElt> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::IncompatibleLevels(self.level, target));
        }
        let step = (target / self.level) as usize;
        let mut cyc = vec![BigRational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            cyc[(i * step) % target as usize] += c;
        }
        Ok(Self::from_cyclic(target, cyc))
    }

    /// Absolute norm to `Q`, as the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let mut acc = CycElt::one(self.level);
        for t in arith::units_mod(self.level) {
            acc = acc.mul(&self.galois(t as i64).expect("unit"));
        }
        acc.as_rational().expect("norm lies in Q")
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - db];
    let lead = b[db].clone();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quo[shift] = c;
        rem = trim(rem);
    }
    (trim(quo), rem)
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                _ if c.is_one() => format!("z^{i}"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 [Q(z_{})]", self.level)
        } else {
            write!(f, "{} [Q(z_{})]", terms.join(" + "), self.level)
        }
    }
}

/// Exact integer arithmetic in `Z[x]/(x^M - 1)`; used to certify
/// multiplicative identities cheaply before reducing modulo `Phi_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicInt {
    level: u64,
    coeffs: Vec<i128>,
}

impl CyclicInt {
    pub fn one(level: u64) -> Self {
        let mut coeffs = vec![0; level as usize];
        coeffs[0] = 1;
        CyclicInt { level, coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Multiplies by `zeta^k`.
    pub fn shift(&mut self, k: i64) {
        let m = self.level as usize;
        let k = arith::modulo(k, self.level as i64) as usize;
        self.coeffs.rotate_right(k % m);
    }

    pub fn negate(&mut self) {
        for c in &mut self.coeffs {
            *c = -*c;
        }
    }

    /// Multiplies by `1 - zeta^k`; `None` on overflow.
    pub fn mul_one_minus(&mut self, k: i64) -> Option<()> {
        let mut shifted = self.coeffs.clone();
        let m = self.level as usize;
        shifted.rotate_right(arith::modulo(k, self.level as i64) as usize % m);
        for (c, s) in self.coeffs.iter_mut().zip(shifted) {
            *c = c.checked_sub(s)?;
        }
        Some(())
    }

    pub fn to_elt(&self) -> CycElt {
        CycElt::from_int_cyclic(self.level, &self.coeffs)
    }
}

/// Returns true iff `a == b` in `Q(zeta_M)`; both given modulo `x^M - 1`.
pub fn cyclic_equal(a: &CyclicInt, b: &CyclicInt) -> bool {
    let diff: Vec<i128> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
    CycElt::from_int_cyclic(a.level, &diff).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        // Phi_105 famously has a coefficient -2.
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = CycElt::zeta_pow(4, 1);
        assert_eq!(z.mul(&z), CycElt::from_integer(4, -1));
    }

    #[test]
    fn galois_composition() {
        let z = CycElt::zeta_pow(5, 1);
        assert_eq!(z.galois(2).unwrap(), CycElt::zeta_pow(5, 2));
        let x = CycElt::one_minus_zeta_pow(5, 1).add(&CycElt::zeta_pow(5, 3));
        assert_eq!(x.galois(3).unwrap().galois(2).unwrap(), x);
        assert!(matches!(x.galois(5), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn level_compatibility() {
        let z4 = CycElt::zeta_pow(4, 1);
        assert_eq!(z4.embed(12).unwrap(), CycElt::zeta_pow(12, 3));
        assert!(z4.embed(10).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let x = CycElt::one_minus_zeta_pow(7, 2);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert!(CycElt::zero(7).inv().is_err());
        // (1 - z^2) / (1 - z) = 1 + z
        let r = CycElt::one_minus_zeta_pow(5, 2).div(&CycElt::one_minus_zeta_pow(5, 1)).unwrap();
        assert_eq!(r, CycElt::one(5).add(&CycElt::zeta_pow(5, 1)));
    }

    #[test]
    fn norms_of_cyclotomic_numbers() {
        // N(1 - zeta_p) = p, N(1 - zeta_n) = 1 when n is not a prime power;
        // 1 - zeta_9^3 has norm 3 from Q(zeta_3), cubed up to Q(zeta_9).
        assert_eq!(CycElt::one_minus_zeta_pow(5, 1).norm(), q(5));
        assert_eq!(CycElt::one_minus_zeta_pow(6, 1).norm(), q(1));
        assert_eq!(CycElt::one_minus_zeta_pow(9, 3).norm(), q(27));
    }

    #[test]
    fn cyclic_int_matches_field() {
        let mut a = CyclicInt::one(6);
        a.mul_one_minus(1).unwrap();
        a.mul_one_minus(4).unwrap();
        let mut b = CyclicInt::one(6);
        b.mul_one_minus(2).unwrap();
        assert!(cyclic_equal(&a, &b));
    }
}
