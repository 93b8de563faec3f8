//! Polynomials over a prime field and the residue fields `F_l[X]/(g)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith;

/// Polynomial over `F_l`, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpPoly {
    ell: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(ell: u64, coeffs: Vec<u64>) -> Self {
        let mut p = FpPoly { ell, coeffs: coeffs.into_iter().map(|c| c % ell).collect() };
        p.trim();
        p
    }

    pub fn from_signed(ell: u64, coeffs: &[i64]) -> Self {
        let l = ell as i64;
        Self::new(ell, coeffs.iter().map(|&c| arith::modulo(c, l) as u64).collect())
    }

    pub fn zero(ell: u64) -> Self {
        FpPoly { ell, coeffs: Vec::new() }
    }

    pub fn one(ell: u64) -> Self {
        Self::constant(ell, 1)
    }

    pub fn constant(ell: u64, c: u64) -> Self {
        Self::new(ell, vec![c])
    }

    pub fn x(ell: u64) -> Self {
        Self::new(ell, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0))
                    % self.ell
            })
            .collect();
        Self::new(self.ell, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.ell, self.coeffs.iter().map(|&c| (self.ell - c) % self.ell).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.ell, self.coeffs.iter().map(|&c| c * (k % self.ell) % self.ell).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ell);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.ell;
            }
        }
        Self::new(self.ell, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = arith::inv_mod(d.lead() as i64, self.ell as i64).expect("prime modulus") as u64;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.ell), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd] * inv % self.ell;
            q[i] = c;
            if c != 0 {
                for (j, &b) in d.coeffs.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.ell - c * b % self.ell) % self.ell;
                }
            }
        }
        r.truncate(dd);
        (Self::new(self.ell, q), Self::new(self.ell, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = arith::inv_mod(self.lead() as i64, self.ell as i64).unwrap() as u64;
        self.scale(inv)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Self::one(self.ell).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        acc
    }

    /// Evaluation at an element of a residue field.
    pub fn eval_in(&self, field: &ResidueField, x: &ResidueElt) -> ResidueElt {
        let mut acc = field.zero_elt();
        for &c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), &field.from_int(c as i64));
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n as u32,
        };
        let f = self.monic();
        let x = Self::x(self.ell);
        let frob = |k: u32| x.powmod((self.ell as u128).pow(k), &f);
        if frob(n).sub(&x).rem(&f) != Self::zero(self.ell) {
            return false;
        }
        arith::prime_divisors(n as u64)
            .into_iter()
            .all(|q| frob(n / q as u32).sub(&x).gcd(&f).degree() == Some(0))
    }

    /// The first monic irreducible polynomial of degree `n` in lexicographic
    /// order of coefficients.
    pub fn first_irreducible(ell: u64, n: usize) -> Self {
        assert!(n >= 1);
        let total = (ell as u128).pow(n as u32);
        for code in 0..total {
            let mut c = Vec::with_capacity(n + 1);
            let mut k = code;
            for _ in 0..n {
                c.push((k % ell as u128) as u64);
                k /= ell as u128;
            }
            c.push(1);
            let p = Self::new(ell, c);
            if p.is_irreducible() {
                return p;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coeffs, self.ell)
    }
}

/// Element of a residue field: coefficient vector of length `f`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueElt(pub Vec<u64>);

impl ResidueElt {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for ResidueElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// `F_l[X]/(g)` for a monic irreducible `g`, with a fixed primitive element.
#[derive(Clone, Debug)]
pub struct ResidueField {
    modulus: FpPoly,
    degree: usize,
    size: u64,
    generator: ResidueElt,
    order_factors: Vec<(u64, u32)>,
}

impl ResidueField {
    pub fn new(modulus: FpPoly) -> Arc<Self> {
        let modulus = modulus.monic();
        let degree = modulus.degree().expect("nonzero modulus");
        assert!(degree >= 1);
        let size = modulus.ell().pow(degree as u32);
        let order_factors = arith::factorize(size - 1);
        let mut field = ResidueField {
            modulus,
            degree,
            size,
            generator: ResidueElt(Vec::new()),
            order_factors,
        };
        field.generator = field.find_generator();
        Arc::new(field)
    }

    fn find_generator(&self) -> ResidueElt {
        for code in 1..self.size {
            let x = self.decode(code);
            if self.is_primitive(&x) {
                return x;
            }
        }
        unreachable!("finite field unit groups are cyclic")
    }

    fn is_primitive(&self, x: &ResidueElt) -> bool {
        let n = self.size - 1;
        self.order_factors.iter().all(|&(r, _)| !self.is_one(&self.pow(x, (n / r) as i128)))
    }

    /// Element with base-`l` digits of `code` as coefficients.
    pub fn decode(&self, mut code: u64) -> ResidueElt {
        let ell = self.ell();
        let mut c = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            c.push(code % ell);
            code /= ell;
        }
        ResidueElt(c)
    }

    pub fn encode(&self, x: &ResidueElt) -> u64 {
        x.0.iter().rev().fold(0, |acc, &c| acc * self.ell() + c)
    }

    pub fn ell(&self) -> u64 {
        self.modulus.ell()
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn generator(&self) -> &ResidueElt {
        &self.generator
    }

    fn wrap(&self, p: FpPoly) -> ResidueElt {
        let mut c = p.rem(&self.modulus).coeffs().to_vec();
        c.resize(self.degree, 0);
        ResidueElt(c)
    }

    pub fn to_poly(&self, x: &ResidueElt) -> FpPoly {
        FpPoly::new(self.ell(), x.0.clone())
    }

    pub fn zero_elt(&self) -> ResidueElt {
        ResidueElt(vec![0; self.degree])
    }

    pub fn one(&self) -> ResidueElt {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ResidueElt {
        self.wrap(FpPoly::from_signed(self.ell(), &[n]))
    }

    /// The class of `X^k`.
    pub fn x_pow(&self, k: i64) -> ResidueElt {
        let x = self.wrap(FpPoly::x(self.ell()));
        self.pow(&x, k as i128)
    }

    pub fn is_one(&self, x: &ResidueElt) -> bool {
        *x == self.one()
    }

    pub fn is_zero(&self, x: &ResidueElt) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ResidueElt, b: &ResidueElt) -> ResidueElt {
        let ell = self.ell();
        ResidueElt(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % ell).collect())
    }

    pub fn sub(&self, a: &ResidueElt, b: &ResidueElt) -> ResidueElt {
        let ell = self.ell();
        ResidueElt(a.0.iter().zip(&b.0).map(|(x, y)| (x + ell - y) % ell).collect())
    }

    pub fn mul(&self, a: &ResidueElt, b: &ResidueElt) -> ResidueElt {
        self.wrap(self.to_poly(a).mul(&self.to_poly(b)))
    }

    /// `a^e` for any integer `e`; negative powers require `a != 0`.
    pub fn pow(&self, a: &ResidueElt, e: i128) -> ResidueElt {
        let n = (self.size - 1) as i128;
        if self.is_zero(a) {
            assert!(e > 0, "nonpositive power of zero");
            return self.zero_elt();
        }
        let e = e.rem_euclid(n) as u128;
        self.wrap(self.to_poly(a).powmod(e, &self.modulus))
    }

    pub fn inv(&self, a: &ResidueElt) -> ResidueElt {
        self.pow(a, -1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &ResidueElt) -> u64 {
        let mut n = self.size - 1;
        for &(r, k) in &self.order_factors {
            for _ in 0..k {
                if self.is_one(&self.pow(a, (n / r) as i128)) {
                    n /= r;
                } else {
                    break;
                }
            }
        }
        n
    }

    /// Discrete logarithm with respect to the fixed generator, in
    /// `0..size-1`, by Pohlig-Hellman over the factorisation of `size - 1`.
    pub fn dlog(&self, a: &ResidueElt) -> u64 {
        assert!(!self.is_zero(a), "discrete log of zero");
        let n = self.size - 1;
        let mut residues = Vec::new();
        for &(r, k) in &self.order_factors {
            let rk = r.pow(k);
            let cof = n / rk;
            let g = self.pow(&self.generator, cof as i128);
            let h = self.pow(a, cof as i128);
            // g has order r^k; recover the exponent digit by digit.
            let gamma = self.pow(&g, (rk / r) as i128);
            let mut x = 0u64;
            let mut rpow = 1u64;
            for j in 0..k {
                let shifted = self.mul(&h, &self.pow(&g, -(x as i128)));
                let target = self.pow(&shifted, (rk / r / rpow) as i128);
                let digit = (0..r)
                    .find(|&d| self.pow(&gamma, d as i128) == target)
                    .expect("element lies in the cyclic group");
                x += digit * rpow;
                if j + 1 < k {
                    rpow *= r;
                }
            }
            residues.push((x, rk));
        }
        crt(&residues) % n.max(1)
    }

    /// `a^{1 + q + ... + q^{d-1}}` with `q = l^{sub_degree}`, `d = degree / sub_degree`.
    pub fn norm_to_subfield(&self, a: &ResidueElt, sub_degree: usize) -> ResidueElt {
        assert_eq!(self.degree % sub_degree, 0);
        let q = self.ell().pow(sub_degree as u32) as u128;
        let d = self.degree / sub_degree;
        let e: u128 = (0..d).map(|i| q.pow(i as u32)).sum();
        let n = (self.size - 1) as u128;
        self.pow(a, (e % n) as i128)
    }
}

fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, mi) in residues {
        let mi = mi as i128;
        let (_, s, _) = arith::egcd((m % mi) as i64, mi as i64);
        let t = ((r as i128 - x).rem_euclid(mi) * (s as i128).rem_euclid(mi)).rem_euclid(mi);
        x += m * t;
        m *= mi;
        x = x.rem_euclid(m);
    }
    x as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        assert!(FpPoly::new(3, vec![1, 0, 1]).is_irreducible());
        assert!(!FpPoly::new(5, vec![1, 0, 1]).is_irreducible());
        assert!(FpPoly::new(2, vec![1, 1, 1]).is_irreducible());
        assert!(!FpPoly::new(2, vec![1, 0, 0, 0, 1]).is_irreducible());
        assert_eq!(FpPoly::first_irreducible(2, 3), FpPoly::new(2, vec![1, 1, 0, 1]));
    }

    #[test]
    fn dlog_in_small_fields() {
        let f5 = ResidueField::new(FpPoly::new(5, vec![0, 1]));
        assert_eq!(f5.generator(), &f5.from_int(2));
        assert_eq!(f5.dlog(&f5.from_int(2)), 1);
        assert_eq!(f5.dlog(&f5.one()), 0);
        let f81 = ResidueField::new(FpPoly::first_irreducible(3, 4));
        for k in [0u64, 1, 7, 40, 79] {
            let x = f81.pow(f81.generator(), k as i128);
            assert_eq!(f81.dlog(&x), k);
        }
    }

    #[test]
    fn norm_nine_to_three() {
        let f9 = ResidueField::new(FpPoly::new(3, vec![1, 0, 1]));
        let g = f9.generator().clone();
        assert_eq!(f9.norm_to_subfield(&g, 1), f9.pow(&g, 4));
        let n = f9.norm_to_subfield(&g, 1);
        assert!(n.0[1] == 0, "norm lies in the prime field");
    }

    #[test]
    fn inverse_and_order() {
        let f = ResidueField::new(FpPoly::first_irreducible(2, 4));
        for code in 1..16 {
            let x = f.decode(code);
            assert!(f.is_one(&f.mul(&x, &f.inv(&x))));
            assert_eq!(15 % f.order(&x), 0);
        }
        assert_eq!(f.order(f.generator()), 15);
    }
}
