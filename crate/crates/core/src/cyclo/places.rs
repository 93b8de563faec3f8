//! Places of `Q(zeta_M)` above a prime, their residue fields, and the tame
//! symbol on the cyclotomic generators.
//!
//! For `M = l^k M'` with `l` prime to `M'`, the places above `l` correspond to
//! the irreducible factors `g` of `Phi_{M'}` over `F_l`. The residue field at
//! the place of `g` is `F_l[X]/(g)` with `X` the image of `zeta_{M'}`. The
//! uniformizer is `1 - zeta_{l^k}`.

use std::fmt;
use std::sync::Arc;

use super::finite_field::{FpPoly, ResidueElt, ResidueField};
use super::formal::CycNumFormal;
use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Place {
    level: u64,
    ell: u64,
    k: u32,
    prime_to: u64,
    index: usize,
    factor: FpPoly,
    zeta_exp: u64,
    sanity: bool,
    field: Arc<ResidueField>,
    /// Valuation of each generator, in the order `[-1, zeta, u_1, ...]`.
    gen_vals: Vec<i64>,
    /// Discrete log of the unit part of each generator.
    gen_logs: Vec<u64>,
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Place(M={}, l={}, #{}, g={:?}{})",
            self.level,
            self.ell,
            self.index,
            self.factor.coeffs(),
            if self.sanity { ", sanity" } else { "" }
        )
    }
}

impl Place {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Exponent of `l` in the level.
    pub fn ell_exponent(&self) -> u32 {
        self.k
    }

    /// Prime-to-`l` part of the level.
    pub fn prime_to_part(&self) -> u64 {
        self.prime_to
    }

    /// Position among the places over the same prime.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ramification(&self) -> u64 {
        arith::euler_phi(self.ell.pow(self.k))
    }

    pub fn residue_degree(&self) -> usize {
        self.field.degree()
    }

    pub fn factor(&self) -> &FpPoly {
        &self.factor
    }

    /// Exponent `t` with `zeta_M -> X^t` in the residue field.
    pub fn zeta_exponent(&self) -> u64 {
        self.zeta_exp
    }

    /// Places over primes not dividing the level, where every generator is a
    /// unit.
    pub fn is_sanity(&self) -> bool {
        self.sanity
    }

    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    /// Size of the unit group of the residue field.
    pub fn unit_order(&self) -> u64 {
        self.field.size() - 1
    }

    pub fn generator_valuations(&self) -> &[i64] {
        &self.gen_vals
    }

    pub fn generator_logs(&self) -> &[u64] {
        &self.gen_logs
    }

    fn check_level(&self, x: &CycNumFormal) -> Result<()> {
        if x.level() != self.level {
            return Err(Error::IncompatibleLevels(x.level(), self.level));
        }
        Ok(())
    }

    /// Valuation and discrete log of the unit part `x / pi^v`.
    pub fn valuation_and_log(&self, x: &CycNumFormal) -> Result<(i64, u64)> {
        self.check_level(x)?;
        Ok(self.vector_valuation_and_log(&x.to_vector()))
    }

    /// Same as [`Place::valuation_and_log`] on an exponent vector.
    pub fn vector_valuation_and_log(&self, v: &[i128]) -> (i64, u64) {
        let n = self.unit_order() as i128;
        let mut val = 0i128;
        let mut log = 0i128;
        for (i, &e) in v.iter().enumerate() {
            if e != 0 {
                val += e * self.gen_vals[i] as i128;
                log = (log + e.rem_euclid(n) * self.gen_logs[i] as i128).rem_euclid(n);
            }
        }
        (val as i64, log as u64)
    }

    pub fn valuation_and_residue(&self, x: &CycNumFormal) -> Result<(i64, ResidueElt)> {
        let (v, log) = self.valuation_and_log(x)?;
        Ok((v, self.field.pow(self.field.generator(), log as i128)))
    }

    /// Discrete log of the tame symbol of two exponent vectors.
    pub fn tame_log(&self, x: &[i128], y: &[i128]) -> u64 {
        let n = self.unit_order() as i128;
        let (vx, lx) = self.vector_valuation_and_log(x);
        let (vy, ly) = self.vector_valuation_and_log(y);
        let (vx, vy) = (vx as i128, vy as i128);
        let log_minus_one = self.gen_logs[0] as i128;
        let t = (vx * vy).rem_euclid(2) * log_minus_one + vy.rem_euclid(n) * lx as i128
            - vx.rem_euclid(n) * ly as i128;
        t.rem_euclid(n) as u64
    }

    /// Class of `zeta_M^s` in the residue field.
    pub fn zeta_image(&self, s: i64) -> ResidueElt {
        let t = arith::modulo(self.zeta_exp as i64 * s, self.prime_to as i64);
        self.field.x_pow(t)
    }
}

/// Places over `ell`, which must divide `level`.
pub fn places_over(level: u64, ell: u64) -> Result<Vec<Place>> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if !level.is_multiple_of(ell) {
        return Err(Error::PrimeNotDividing { ell, level });
    }
    build_places(level, ell, false)
}

/// Places over a prime `ell` not dividing `level`. Used only for integrality
/// checks; every cyclotomic generator is a unit there.
pub fn sanity_places(level: u64, ell: u64) -> Result<Vec<Place>> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if level.is_multiple_of(ell) {
        return Err(Error::InvalidParameters(format!("{ell} divides the level {level}")));
    }
    build_places(level, ell, true)
}

fn build_places(level: u64, ell: u64, sanity: bool) -> Result<Vec<Place>> {
    if level < 1 {
        return Err(Error::InvalidLevel { level, reason: "level must be positive" });
    }
    let (_, prime_to) = arith::split_prime_part(level, ell);
    let factors = factor_cyclotomic(prime_to, ell);
    let mut out = Vec::with_capacity(factors.len());
    for (index, factor) in factors.into_iter().enumerate() {
        out.push(assemble_place(level, ell, index, factor, sanity));
    }
    let total: u64 = out.iter().map(|w| w.ramification() * w.residue_degree() as u64).sum();
    debug_assert_eq!(total, arith::euler_phi(level));
    Ok(out)
}

fn assemble_place(level: u64, ell: u64, index: usize, factor: FpPoly, sanity: bool) -> Place {
    let (k, prime_to) = arith::split_prime_part(level, ell);
    let zeta_exp = if prime_to == 1 {
        0
    } else {
        arith::inv_mod(arith::pow_mod(ell, k as u64, prime_to) as i64, prime_to as i64)
            .expect("l is a unit modulo M'") as u64
    };
    let field = ResidueField::new(factor.clone());
    let mut place = Place {
        level,
        ell,
        k,
        prime_to,
        index,
        factor,
        zeta_exp,
        sanity,
        field,
        gen_vals: Vec::new(),
        gen_logs: Vec::new(),
    };
    let (vals, logs) = generator_table(&place);
    place.gen_vals = vals;
    place.gen_logs = logs;
    place
}

/// Rebuilds a place from its defining factor, checking that the factor is an
/// irreducible divisor of the relevant cyclotomic polynomial.
pub fn place_from_factor(level: u64, ell: u64, index: usize, factor: FpPoly, sanity: bool) -> Result<Place> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if sanity == level.is_multiple_of(ell) {
        return Err(Error::Parse(format!("sanity flag inconsistent for l={ell}, M={level}")));
    }
    let (_, prime_to) = arith::split_prime_part(level, ell);
    let phi = FpPoly::from_signed(ell, &super::field::cyclotomic_poly(prime_to));
    if factor.ell() != ell || !factor.is_irreducible() || !phi.rem(&factor).is_zero() || factor.lead() != 1 {
        return Err(Error::Parse(format!("{factor:?} is not a monic irreducible factor of Phi_{prime_to}")));
    }
    Ok(assemble_place(level, ell, index, factor, sanity))
}

/// Valuations and unit-part logs of `-1`, `zeta_M` and every `1 - zeta_M^a`.
fn generator_table(w: &Place) -> (Vec<i64>, Vec<u64>) {
    let m = w.level;
    let field = &w.field;
    let ell_k = w.ell.pow(w.k);
    let mut vals = vec![0i64; m as usize + 1];
    let mut logs = vec![0u64; m as usize + 1];
    logs[0] = field.dlog(&field.from_int(-1));
    logs[1] = field.dlog(&w.zeta_image(1));
    for a in 1..m {
        let n = m / arith::gcd(a as i64, m as i64) as u64;
        let (j, rest) = arith::split_prime_part(n, w.ell);
        let (v, r) = if rest == 1 && j >= 1 {
            // zeta^a = zeta_{l^j}^u; 1 - zeta_{l^j}^u = (unit with residue u) * pi^{l^{k-j}}
            let u = a / (m / w.ell.pow(j));
            (ell_k / w.ell.pow(j), field.from_int(u as i64))
        } else {
            (0, field.sub(&field.one(), &w.zeta_image(a as i64)))
        };
        vals[1 + a as usize] = v as i64;
        logs[1 + a as usize] = field.dlog(&r);
    }
    (vals, logs)
}

/// Irreducible factors of `Phi_n` over `F_ell` (`ell` prime to `n`), one per
/// coset of `<ell>` in `(Z/n)^*`, ordered by the smallest coset element.
pub fn factor_cyclotomic(n: u64, ell: u64) -> Vec<FpPoly> {
    if n == 1 {
        return vec![FpPoly::new(ell, vec![ell - 1, 1])];
    }
    let f = arith::mult_order(ell, n) as usize;
    let ext = ResidueField::new(FpPoly::first_irreducible(ell, f));
    let beta = ext.pow(ext.generator(), ((ext.size() - 1) / n) as i128);
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for t in arith::units_mod(n) {
        if seen[t as usize] {
            continue;
        }
        // prod over the Frobenius orbit of (Y - beta^{t l^i})
        let mut poly: Vec<ResidueElt> = vec![ext.one()];
        let mut e = t;
        for _ in 0..f {
            seen[e as usize] = true;
            let root = ext.pow(&beta, e as i128);
            let mut next = vec![ext.zero_elt(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = ext.add(&next[i + 1], c);
                next[i] = ext.sub(&next[i], &ext.mul(c, &root));
            }
            poly = next;
            e = e * ell % n;
        }
        let coeffs = poly
            .iter()
            .map(|c| {
                assert!(c.0[1..].iter().all(|&x| x == 0), "factor has coefficients in F_l");
                c.0[0]
            })
            .collect();
        out.push(FpPoly::new(ell, coeffs));
    }
    out
}

/// Tame symbol of `x` and `y` at `w`:
/// `(-1)^{v(x)v(y)} x^{v(y)} y^{-v(x)}` reduced to the residue field.
pub fn tame_pair(w: &Place, x: &CycNumFormal, y: &CycNumFormal) -> Result<ResidueElt> {
    w.check_level(x)?;
    w.check_level(y)?;
    let log = w.tame_log(&x.to_vector(), &y.to_vector());
    Ok(w.field.pow(w.field.generator(), log as i128))
}

/// Maps an element of `from` to `to` along the homomorphism sending `X` to
/// `image_of_x`.
pub fn transport(from: &ResidueField, to: &ResidueField, x: &ResidueElt, image_of_x: &ResidueElt) -> ResidueElt {
    from.to_poly(x).eval_in(to, image_of_x)
}

/// The place `w'` with `rho_w o sigma_s = iota o rho_{w'}`, together with the
/// image of `X'` under `iota : k(w') -> k(w)`.
pub fn galois_partner(places: &[Place], w: usize, s: i64) -> Result<(usize, ResidueElt)> {
    let place = &places[w];
    let m = place.prime_to as i64;
    if arith::gcd(s, place.level as i64) != 1 {
        return Err(Error::NotCoprime { t: s, level: place.level });
    }
    let image = place.field.x_pow(arith::modulo(s, m));
    for (i, other) in places.iter().enumerate() {
        if other.factor.eval_in(&place.field, &image) == place.field.zero_elt() {
            return Ok((i, image));
        }
    }
    Err(Error::PlaceMatching(format!("no place matches sigma_{s} at {place:?}")))
}

/// All places above the primes dividing the level, grouped by prime.
#[derive(Clone, Debug)]
pub struct PlaceTable {
    level: u64,
    groups: Vec<(u64, Vec<Place>)>,
}

impl PlaceTable {
    pub fn for_level(level: u64) -> Result<Self> {
        let mut groups = Vec::new();
        for ell in arith::prime_divisors(level) {
            groups.push((ell, places_over(level, ell)?));
        }
        Ok(PlaceTable { level, groups })
    }

    /// Places over the primes dividing the level and over `extra` primes.
    pub fn with_extra_primes(level: u64, extra: &[u64]) -> Result<Self> {
        let mut table = Self::for_level(level)?;
        for &ell in extra {
            if !level.is_multiple_of(ell) && !table.groups.iter().any(|(l, _)| *l == ell) {
                table.groups.push((ell, sanity_places(level, ell)?));
            }
        }
        Ok(table)
    }

    pub fn from_groups(level: u64, groups: Vec<(u64, Vec<Place>)>) -> Self {
        PlaceTable { level, groups }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn groups(&self) -> &[(u64, Vec<Place>)] {
        &self.groups
    }

    pub fn over(&self, ell: u64) -> Option<&[Place]> {
        self.groups.iter().find(|(l, _)| *l == ell).map(|(_, p)| p.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.groups.iter().flat_map(|(_, p)| p.iter())
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|(_, p)| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn u(m: u64, a: i64) -> CycNumFormal {
        CycNumFormal::one_minus_zeta(m, a).unwrap()
    }

    #[test]
    fn splitting_examples() {
        let p = places_over(5, 5).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].ramification(), p[0].residue_degree()), (4, 1));
        let p = places_over(12, 3).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].ramification(), p[0].residue_degree()), (2, 2));
        assert_eq!(p[0].factor().coeffs(), &[1, 0, 1]);
        let p = places_over(12, 2).unwrap();
        assert_eq!((p.len(), p[0].ramification(), p[0].residue_degree()), (1, 2, 2));
        assert_eq!(p[0].factor().coeffs(), &[1, 1, 1]);
        assert!(places_over(12, 5).is_err());
    }

    #[test]
    fn splitting_counts() {
        for m in 3..40u64 {
            for ell in arith::prime_divisors(m) {
                let ps = places_over(m, ell).unwrap();
                let (_, mp) = arith::split_prime_part(m, ell);
                let f = arith::mult_order(ell, mp) as usize;
                let mut total = 0;
                for w in &ps {
                    assert_eq!(w.residue_degree(), f);
                    assert!(w.factor().is_irreducible());
                    total += w.ramification() * w.residue_degree() as u64;
                }
                assert_eq!(total, arith::euler_phi(m));
            }
        }
    }

    #[test]
    fn residue_examples() {
        let w = &places_over(5, 5).unwrap()[0];
        let (v, r) = w.valuation_and_residue(&u(5, 1)).unwrap();
        assert_eq!((v, r), (1, w.field().one()));
        let (v, r) = w.valuation_and_residue(&u(5, 2).sub(&u(5, 1))).unwrap();
        assert_eq!((v, r), (0, w.field().from_int(2)));
        let w = &places_over(12, 3).unwrap()[0];
        assert_eq!(w.valuation_and_log(&u(12, 4)).unwrap().0, 1);
        assert_eq!(w.valuation_and_log(&u(12, 1)).unwrap().0, 0);
    }

    #[test]
    fn tame_examples() {
        let w = &places_over(5, 5).unwrap()[0];
        assert_eq!(tame_pair(w, &u(5, 1), &u(5, 2)).unwrap(), w.field().from_int(2));
        let x = u(5, 2).sub(&u(5, 1));
        assert!(w.field().is_one(&tame_pair(w, &x, &x).unwrap()));
    }

    /// Steinberg vanishing for x = u_a / u_{a+b}, 1 - x = zeta^a u_b / u_{a+b}.
    #[test]
    fn steinberg_vanishing() {
        for m in [5u64, 8, 9, 12, 15] {
            let table = PlaceTable::with_extra_primes(m, &[2, 3, 7]).unwrap();
            for a in 1..m as i64 {
                for b in 1..m as i64 {
                    if (a + b) % m as i64 == 0 {
                        continue;
                    }
                    let x = u(m, a).sub(&u(m, a + b));
                    let y = CycNumFormal::zeta(m, a).add(&u(m, b)).sub(&u(m, a + b));
                    for w in table.iter() {
                        assert!(w.field().is_one(&tame_pair(w, &x, &y).unwrap()), "{m} {a} {b} {w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_matches_norm() {
        for m in [8u64, 9, 12, 20, 21] {
            for ell in arith::prime_divisors(m) {
                let ps = places_over(m, ell).unwrap();
                for a in 1..m as i64 {
                    let x = u(m, a).add(&u(m, 1).scale(2));
                    let norm = x.eval().norm();
                    let vl = |n: &BigInt| {
                        let mut n = n.abs();
                        let mut k = 0i64;
                        while (&n % ell) == BigInt::from(0) {
                            n /= ell;
                            k += 1;
                        }
                        k
                    };
                    let expected = vl(norm.numer()) - vl(norm.denom());
                    let got: i64 = ps
                        .iter()
                        .map(|w| w.residue_degree() as i64 * w.valuation_and_log(&x).unwrap().0)
                        .sum();
                    assert_eq!(got, expected, "M={m} l={ell} a={a}");
                }
            }
        }
    }

    #[test]
    fn galois_equivariance_of_tame_symbol() {
        let m = 15u64;
        let table = PlaceTable::for_level(m).unwrap();
        for (_, places) in table.groups() {
            for s in arith::units_mod(m) {
                for wi in 0..places.len() {
                    let (wj, img) = galois_partner(places, wi, s as i64).unwrap();
                    let (w, wp) = (&places[wi], &places[wj]);
                    for (a, b) in [(1, 2), (3, 5), (5, 6), (1, 10)] {
                        let (x, y) = (u(m, a), u(m, b));
                        let lhs = tame_pair(w, &x.galois(s as i64).unwrap(), &y.galois(s as i64).unwrap())
                            .unwrap();
                        let rhs = transport(wp.field(), w.field(), &tame_pair(wp, &x, &y).unwrap(), &img);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn sanity_places_see_units() {
        for w in sanity_places(11, 3).unwrap() {
            assert!(w.generator_valuations().iter().all(|&v| v == 0));
        }
        assert!(sanity_places(12, 3).is_err());
    }
}
