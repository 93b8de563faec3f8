//! Tame-symbol backend: evaluation of symbols at the places above chosen
//! primes, the conjugation test for the coinvariant quotient, and norms of
//! tame vectors down a level.

use serde::{Deserialize, Serialize};

use super::symbolic::SymbolicK2;
use crate::arith;
use crate::cyclo::{galois_partner, transport, Place, PlaceTable};
use crate::error::{Error, Result};
use crate::linalg::{strip_primes, Int};

/// Discrete logs of tame symbols, one per place of a [`TameContext`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameVector {
    pub level: u64,
    pub logs: Vec<u64>,
    /// `q_w - 1` for each place.
    pub orders: Vec<u64>,
}

impl TameVector {
    pub fn is_trivial(&self) -> bool {
        self.logs.iter().all(|&x| x == 0)
    }

    pub fn sub(&self, other: &TameVector) -> TameVector {
        assert_eq!(self.orders, other.orders);
        let logs = self
            .logs
            .iter()
            .zip(&other.logs)
            .zip(&self.orders)
            .map(|((&a, &b), &n)| ((a as i128 - b as i128).rem_euclid(n as i128)) as u64)
            .collect();
        TameVector { level: self.level, logs, orders: self.orders.clone() }
    }
}

/// Result of testing a tame vector against the conjugation-coinvariant,
/// prime-inverted quotient: per place, `log(delta_w) + log(iota(delta_{c(w)}))`
/// reduced modulo the part of `q_w - 1` prime to the inverted primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvariantCheck {
    pub residuals: Vec<u64>,
    pub moduli: Vec<u64>,
    pub inverted: Vec<u64>,
}

impl CoinvariantCheck {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|&r| r == 0)
    }
}

/// Places of one level with the data needed for conjugation.
#[derive(Clone, Debug)]
pub struct TameContext {
    level: u64,
    table: PlaceTable,
    places: Vec<Place>,
    /// For each place: its partner under complex conjugation and the log of
    /// the partner's generator transported into this place's residue field.
    conj: Vec<(usize, u64)>,
}

impl TameContext {
    /// Places over the primes dividing the level.
    pub fn new(level: u64) -> Result<Self> {
        Self::from_table(PlaceTable::for_level(level)?)
    }

    /// Places over the primes dividing the level and over `extra` primes.
    pub fn with_extra_primes(level: u64, extra: &[u64]) -> Result<Self> {
        Self::from_table(PlaceTable::with_extra_primes(level, extra)?)
    }

    pub fn from_table(table: PlaceTable) -> Result<Self> {
        let level = table.level();
        let mut places = Vec::new();
        let mut conj = Vec::new();
        for (_, group) in table.groups() {
            let offset = places.len();
            for w in 0..group.len() {
                let (partner, image) = galois_partner(group, w, -1)?;
                let from = &group[partner];
                let to = &group[w];
                let g = transport(from.field(), to.field(), from.field().generator(), &image);
                conj.push((offset + partner, to.field().dlog(&g)));
            }
            places.extend(group.iter().cloned());
        }
        Ok(TameContext { level, table, places, conj })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn table(&self) -> &PlaceTable {
        &self.table
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn orders(&self) -> Vec<u64> {
        self.places.iter().map(|w| w.unit_order()).collect()
    }

    pub fn trivial(&self) -> TameVector {
        TameVector { level: self.level, logs: vec![0; self.places.len()], orders: self.orders() }
    }

    /// Tame symbols of `s` at every place, extended bilinearly.
    pub fn eval(&self, s: &SymbolicK2) -> Result<TameVector> {
        if s.level() != self.level {
            return Err(Error::IncompatibleLevels(s.level(), self.level));
        }
        let terms: Vec<((usize, usize), Int)> = s.terms().collect();
        let logs = crate::par::map_slice(&self.places, |w| {
            let n = w.unit_order() as i128;
            let vals = w.generator_valuations();
            let lg = w.generator_logs();
            let l0 = lg[0] as i128;
            let mut acc: i128 = 0;
            for &((i, j), k) in &terms {
                let (vi, vj) = (vals[i] as i128, vals[j] as i128);
                let t = (vi * vj).rem_euclid(2) * l0 + vj * lg[i] as i128 - vi * lg[j] as i128;
                acc = (acc + k.rem_euclid(n) * t.rem_euclid(n)).rem_euclid(n);
            }
            acc as u64
        });
        Ok(TameVector { level: self.level, logs, orders: self.orders() })
    }

    /// Checks `(1 + c) delta = 0` after inverting the given primes.
    pub fn coinvariant_check(&self, delta: &TameVector, inverted: &[u64]) -> CoinvariantCheck {
        assert_eq!(delta.logs.len(), self.places.len());
        let mut residuals = Vec::with_capacity(self.places.len());
        let mut moduli = Vec::with_capacity(self.places.len());
        for (w, &(partner, lambda)) in self.conj.iter().enumerate() {
            let n = self.places[w].unit_order() as i128;
            let odd = strip_primes(n, inverted).max(1);
            let v = delta.logs[w] as i128 + lambda as i128 * delta.logs[partner] as i128;
            residuals.push(v.rem_euclid(n).rem_euclid(odd) as u64);
            moduli.push(odd as u64);
        }
        CoinvariantCheck { residuals, moduli, inverted: inverted.to_vec() }
    }

    /// Whether `s` vanishes in the tame shadow of the coinvariant quotient
    /// with 2 inverted.
    pub fn vanishes(&self, s: &SymbolicK2) -> Result<bool> {
        Ok(self.coinvariant_check(&self.eval(s)?, &[2]).passes())
    }
}

/// Norm of tame vectors from a context at level `N` to a context at level
/// `M | N`: `(partial_v N x) = prod_{w | v} N_{k(w)/k(v)} (partial_w x)`.
#[derive(Clone, Debug)]
pub struct TameNorm {
    source_level: u64,
    target_level: u64,
    /// For each target place: `(source place, multiplier)` with the source
    /// log times the multiplier giving the norm's log in the target field.
    terms: Vec<Vec<(usize, u64)>>,
    target_orders: Vec<u64>,
}

impl TameNorm {
    pub fn new(source: &TameContext, target: &TameContext) -> Result<Self> {
        let (n, m) = (source.level, target.level);
        if n % m != 0 {
            return Err(Error::IncompatibleLevels(n, m));
        }
        let mut terms = vec![Vec::new(); target.places.len()];
        let mut covered = vec![false; source.places.len()];
        for (vi, v) in target.places.iter().enumerate() {
            for (wi, w) in source.places.iter().enumerate() {
                if w.ell() != v.ell() {
                    continue;
                }
                let r = w.prime_to_part() / v.prime_to_part();
                let (kv, kw) = (v.field(), w.field());
                let y = kw.x_pow(r as i64);
                if !kw.is_zero(&v.factor().eval_in(kw, &y)) {
                    continue;
                }
                let (qv, qw) = (v.unit_order(), w.unit_order());
                if qw % qv != 0 {
                    return Err(Error::PlaceMatching(format!("{w:?} over {v:?}: degrees do not divide")));
                }
                let e = qw / qv;
                let image = transport(kv, kw, kv.generator(), &y);
                let log = kw.dlog(&image);
                if log % e != 0 {
                    return Err(Error::PlaceMatching(format!("{w:?} over {v:?}: embedding misses subfield")));
                }
                let lambda = log / e;
                let mult = arith::inv_mod((lambda % qv) as i64, qv as i64)
                    .ok_or_else(|| Error::PlaceMatching(format!("{w:?} over {v:?}: non-generator image")))?;
                terms[vi].push((wi, if qv == 1 { 0 } else { mult as u64 }));
                if covered[wi] {
                    return Err(Error::PlaceMatching(format!("{w:?} lies over two places")));
                }
                covered[wi] = true;
            }
        }
        for (wi, w) in source.places.iter().enumerate() {
            if !covered[wi] && target.places.iter().any(|v| v.ell() == w.ell()) {
                return Err(Error::PlaceMatching(format!("{w:?} lies over no place of level {m}")));
            }
        }
        Ok(TameNorm { source_level: n, target_level: m, terms, target_orders: target.orders() })
    }

    pub fn apply(&self, x: &TameVector) -> Result<TameVector> {
        if x.level != self.source_level {
            return Err(Error::IncompatibleLevels(x.level, self.source_level));
        }
        let logs = self
            .terms
            .iter()
            .zip(&self.target_orders)
            .map(|(ts, &q)| {
                let q = q as i128;
                ts.iter().fold(0i128, |acc, &(w, mult)| (acc + x.logs[w] as i128 * mult as i128).rem_euclid(q))
                    as u64
            })
            .collect();
        Ok(TameVector { level: self.target_level, logs, orders: self.target_orders.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycNumFormal;

    #[test]
    fn level_five_value() {
        let ctx = TameContext::new(5).unwrap();
        let t = ctx.eval(&SymbolicK2::unit_pair(5, 1, 2).unwrap()).unwrap();
        let w = &ctx.places()[0];
        let expect = w.field().dlog(&w.field().from_int(2));
        assert_eq!(t.logs, vec![expect]);
    }

    #[test]
    fn steinberg_symbols_are_trivial() {
        let m = 12u64;
        let ctx = TameContext::with_extra_primes(m, &[5, 7]).unwrap();
        for a in 1..m as i64 {
            for b in 1..m as i64 {
                if (a + b) % m as i64 == 0 {
                    continue;
                }
                let ua = CycNumFormal::one_minus_zeta(m, a).unwrap();
                let ub = CycNumFormal::one_minus_zeta(m, b).unwrap();
                let uab = CycNumFormal::one_minus_zeta(m, a + b).unwrap();
                let x = ua.sub(&uab);
                let y = CycNumFormal::zeta(m, a).add(&ub).sub(&uab);
                assert!(ctx.eval(&SymbolicK2::wedge(&x, &y).unwrap()).unwrap().is_trivial());
            }
        }
    }

    #[test]
    fn conjugate_pairs_cancel_in_coinvariants() {
        let m = 13u64;
        let ctx = TameContext::new(m).unwrap();
        let s = SymbolicK2::unit_pair(m, 1, 3).unwrap();
        let cs = s.galois(-1).unwrap();
        let diff = ctx.eval(&s).unwrap().sub(&ctx.eval(&cs).unwrap());
        assert!(ctx.coinvariant_check(&diff, &[2]).passes());
        assert!(!ctx.coinvariant_check(&ctx.eval(&s).unwrap(), &[2]).passes());
    }

    #[test]
    fn norm_of_restriction_is_degree_multiple() {
        for (m, p) in [(4u64, 3u64), (6, 2), (5, 5), (7, 2)] {
            let n = m * p;
            let src = TameContext::new(n).unwrap();
            let tgt = TameContext::with_extra_primes(m, &[p]).unwrap();
            let norm = TameNorm::new(&src, &tgt).unwrap();
            let s = SymbolicK2::unit_pair(m, 1, 2).unwrap().add(&SymbolicK2::unit_pair(m, 1, m - 1).unwrap().scale(3));
            let down = norm.apply(&src.eval(&s.restrict_to(n).unwrap()).unwrap()).unwrap();
            let deg = (arith::euler_phi(n) / arith::euler_phi(m)) as i128;
            let expect = tgt.eval(&s.scale(deg)).unwrap();
            assert_eq!(down, expect, "M={m} p={p}");
        }
    }
}
