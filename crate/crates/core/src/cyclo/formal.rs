//! The group `G_M` of cyclotomic numbers generated by `-1`, `zeta_M` and the
//! `1 - zeta_M^a`, kept as formal exponent vectors, together with a verified
//! lattice of multiplicative relations among the generators.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{cyclic_equal, CycElt, CyclicInt};
use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{AbelianQuotient, Int, IntMatrix};

/// `(-1)^sign * zeta^zeta * prod_a (1 - zeta^a)^units[a]`.
///
/// Generator order for vector views: `[-1, zeta, u_1, ..., u_{M-1}]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycNumFormal {
    level: u64,
    sign: u8,
    zeta: u64,
    /// Indexed by `a` in `0..M`; entry 0 is always zero.
    units: Vec<i64>,
}

impl CycNumFormal {
    pub fn one(level: u64) -> Self {
        assert!(level >= 1);
        CycNumFormal { level, sign: 0, zeta: 0, units: vec![0; level as usize] }
    }

    pub fn minus_one(level: u64) -> Self {
        CycNumFormal { sign: 1, ..Self::one(level) }
    }

    pub fn zeta(level: u64, k: i64) -> Self {
        CycNumFormal { zeta: arith::modulo(k, level as i64) as u64, ..Self::one(level) }
    }

    /// `1 - zeta_M^a`; requires `a` nonzero modulo `M`.
    pub fn one_minus_zeta(level: u64, a: i64) -> Result<Self> {
        let a = arith::modulo(a, level as i64);
        if a == 0 {
            return Err(Error::InvalidParameters(format!("1 - zeta^0 = 0 at level {level}")));
        }
        let mut x = Self::one(level);
        x.units[a as usize] = 1;
        Ok(x)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn sign(&self) -> u8 {
        self.sign
    }

    pub fn zeta_exponent(&self) -> u64 {
        self.zeta
    }

    /// Exponent of `1 - zeta^a`.
    pub fn unit_exponent(&self, a: u64) -> i64 {
        self.units[(a % self.level) as usize]
    }

    /// Nonzero `(a, e)` pairs.
    pub fn unit_terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.units.iter().enumerate().filter(|(_, &e)| e != 0).map(|(a, &e)| (a as u64, e))
    }

    pub fn ngens(level: u64) -> usize {
        level as usize + 1
    }

    pub fn to_vector(&self) -> Vec<Int> {
        let mut v = Vec::with_capacity(self.level as usize + 1);
        v.push(self.sign as Int);
        v.push(self.zeta as Int);
        v.extend(self.units[1..].iter().map(|&e| e as Int));
        v
    }

    pub fn from_vector(level: u64, v: &[Int]) -> Self {
        assert_eq!(v.len(), level as usize + 1);
        let mut units = vec![0i64; level as usize];
        for (a, &e) in v[2..].iter().enumerate() {
            units[a + 1] = i64::try_from(e).expect("exponent fits in i64");
        }
        CycNumFormal {
            level,
            sign: v[0].rem_euclid(2) as u8,
            zeta: v[1].rem_euclid(level as Int) as u64,
            units,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.sign == 0 && self.zeta == 0 && self.units.iter().all(|&e| e == 0)
    }

    /// Group law (multiplication of the represented numbers).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        CycNumFormal {
            level: self.level,
            sign: (self.sign + other.sign) % 2,
            zeta: (self.zeta + other.zeta) % self.level,
            units: self.units.iter().zip(&other.units).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        CycNumFormal {
            level: self.level,
            sign: (self.sign as i64 * k).rem_euclid(2) as u8,
            zeta: (self.zeta as i64 * k).rem_euclid(self.level as i64) as u64,
            units: self.units.iter().map(|e| e * k).collect(),
        }
    }

    /// Image under `zeta -> zeta^t`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let m = self.level as i64;
        if arith::gcd(t, m) != 1 {
            return Err(Error::NotCoprime { t, level: self.level });
        }
        let mut out = Self::one(self.level);
        out.sign = self.sign;
        out.zeta = arith::modulo(self.zeta as i64 * t, m) as u64;
        for (a, e) in self.unit_terms() {
            out.units[arith::modulo(a as i64 * t, m) as usize] += e;
        }
        Ok(out)
    }

    /// The same number viewed at level `target` (a multiple of the level),
    /// using `zeta_M = zeta_N^{N/M}`.
    pub fn restrict_to(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::IncompatibleLevels(self.level, target));
        }
        let step = target / self.level;
        let mut out = Self::one(target);
        out.sign = self.sign;
        out.zeta = self.zeta * step % target;
        for (a, e) in self.unit_terms() {
            out.units[(a * step) as usize] += e;
        }
        Ok(out)
    }

    /// Exact evaluation as a pair `(numerator, denominator)` of products in
    /// `Z[x]/(x^M - 1)`; `None` on coefficient overflow.
    pub fn eval_cyclic(&self) -> Option<(CyclicInt, CyclicInt)> {
        let mut num = CyclicInt::one(self.level);
        let mut den = CyclicInt::one(self.level);
        if self.sign == 1 {
            num.negate();
        }
        num.shift(self.zeta as i64);
        for (a, e) in self.unit_terms() {
            let target = if e > 0 { &mut num } else { &mut den };
            for _ in 0..e.unsigned_abs() {
                target.mul_one_minus(a as i64)?;
            }
        }
        Some((num, den))
    }

    /// Exact value in `Q(zeta_M)`.
    pub fn eval(&self) -> CycElt {
        let mut acc = CycElt::from_integer(self.level, if self.sign == 1 { -1 } else { 1 });
        acc = acc.mul(&CycElt::zeta_pow(self.level, self.zeta as i64));
        for (a, e) in self.unit_terms() {
            let f = CycElt::one_minus_zeta_pow(self.level, a as i64);
            acc = acc.mul(&f.pow(e).expect("1 - zeta^a is nonzero"));
        }
        acc
    }

    /// Whether the represented number is exactly 1.
    pub fn evaluates_to_one(&self) -> bool {
        match self.eval_cyclic() {
            Some((num, den)) => cyclic_equal(&num, &den),
            None => self.eval().is_one(),
        }
    }
}

impl fmt::Debug for CycNumFormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.sign == 1 {
            parts.push("-1".to_string());
        }
        if self.zeta != 0 {
            parts.push(format!("z^{}", self.zeta));
        }
        for (a, e) in self.unit_terms() {
            if e == 1 {
                parts.push(format!("u{a}"));
            } else {
                parts.push(format!("u{a}^{e}"));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "[{}]_{}", parts.join("*"), self.level)
    }
}

/// Origin of a lattice relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    /// `(-1)^2`, `zeta^M`, or `-1 = zeta^{M/2}`.
    Torsion,
    /// `1 - zeta^{-a} = -zeta^{-a} (1 - zeta^a)`.
    Inversion { a: u64 },
    /// `1 - zeta^{nb} = prod_k (1 - zeta^{b + kM/n})`.
    Distribution { n: u64, b: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub vector: Vec<Int>,
}

/// Verified relations among the generators of `G_M` and the resulting
/// quotient `Z^{M+1} / L`.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    level: u64,
    relations: Vec<Relation>,
    group: AbelianQuotient,
}

impl RelationLattice {
    pub fn build(level: u64) -> Result<Self> {
        if level < 3 {
            return Err(Error::InvalidLevel { level, reason: "relation lattice needs M >= 3" });
        }
        let candidates = candidate_relations(level);
        let mut relations = Vec::with_capacity(candidates.len());
        for rel in candidates {
            let x = CycNumFormal::from_vector(level, &rel.vector);
            if !x.evaluates_to_one() {
                return Err(Error::FalseRelation(format!("{:?} at level {level}", rel.kind)));
            }
            relations.push(rel);
        }
        Self::from_relations(level, relations)
    }

    /// Rebuilds the quotient from already verified relations.
    pub fn from_relations(level: u64, relations: Vec<Relation>) -> Result<Self> {
        let n = CycNumFormal::ngens(level);
        let rows: Vec<Vec<Int>> = relations.iter().map(|r| r.vector.clone()).collect();
        let group = AbelianQuotient::new(n, &IntMatrix::from_rows(n, &rows))?;
        Ok(RelationLattice { level, relations, group })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn group(&self) -> &AbelianQuotient {
        &self.group
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.group.is_zero(v)
    }

    /// Equality in `G_M` by lattice membership.
    pub fn equal(&self, x: &CycNumFormal, y: &CycNumFormal) -> bool {
        self.contains(&x.sub(y).to_vector())
    }

    /// Equality certified by exact field evaluation.
    pub fn equal_exact(x: &CycNumFormal, y: &CycNumFormal) -> bool {
        x.sub(y).evaluates_to_one()
    }
}

fn candidate_relations(m: u64) -> Vec<Relation> {
    let n = CycNumFormal::ngens(m);
    let unit = |a: u64| 1 + a as usize;
    let mut out = Vec::new();
    let mut v = vec![0; n];
    v[0] = 2;
    out.push(Relation { kind: RelationKind::Torsion, vector: v });
    let mut v = vec![0; n];
    v[1] = m as Int;
    out.push(Relation { kind: RelationKind::Torsion, vector: v });
    if m.is_multiple_of(2) {
        let mut v = vec![0; n];
        v[0] = 1;
        v[1] = -((m / 2) as Int);
        out.push(Relation { kind: RelationKind::Torsion, vector: v });
    }
    for a in 1..m {
        let b = m - a;
        if b < a {
            continue;
        }
        let mut v = vec![0; n];
        v[unit(b)] += 1;
        v[unit(a)] -= 1;
        v[0] -= 1;
        v[1] += a as Int;
        out.push(Relation { kind: RelationKind::Inversion { a }, vector: v });
    }
    for d in arith::divisors(m) {
        if d == 1 {
            continue;
        }
        let step = m / d;
        for b in 0..step {
            if (d * b) % m == 0 {
                continue;
            }
            let mut v = vec![0; n];
            v[unit(d * b % m)] += 1;
            for k in 0..d {
                v[unit((b + k * step) % m)] -= 1;
            }
            if v.iter().any(|&x| x != 0) {
                out.push(Relation { kind: RelationKind::Distribution { n: d, b }, vector: v });
            }
        }
    }
    out
}
