//! Formal wedge combinations of cyclotomic generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclo::CycNumFormal;
use crate::error::{Error, Result};
use crate::linalg::Int;

/// A finite sum `sum n_{ij} e_i ^ e_j` over the generators
/// `e_0 = -1, e_1 = zeta, e_{1+a} = 1 - zeta^a` of `G_M`.
///
/// Stored with `i <= j`. A diagonal term `e_i ^ e_i` is rewritten as
/// `e_i ^ (-1)` (from `{x, x} = {x, -1}`), and `e_0 ^ e_0` is kept modulo 2.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "SymbolicRepr", try_from = "SymbolicRepr")]
pub struct SymbolicK2 {
    level: u64,
    terms: BTreeMap<(usize, usize), Int>,
}

impl SymbolicK2 {
    pub fn zero(level: u64) -> Self {
        SymbolicK2 { level, terms: BTreeMap::new() }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Int)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `k * e_i ^ e_j`.
    pub fn add_pair(&mut self, i: usize, j: usize, k: Int) {
        if k == 0 {
            return;
        }
        if i > j {
            return self.add_pair(j, i, -k);
        }
        if i == j {
            if i == 0 {
                let e = self.terms.entry((0, 0)).or_insert(0);
                *e = (*e + k).rem_euclid(2);
                if *e == 0 {
                    self.terms.remove(&(0, 0));
                }
                return;
            }
            return self.add_pair(0, i, -k);
        }
        let e = self.terms.entry((i, j)).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&(i, j));
        }
    }

    /// `x ^ y` for exponent vectors in the generator order.
    pub fn wedge_vectors(level: u64, x: &[Int], y: &[Int]) -> Self {
        let mut s = Self::zero(level);
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    s.add_pair(i, j, a * b);
                }
            }
        }
        s
    }

    pub fn wedge(x: &CycNumFormal, y: &CycNumFormal) -> Result<Self> {
        if x.level() != y.level() {
            return Err(Error::IncompatibleLevels(x.level(), y.level()));
        }
        Ok(Self::wedge_vectors(x.level(), &x.to_vector(), &y.to_vector()))
    }

    /// `(1 - zeta^c) ^ (1 - zeta^d)`.
    pub fn unit_pair(level: u64, c: u64, d: u64) -> Result<Self> {
        let m = level;
        if c.is_multiple_of(m) || d.is_multiple_of(m) {
            return Err(Error::InvalidParameters(format!("u_{c} ^ u_{d} needs nonzero indices mod {m}")));
        }
        let mut s = Self::zero(level);
        s.add_pair(1 + (c % m) as usize, 1 + (d % m) as usize, 1);
        Ok(s)
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.level, other.level);
        for (&(i, j), &k) in &other.terms {
            self.add_pair(i, j, k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn scale(&self, k: Int) -> Self {
        let mut s = Self::zero(self.level);
        for (&(i, j), &v) in &self.terms {
            s.add_pair(i, j, v * k);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Applies a map on generators, given as the image vector of each
    /// generator at level `target`.
    pub fn map_generators(&self, target: u64, images: &[Vec<Int>]) -> Self {
        let mut s = Self::zero(target);
        for (&(i, j), &k) in &self.terms {
            s.add_assign(&Self::wedge_vectors(target, &images[i], &images[j]).scale(k));
        }
        s
    }

    /// Image under `sigma_t : zeta -> zeta^t`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let m = self.level;
        if arith::gcd(t, m as i64) != 1 {
            return Err(Error::NotCoprime { t, level: m });
        }
        let n = CycNumFormal::ngens(m);
        let images: Vec<Vec<Int>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                match i {
                    0 => v[0] = 1,
                    1 => v[1] = t as Int,
                    _ => v[1 + arith::modulo((i as i64 - 1) * t, m as i64) as usize] = 1,
                }
                v
            })
            .collect();
        Ok(self.map_generators(m, &images))
    }

    /// The same element viewed at level `target`, via `zeta_M = zeta_N^{N/M}`.
    pub fn restrict_to(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::IncompatibleLevels(self.level, target));
        }
        let step = (target / self.level) as usize;
        let n = CycNumFormal::ngens(target);
        let images: Vec<Vec<Int>> = (0..CycNumFormal::ngens(self.level))
            .map(|i| {
                let mut v = vec![0; n];
                match i {
                    0 => v[0] = 1,
                    1 => v[1] = step as Int,
                    _ => v[1 + (i - 1) * step] = 1,
                }
                v
            })
            .collect();
        Ok(self.map_generators(target, &images))
    }
}

fn generator_name(i: usize) -> String {
    match i {
        0 => "-1".into(),
        1 => "z".into(),
        _ => format!("u{}", i - 1),
    }
}

impl fmt::Debug for SymbolicK2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), &k)| format!("{k}*({}^{})", generator_name(i), generator_name(j)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized form: `[i, j, "coefficient"]` triples.
#[derive(Serialize, Deserialize)]
struct SymbolicRepr {
    level: u64,
    terms: Vec<(usize, usize, String)>,
}

impl From<SymbolicK2> for SymbolicRepr {
    fn from(s: SymbolicK2) -> Self {
        SymbolicRepr { level: s.level, terms: s.terms.into_iter().map(|((i, j), k)| (i, j, k.to_string())).collect() }
    }
}

impl TryFrom<SymbolicRepr> for SymbolicK2 {
    type Error = String;
    fn try_from(r: SymbolicRepr) -> std::result::Result<Self, String> {
        let n = CycNumFormal::ngens(r.level);
        let mut s = SymbolicK2::zero(r.level);
        for (i, j, k) in r.terms {
            if i >= n || j >= n {
                return Err(format!("generator index out of range at level {}", r.level));
            }
            let k: Int = k.parse().map_err(|_| format!("bad coefficient {k:?}"))?;
            s.add_pair(i, j, k);
        }
        Ok(s)
    }
}
