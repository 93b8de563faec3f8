//! Hecke, diamond, Atkin-Lehner and degeneracy operators as integer
//! matrices acting on row vectors of homology coordinates.

use serde::{Deserialize, Serialize};

use super::cusps::Cusp;
use super::homology::{HomElt, HomologyPresentation};
use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{Int, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    Diamond(u64),
    AtkinLehner,
    /// `U_l` for a prime dividing the level.
    U(u64),
    /// `T_l` for a prime not dividing the level.
    T(u64),
}

pub fn diamond_matrix(pres: &HomologyPresentation, t: u64) -> Result<IntMatrix> {
    let m = pres.level();
    if arith::gcd(t as i64, m as i64) != 1 {
        return Err(Error::NotCoprime { t: t as i64, level: m });
    }
    let t = t as i128;
    Ok(pres.coset_map_matrix(pres, |x| vec![((t * x.c as i128, t * x.d as i128), 1)]))
}

/// `{alpha, beta} -> {-1/(M alpha), -1/(M beta)}`.
pub fn atkin_lehner_matrix(pres: &HomologyPresentation) -> IntMatrix {
    let w = [0, -1, pres.level() as i128, 0];
    pres.symbol_map_matrix(pres, move |a, b| vec![(a.act(w), b.act(w), 1)])
}

fn u_terms(ell: u64, a: Cusp, b: Cusp) -> Vec<(Cusp, Cusp, Int)> {
    let l = ell as i128;
    (0..l).map(|j| (a.act([1, j, 0, l]), b.act([1, j, 0, l]), 1)).collect()
}

/// `U_l {alpha, beta} = sum_{j < l} {(alpha + j)/l, (beta + j)/l}`.
pub fn hecke_u_matrix(pres: &HomologyPresentation, ell: u64) -> Result<IntMatrix> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if !pres.level().is_multiple_of(ell) {
        return Err(Error::PrimeNotDividing { ell, level: pres.level() });
    }
    Ok(pres.symbol_map_matrix(pres, move |a, b| u_terms(ell, a, b)))
}

/// `T_l = sum_{j < l} {(alpha + j)/l, (beta + j)/l} + <l> {l alpha, l beta}`.
pub fn hecke_t_matrix(pres: &HomologyPresentation, ell: u64) -> Result<IntMatrix> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let m = pres.level();
    if m.is_multiple_of(ell) {
        return Err(Error::InvalidParameters(format!("T_{ell} needs {ell} prime to the level {m}")));
    }
    let u_part = pres.symbol_map_matrix(pres, move |a, b| u_terms(ell, a, b));
    let l = ell as i128;
    let scale = pres.symbol_map_matrix(pres, move |a, b| vec![(a.act([l, 0, 0, 1]), b.act([l, 0, 0, 1]), 1)]);
    let dia = diamond_matrix(pres, ell % m)?;
    Ok(add(&u_part, &scale.mul(&dia)))
}

pub fn operator_matrix(pres: &HomologyPresentation, op: Operator) -> Result<IntMatrix> {
    match op {
        Operator::Diamond(t) => diamond_matrix(pres, t),
        Operator::AtkinLehner => Ok(atkin_lehner_matrix(pres)),
        Operator::U(l) => hecke_u_matrix(pres, l),
        Operator::T(l) => hecke_t_matrix(pres, l),
    }
}

pub fn apply_operator(pres: &HomologyPresentation, op: Operator, h: &HomElt) -> Result<HomElt> {
    if h.level != pres.level() {
        return Err(Error::IncompatibleLevels(h.level, pres.level()));
    }
    Ok(h.apply(&operator_matrix(pres, op)?, pres.level()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    /// `z -> z`.
    Pi1,
    /// `z -> pz`.
    Pi2,
}

/// Matrix of `pi_1` or `pi_2` from level `Mp` to level `M`.
pub fn degeneracy_matrix(
    source: &HomologyPresentation,
    target: &HomologyPresentation,
    which: Degeneracy,
) -> Result<IntMatrix> {
    let (n, m) = (source.level(), target.level());
    if n % m != 0 || !arith::is_prime(n / m) {
        return Err(Error::IncompatibleLevels(n, m));
    }
    let p = (n / m) as i128;
    Ok(match which {
        Degeneracy::Pi1 => source.coset_map_matrix(target, |x| vec![((x.c as i128, x.d as i128), 1)]),
        Degeneracy::Pi2 => {
            source.symbol_map_matrix(target, move |a, b| vec![(a.act([p, 0, 0, 1]), b.act([p, 0, 0, 1]), 1)])
        }
    })
}

/// `pi_1 - <p> pi_2` from level `Mp` to level `M`.
pub fn pi1_minus_diamond_pi2(source: &HomologyPresentation, target: &HomologyPresentation) -> Result<IntMatrix> {
    let p = source.level() / target.level();
    let m = target.level();
    let pi1 = degeneracy_matrix(source, target, Degeneracy::Pi1)?;
    let pi2 = degeneracy_matrix(source, target, Degeneracy::Pi2)?;
    let dia = diamond_matrix(target, p % m)?;
    Ok(sub(&pi1, &pi2.mul(&dia)))
}

pub fn add(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    lin(a, b, 1)
}

pub fn sub(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    lin(a, b, -1)
}

fn lin(a: &IntMatrix, b: &IntMatrix, k: Int) -> IntMatrix {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let rows: Vec<Vec<Int>> =
        a.rows_iter().zip(b.rows_iter()).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + k * q).collect()).collect();
    IntMatrix::from_rows(a.ncols(), &rows)
}

pub fn scalar(n: usize, k: Int) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = k;
    }
    m
}
