//! Finitely presented abelian groups `Z^n / <relations>` and sublattices.

use super::matrix::{Int, IntMatrix};
use super::snf::{smith_normal_form, solve_left_with, Snf, SnfOptions};
use crate::arith;
use crate::error::LinalgError;

/// The quotient `Z^n / rowspan(R)` in invariant-factor coordinates.
///
/// A formal vector `v` has coordinates `v * Q` where `P R Q = D`; only the
/// components whose invariant factor differs from one are kept.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    ngens: usize,
    /// `(transformed index, modulus)`; modulus zero marks a free summand.
    components: Vec<(usize, Int)>,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl AbelianQuotient {
    pub fn new(ngens: usize, relations: &IntMatrix) -> Result<Self, LinalgError> {
        assert_eq!(relations.ncols(), ngens);
        let snf = smith_normal_form(relations, SnfOptions::cols_only())?;
        let mut components = Vec::new();
        for i in 0..ngens {
            let d = if i < snf.rank { snf.diag[i] } else { 0 };
            if d != 1 {
                components.push((i, d));
            }
        }
        let Snf { q, q_inv, .. } = snf;
        Ok(AbelianQuotient {
            ngens,
            components,
            q: q.expect("tracked"),
            q_inv: q_inv.expect("tracked"),
        })
    }

    /// Free group on `ngens` generators.
    pub fn free(ngens: usize) -> Self {
        AbelianQuotient {
            ngens,
            components: (0..ngens).map(|i| (i, 0)).collect(),
            q: IntMatrix::identity(ngens),
            q_inv: IntMatrix::identity(ngens),
        }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Moduli of the nontrivial summands (zero for `Z`).
    pub fn invariants(&self) -> Vec<Int> {
        self.components.iter().map(|&(_, d)| d).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.components.iter().filter(|&&(_, d)| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<Int> {
        self.components.iter().map(|&(_, d)| d).filter(|&d| d != 0).collect()
    }

    /// Canonical coordinates: residues in `[0, d)` on torsion summands.
    pub fn coords(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.ngens);
        let full = self.q.left_apply(v);
        self.components
            .iter()
            .map(|&(i, d)| if d == 0 { full[i] } else { full[i].rem_euclid(d) })
            .collect()
    }

    pub fn is_zero(&self, v: &[Int]) -> bool {
        self.coords(v).iter().all(|&x| x == 0)
    }

    pub fn equal(&self, v: &[Int], w: &[Int]) -> bool {
        let diff: Vec<Int> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        self.is_zero(&diff)
    }

    /// Zero after tensoring with `Z[1/p]` for every `p` in `inverted`.
    pub fn is_zero_inverting(&self, v: &[Int], inverted: &[u64]) -> bool {
        self.residual_inverting(v, inverted).iter().all(|&x| x == 0)
    }

    /// Coordinates reduced modulo the part of each invariant factor prime
    /// to the inverted primes.
    pub fn residual_inverting(&self, v: &[Int], inverted: &[u64]) -> Vec<Int> {
        self.coords(v)
            .into_iter()
            .zip(&self.components)
            .map(|(x, &(_, d))| {
                if d == 0 {
                    x
                } else {
                    let m = strip_primes(d, inverted);
                    x.rem_euclid(m)
                }
            })
            .collect()
    }

    /// Order of the class of `v`; `None` if it has infinite order.
    pub fn order(&self, v: &[Int]) -> Option<Int> {
        let mut ord: Int = 1;
        for (x, &(_, d)) in self.coords(v).into_iter().zip(&self.components) {
            if d == 0 {
                if x != 0 {
                    return None;
                }
            } else if x != 0 {
                let g = arith::gcd(x as i64, d as i64) as Int;
                let o = d / g;
                ord = ord / arith::gcd(ord as i64, o as i64) as Int * o;
            }
        }
        Some(ord)
    }

    /// A formal vector with the given canonical coordinates.
    pub fn lift(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.components.len());
        let mut full = vec![0; self.ngens];
        for (&c, &(i, _)) in coords.iter().zip(&self.components) {
            full[i] = c;
        }
        self.q_inv.left_apply(&full)
    }

    /// Formal representative of the `k`-th nontrivial summand's generator.
    pub fn generator(&self, k: usize) -> Vec<Int> {
        self.q_inv.row(self.components[k].0).to_vec()
    }
}

/// Removes all factors of the listed primes from `d`.
pub fn strip_primes(mut d: Int, primes: &[u64]) -> Int {
    for &p in primes {
        let p = p as Int;
        while d != 0 && d % p == 0 {
            d /= p;
        }
    }
    d
}

/// A sublattice of `Z^n` spanned by the rows of `basis`, with coordinate
/// solving.
#[derive(Clone, Debug)]
pub struct Subgroup {
    basis: IntMatrix,
    snf: Snf,
}

impl Subgroup {
    pub fn new(basis: IntMatrix) -> Result<Self, LinalgError> {
        let snf = smith_normal_form(&basis, SnfOptions { p: true, q: true, ..Default::default() })?;
        Ok(Subgroup { basis, snf })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Coordinates of `v` in the spanning rows, if `v` is in the span.
    pub fn coordinates(&self, v: &[Int]) -> Result<Option<Vec<Int>>, LinalgError> {
        solve_left_with(&self.snf, v)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    pub fn embed(&self, coords: &[Int]) -> Vec<Int> {
        self.basis.left_apply(coords)
    }

    /// Whether the span equals the saturation in `Z^n` (no torsion cokernel
    /// inside its rational span).
    pub fn is_saturated(&self) -> bool {
        self.snf.diag[..self.snf.rank].iter().all(|&d| d == 1)
    }
}
