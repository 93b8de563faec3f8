//! Sharifi's map from relative homology to symbols: pick a preimage under
//! the modified Manin map restricted to `S^0` and sum the symbols
//! `(1 - zeta^c) ^ (1 - zeta^d)`.

use std::sync::Arc;

use super::symbolic::SymbolicK2;
use crate::error::{Error, Result};
use crate::linalg::{left_kernel, Int, IntMatrix, Subgroup};
use crate::modsym::{HomElt, HomologyPresentation, ManinCoset};

/// `u_c ^ u_d` for a coset in `S^0`.
pub fn sharifi_symbol(x: &ManinCoset) -> Result<SymbolicK2> {
    if !x.in_s0() {
        return Err(Error::NotInS0 { c: x.c as i64, d: x.d as i64, level: x.level });
    }
    SymbolicK2::unit_pair(x.level, x.c, x.d)
}

/// The modified Manin map on `S^0` at one level, prepared for solving.
#[derive(Clone, Debug)]
pub struct Varpi {
    pres: Arc<HomologyPresentation>,
    cosets: Vec<ManinCoset>,
    rows: IntMatrix,
    lattice: Subgroup,
}

impl Varpi {
    pub fn new(pres: Arc<HomologyPresentation>) -> Result<Self> {
        let (cosets, rows) = pres.manin_matrix(true);
        let lattice = Subgroup::new(rows.clone())?;
        Ok(Varpi { pres, cosets, rows, lattice })
    }

    pub fn level(&self) -> u64 {
        self.pres.level()
    }

    pub fn presentation(&self) -> &Arc<HomologyPresentation> {
        &self.pres
    }

    pub fn cosets(&self) -> &[ManinCoset] {
        &self.cosets
    }

    /// Rows `xi(x)` for `x` in `S^0`.
    pub fn manin_rows(&self) -> &IntMatrix {
        &self.rows
    }

    /// Integer combination `n` of `S^0` cosets with `sum n_x xi(x) = h`.
    pub fn preimage(&self, h: &HomElt) -> Result<Vec<Int>> {
        if h.level != self.level() {
            return Err(Error::IncompatibleLevels(h.level, self.level()));
        }
        self.lattice.coordinates(&h.coords)?.ok_or(Error::NoPreimage(self.level()))
    }

    /// `sum n_x u_{c(x)} ^ u_{d(x)}`.
    pub fn symbol_of(&self, n: &[Int]) -> SymbolicK2 {
        let mut s = SymbolicK2::zero(self.level());
        for (x, &k) in self.cosets.iter().zip(n) {
            if k != 0 {
                s.add_pair(1 + x.c as usize, 1 + x.d as usize, k);
            }
        }
        s
    }

    pub fn apply(&self, h: &HomElt) -> Result<SymbolicK2> {
        Ok(self.symbol_of(&self.preimage(h)?))
    }

    /// Basis of the integer relations among the `xi(x)`, `x` in `S^0`.
    pub fn kernel_basis(&self) -> Result<IntMatrix> {
        Ok(left_kernel(&self.rows)?)
    }
}
