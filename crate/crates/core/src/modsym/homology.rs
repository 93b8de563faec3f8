//! Presentation of `H_1(X_1(M), C_M, Z)` by Manin symbols, the modified
//! Manin map, boundaries, and sub-lattices with restricted cusp support.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::cosets::{CosetTable, ManinCoset};
use super::cusps::{Cusp, CuspTable};
use super::decompose::{decompose_usual, symbol_endpoints};
use crate::error::{Error, Result};
use crate::linalg::{left_kernel, AbelianQuotient, Int, IntMatrix, Subgroup};

/// A class in `H_1(X_1(M), C_M, Z)`, in the coordinates of a presentation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HomElt {
    pub level: u64,
    pub coords: Vec<Int>,
}

impl HomElt {
    pub fn zero(level: u64, rank: usize) -> Self {
        HomElt { level, coords: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: Int) -> Self {
        HomElt { level: self.level, coords: self.coords.iter().map(|x| x * k).collect() }
    }

    /// Image under an operator matrix acting on row vectors.
    pub fn apply(&self, m: &IntMatrix, target_level: u64) -> Self {
        HomElt { level: target_level, coords: m.left_apply(&self.coords) }
    }
}

impl Add for &HomElt {
    type Output = HomElt;
    fn add(self, o: &HomElt) -> HomElt {
        assert_eq!(self.level, o.level);
        HomElt { level: self.level, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &HomElt {
    type Output = HomElt;
    fn sub(self, o: &HomElt) -> HomElt {
        self + &(-o)
    }
}

impl Neg for &HomElt {
    type Output = HomElt;
    fn neg(self) -> HomElt {
        self.scale(-1)
    }
}

/// Manin-symbol presentation at level `M`.
///
/// The two-term relations `x + x sigma = 0` are solved first: each pair
/// `{x, x sigma}` contributes one generator. The three-term relations
/// `x + x tau + x tau^2 = 0` are then quotiented out with a Smith form.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    level: u64,
    cosets: CosetTable,
    cusps: CuspTable,
    /// Coset index of each generator.
    gen_cosets: Vec<usize>,
    relations: IntMatrix,
    group: AbelianQuotient,
    /// Class of the usual Manin symbol of each coset.
    coset_coords: Vec<Vec<Int>>,
    /// Each basis vector as a combination of generators.
    basis_lifts: Vec<Vec<Int>>,
    boundary: IntMatrix,
}

impl HomologyPresentation {
    pub fn new(level: u64) -> Result<Self> {
        let cosets = CosetTable::new(level)?;
        let cusps = CuspTable::new(level)?;
        let n = cosets.len();
        let mut sigma_gen = vec![(usize::MAX, 0); n];
        let mut gen_cosets = Vec::new();
        for i in 0..n {
            if sigma_gen[i].0 != usize::MAX {
                continue;
            }
            let j = cosets.position(&cosets.get(i).sigma());
            let g = gen_cosets.len();
            gen_cosets.push(i);
            sigma_gen[i] = (g, 1);
            sigma_gen[j] = (g, -1);
        }
        let ngens = gen_cosets.len();
        let mut seen = vec![false; n];
        let mut rows = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let x = cosets.get(i);
            let orbit = [i, cosets.position(&x.tau()), cosets.position(&x.tau().tau())];
            let mut row = vec![0; ngens];
            for &k in &orbit {
                seen[k] = true;
                let (g, s) = sigma_gen[k];
                row[g] += s;
            }
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
        let relations = IntMatrix::from_rows(ngens, &rows);
        let group = AbelianQuotient::new(ngens, &relations)?;
        if !group.torsion().is_empty() {
            return Err(Error::InvalidParameters(format!(
                "Manin presentation at level {level} has torsion {:?}",
                group.torsion()
            )));
        }
        let rank = group.free_rank();
        let mut gen_coords = Vec::with_capacity(ngens);
        for g in 0..ngens {
            let mut e = vec![0; ngens];
            e[g] = 1;
            gen_coords.push(group.coords(&e));
        }
        let coset_coords: Vec<Vec<Int>> = sigma_gen
            .iter()
            .map(|&(g, s)| gen_coords[g].iter().map(|x| x * s).collect())
            .collect();
        let basis_lifts: Vec<Vec<Int>> = (0..rank)
            .map(|k| {
                let mut e = vec![0; rank];
                e[k] = 1;
                group.lift(&e)
            })
            .collect();
        let mut pres = HomologyPresentation {
            level,
            cosets,
            cusps,
            gen_cosets,
            relations,
            group,
            coset_coords,
            basis_lifts,
            boundary: IntMatrix::zeros(0, 0),
        };
        pres.boundary = pres.build_boundary();
        Ok(pres)
    }

    fn build_boundary(&self) -> IntMatrix {
        let nc = self.cusps.len();
        let gen_bd: Vec<Vec<Int>> = self
            .gen_cosets
            .iter()
            .map(|&i| {
                let (from, to) = symbol_endpoints(self.cosets.get(i).lift());
                let mut v = vec![0; nc];
                v[self.cusps.class_of(&to)] += 1;
                v[self.cusps.class_of(&from)] -= 1;
                v
            })
            .collect();
        let rows: Vec<Vec<Int>> = self.basis_lifts.iter().map(|l| combine(l, &gen_bd, nc)).collect();
        IntMatrix::from_rows(nc, &rows)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.group.free_rank()
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn cusps(&self) -> &CuspTable {
        &self.cusps
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relations
    }

    /// Boundary map to `Z[C_M]`, one row per basis vector.
    pub fn boundary_matrix(&self) -> &IntMatrix {
        &self.boundary
    }

    pub fn zero(&self) -> HomElt {
        HomElt::zero(self.level, self.rank())
    }

    pub fn elt(&self, coords: Vec<Int>) -> HomElt {
        assert_eq!(coords.len(), self.rank());
        HomElt { level: self.level, coords }
    }

    pub fn basis_vector(&self, k: usize) -> HomElt {
        let mut e = vec![0; self.rank()];
        e[k] = 1;
        self.elt(e)
    }

    /// Class of the usual Manin symbol `{g 0, g oo}` of a coset.
    pub fn usual_symbol(&self, x: &ManinCoset) -> HomElt {
        self.elt(self.coset_coords[self.cosets.position(x)].clone())
    }

    /// Class of the usual Manin symbol from any integer bottom row.
    pub fn usual_symbol_of_row(&self, c: i128, d: i128) -> &[Int] {
        &self.coset_coords[self.cosets.index_of(c, d)]
    }

    /// The modular symbol `{alpha, beta}`.
    pub fn symbol(&self, alpha: Cusp, beta: Cusp) -> HomElt {
        let mut acc = vec![0; self.rank()];
        for (g, k) in decompose_usual(alpha, beta) {
            let v = self.usual_symbol_of_row(g[2], g[3]);
            for (a, b) in acc.iter_mut().zip(v) {
                *a += k as Int * b;
            }
        }
        self.elt(acc)
    }

    /// The modified Manin map: `(a b; c d) -> {-d/(Mb), -c/(Ma)}`.
    pub fn manin_map(&self, x: &ManinCoset) -> HomElt {
        let [a, b, c, d] = x.lift();
        let m = self.level as i128;
        self.symbol(Cusp::new(-d, m * b), Cusp::new(-c, m * a))
    }

    /// Rows `xi(x)` for every coset, or only those in `S^0`.
    pub fn manin_matrix(&self, s0_only: bool) -> (Vec<ManinCoset>, IntMatrix) {
        let chosen: Vec<ManinCoset> =
            self.cosets.cosets().iter().copied().filter(|x| !s0_only || x.in_s0()).collect();
        let rows: Vec<Vec<Int>> = chosen.iter().map(|x| self.manin_map(x).coords).collect();
        (chosen, IntMatrix::from_rows(self.rank(), &rows))
    }

    pub fn boundary_of(&self, h: &HomElt) -> Vec<Int> {
        self.boundary.left_apply(&h.coords)
    }

    /// The class as a combination of cosets (usual symbols).
    pub fn lift_to_cosets(&self, h: &HomElt) -> Vec<Int> {
        let gens = combine_coords(&h.coords, &self.basis_lifts, self.gen_cosets.len());
        let mut out = vec![0; self.cosets.len()];
        for (g, &k) in gens.iter().enumerate() {
            out[self.gen_cosets[g]] += k;
        }
        out
    }

    /// Matrix of the map induced by a transformation of modular symbols,
    /// from this presentation to `target`. `f` returns the image of
    /// `{alpha, beta}` as a list of weighted symbols.
    pub fn symbol_map_matrix<F>(&self, target: &HomologyPresentation, f: F) -> IntMatrix
    where
        F: Fn(Cusp, Cusp) -> Vec<(Cusp, Cusp, Int)> + Sync,
    {
        let gen_images: Vec<Vec<Int>> = crate::par::map_indexed(self.gen_cosets.len(), |g| {
            let (alpha, beta) = symbol_endpoints(self.cosets.get(self.gen_cosets[g]).lift());
            let mut acc = vec![0; target.rank()];
            for (a, b, k) in f(alpha, beta) {
                for (x, y) in acc.iter_mut().zip(target.symbol(a, b).coords) {
                    *x += k * y;
                }
            }
            acc
        });
        let rows: Vec<Vec<Int>> =
            self.basis_lifts.iter().map(|l| combine(l, &gen_images, target.rank())).collect();
        IntMatrix::from_rows(target.rank(), &rows)
    }

    /// Matrix of a map given on cosets (usual symbols), such as diamonds.
    pub fn coset_map_matrix<F>(&self, target: &HomologyPresentation, f: F) -> IntMatrix
    where
        F: Fn(&ManinCoset) -> Vec<((i128, i128), Int)>,
    {
        let gen_images: Vec<Vec<Int>> = self
            .gen_cosets
            .iter()
            .map(|&i| {
                let mut acc = vec![0; target.rank()];
                for ((c, d), k) in f(&self.cosets.get(i)) {
                    for (x, y) in acc.iter_mut().zip(target.usual_symbol_of_row(c, d)) {
                        *x += k * y;
                    }
                }
                acc
            })
            .collect();
        let rows: Vec<Vec<Int>> =
            self.basis_lifts.iter().map(|l| combine(l, &gen_images, target.rank())).collect();
        IntMatrix::from_rows(target.rank(), &rows)
    }

    /// Classes with boundary supported on the given cusp classes, as a
    /// saturated sub-lattice.
    pub fn subspace(&self, support: &[usize]) -> Result<HomologySubspace> {
        let nc = self.cusps.len();
        if let Some(&bad) = support.iter().find(|&&c| c >= nc) {
            return Err(Error::InvalidCuspSubset(format!("class {bad} out of range at level {}", self.level)));
        }
        let mut allowed = vec![false; nc];
        for &c in support {
            allowed[c] = true;
        }
        let outside: Vec<usize> = (0..nc).filter(|&c| !allowed[c]).collect();
        let restricted: Vec<Vec<Int>> = self
            .boundary
            .rows_iter()
            .map(|row| outside.iter().map(|&c| row[c]).collect())
            .collect();
        let basis = if outside.is_empty() {
            IntMatrix::identity(self.rank())
        } else {
            left_kernel(&IntMatrix::from_rows(outside.len(), &restricted))?
        };
        let mut support: Vec<usize> = support.to_vec();
        support.sort_unstable();
        support.dedup();
        Ok(HomologySubspace { level: self.level, support, lattice: Subgroup::new(basis)? })
    }

    /// `H_1(X_1(M), Z)`.
    pub fn absolute(&self) -> Result<HomologySubspace> {
        self.subspace(&[])
    }
}

fn combine(coeffs: &[Int], rows: &[Vec<Int>], width: usize) -> Vec<Int> {
    let mut out = vec![0; width];
    for (&k, row) in coeffs.iter().zip(rows) {
        if k != 0 {
            for (o, &r) in out.iter_mut().zip(row) {
                *o += k * r;
            }
        }
    }
    out
}

/// `sum_k coeffs[k] * lifts[k]`.
fn combine_coords(coeffs: &[Int], lifts: &[Vec<Int>], width: usize) -> Vec<Int> {
    combine(coeffs, lifts, width)
}

/// `H_1(X_1(M), C, Z)` inside `H_1(X_1(M), C_M, Z)`.
#[derive(Clone, Debug)]
pub struct HomologySubspace {
    level: u64,
    support: Vec<usize>,
    lattice: Subgroup,
}

impl HomologySubspace {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Subgroup {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<HomElt> {
        self.lattice
            .basis()
            .rows_iter()
            .map(|r| HomElt { level: self.level, coords: r.to_vec() })
            .collect()
    }

    pub fn contains(&self, h: &HomElt) -> bool {
        self.lattice.contains(&h.coords)
    }

    pub fn coordinates(&self, h: &HomElt) -> Option<Vec<Int>> {
        self.lattice.coordinates(&h.coords).ok().flatten()
    }
}

/// Per-level cache of presentations.
#[derive(Default)]
pub struct PresentationCache {
    inner: std::sync::Mutex<HashMap<u64, std::sync::Arc<HomologyPresentation>>>,
}

impl PresentationCache {
    pub fn get(&self, level: u64) -> Result<std::sync::Arc<HomologyPresentation>> {
        if let Some(p) = self.inner.lock().unwrap().get(&level) {
            return Ok(p.clone());
        }
        let p = std::sync::Arc::new(HomologyPresentation::new(level)?);
        Ok(self.inner.lock().unwrap().entry(level).or_insert(p).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modsym::cusps::genus;

    #[test]
    fn ranks_match_genus_and_cusps() {
        for m in 4..=24u64 {
            let p = HomologyPresentation::new(m).unwrap();
            let g = genus(m) as usize;
            assert_eq!(p.rank(), 2 * g + p.cusps().len() - 1, "level {m}");
            assert_eq!(p.absolute().unwrap().dim(), 2 * g, "level {m}");
        }
    }

    #[test]
    fn symbols_are_additive_and_invariant() {
        let p = HomologyPresentation::new(13).unwrap();
        let (a, b, c) = (Cusp::new(2, 7), Cusp::new(-5, 3), Cusp::new(1, 13));
        assert_eq!(&p.symbol(a, b) + &p.symbol(b, c), p.symbol(a, c));
        assert!(p.symbol(a, a).is_zero());
        let g = [14, 3, 13 * 5, 14];
        assert_eq!(14 * 14 - 3 * 65, 1);
        assert_eq!(p.symbol(a.act(g), b.act(g)), p.symbol(a, b));
    }

    #[test]
    fn modified_manin_map_is_surjective() {
        for m in [5u64, 8, 11, 12] {
            let p = HomologyPresentation::new(m).unwrap();
            let (_, all) = p.manin_matrix(false);
            let span = Subgroup::new(all).unwrap();
            for k in 0..p.rank() {
                assert!(span.contains(&p.basis_vector(k).coords), "level {m}");
            }
        }
    }

    #[test]
    fn s0_part_lands_in_c0_and_spans_it() {
        for m in 4..=16u64 {
            let p = HomologyPresentation::new(m).unwrap();
            let sub = p.subspace(&p.cusps().c0_upper()).unwrap();
            let (xs, rows) = p.manin_matrix(true);
            for (x, row) in xs.iter().zip(rows.rows_iter()) {
                assert!(sub.contains(&p.elt(row.to_vec())), "level {m} coset {x:?}");
            }
            let span = Subgroup::new(rows).unwrap();
            for b in sub.basis() {
                assert!(span.contains(&b.coords), "level {m}");
            }
        }
    }

    #[test]
    fn boundary_of_symbol() {
        let p = HomologyPresentation::new(9).unwrap();
        let (a, b) = (Cusp::zero(), Cusp::infinity());
        let bd = p.boundary_of(&p.symbol(a, b));
        let mut expect = vec![0; p.cusps().len()];
        expect[p.cusps().infinity()] += 1;
        expect[p.cusps().zero()] -= 1;
        assert_eq!(bd, expect);
    }

    #[test]
    fn coset_lift_round_trip() {
        let p = HomologyPresentation::new(10).unwrap();
        for k in 0..p.rank() {
            let h = p.basis_vector(k);
            let lift = p.lift_to_cosets(&h);
            let mut acc = vec![0; p.rank()];
            for (i, &n) in lift.iter().enumerate() {
                let x = p.cosets().get(i);
                for (a, b) in acc.iter_mut().zip(p.usual_symbol(&x).coords) {
                    *a += n * b;
                }
            }
            assert_eq!(acc, h.coords);
        }
    }
}
