//! The module `Z[G x Gamma_0] / I` of crossed homomorphisms killed on cusp
//! stabilizers, built by Reidemeister-Schreier from
//! `PSL_2(Z) = <S, R | S^2, R^3>`, and its comparison with
//! `H_1(X_1(M), C_0, Z)`.
//!
//! Here `G = (Z/M)^x / +-1`, `Gamma_0 = Gamma_0(M) / +-1`, `(g, gamma)`
//! stands for `g . d(gamma)` with `d(gamma gamma') = d(gamma) + <gamma> d(gamma')`,
//! and the comparison map is `(g, gamma) -> <g> {0, gamma 0}`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::cusps::Cusp;
use super::homology::HomologyPresentation;
use super::operators::diamond_matrix;
use super::genus;
use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{AbelianQuotient, Int, IntMatrix, Subgroup};

type Mat = [i128; 4];

const S: Mat = [0, -1, 1, 0];
const R: Mat = [0, -1, 1, 1];
const LETTERS: [Mat; 2] = [S, R];

fn mul(x: Mat, y: Mat) -> Mat {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn inv(x: Mat) -> Mat {
    [x[3], -x[1], -x[2], x[0]]
}

/// `(Z/M)^x / +-1`, each class represented by its smallest member.
struct UnitsModSign {
    level: u64,
    reps: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl UnitsModSign {
    fn new(level: u64) -> Self {
        let reps: Vec<u64> = arith::units_mod(level).into_iter().filter(|&t| t <= level - t).collect();
        let index = reps.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        UnitsModSign { level, reps, index }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn class(&self, t: i128) -> usize {
        let m = self.level as i128;
        let t = t.rem_euclid(m) as u64;
        self.index[&t.min(self.level - t)]
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        self.class(self.reps[i] as i128 * self.reps[j] as i128)
    }
}

/// `Gamma_0(M)`-cosets in `PSL_2(Z)`, i.e. points of `P^1(Z/M)`.
struct P1Table {
    level: u64,
    units: Vec<u64>,
    index: HashMap<(u64, u64), usize>,
    points: Vec<(u64, u64)>,
}

impl P1Table {
    fn new(level: u64) -> Self {
        P1Table { level, units: arith::units_mod(level), index: HashMap::new(), points: Vec::new() }
    }

    fn key(&self, c: i128, d: i128) -> (u64, u64) {
        let m = self.level as i128;
        self.units
            .iter()
            .map(|&u| (((u as i128 * c).rem_euclid(m)) as u64, ((u as i128 * d).rem_euclid(m)) as u64))
            .min()
            .unwrap()
    }

    fn find(&self, c: i128, d: i128) -> Option<usize> {
        self.index.get(&self.key(c, d)).copied()
    }

    fn insert(&mut self, c: i128, d: i128) -> usize {
        let k = self.key(c, d);
        let n = self.points.len();
        *self.index.entry(k).or_insert_with(|| {
            self.points.push(k);
            n
        })
    }
}

/// Presentation data for `Gamma_0(M) / +-1` from the Schreier transversal.
struct Schreier {
    cosets: usize,
    /// Transversal matrix of each coset.
    reps: Vec<Mat>,
    /// `next[x][s]`: coset of `x * letter_s`.
    next: Vec<[usize; 2]>,
    /// Schreier generator `t_x s t_{xs}^{-1}` for each `(x, s)`.
    gens: Vec<[Mat; 2]>,
    /// Whether `(x, s)` is an edge of the spanning tree.
    tree: Vec<[bool; 2]>,
}

impl Schreier {
    fn new(level: u64) -> Self {
        let mut table = P1Table::new(level);
        let start = table.insert(0, 1);
        let mut reps: Vec<Mat> = vec![[1, 0, 0, 1]];
        let mut tree_in: Vec<Option<(usize, usize)>> = vec![None];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (s, &l) in LETTERS.iter().enumerate() {
                let m = mul(reps[x], l);
                if table.find(m[2], m[3]).is_none() {
                    let y = table.insert(m[2], m[3]);
                    reps.push(m);
                    tree_in.push(Some((x, s)));
                    queue.push_back(y);
                }
            }
        }
        let n = reps.len();
        let mut next = vec![[0; 2]; n];
        let mut gens = vec![[[0; 4]; 2]; n];
        let mut tree = vec![[false; 2]; n];
        for x in 0..n {
            for (s, &l) in LETTERS.iter().enumerate() {
                let m = mul(reps[x], l);
                let y = table.find(m[2], m[3]).expect("closed under the letters");
                next[x][s] = y;
                gens[x][s] = mul(m, inv(reps[y]));
                tree[x][s] = tree_in[y] == Some((x, s));
            }
        }
        Schreier { cosets: n, reps, next, gens, tree }
    }

    /// Rewrites a word in the letters read from coset `x` into Schreier
    /// generators `(x_i, s_i)`, returning them and the final coset.
    fn rewrite(&self, mut x: usize, word: &[usize]) -> (Vec<(usize, usize)>, usize) {
        let mut out = Vec::with_capacity(word.len());
        for &s in word {
            out.push((x, s));
            x = self.next[x][s];
        }
        (out, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop31Report {
    pub level: u64,
    pub group_order: usize,
    pub genus: u64,
    pub module_rank: usize,
    pub module_torsion: Vec<Int>,
    /// `rank H_1(X_1(M), Z) + #G - 1`.
    pub expected_rank: usize,
    pub c0_rank: usize,
    pub relations_vanish: bool,
    pub surjective: bool,
    pub pass: bool,
}

/// Builds `Z[G x Gamma_0] / I`, checks that it is free of rank
/// `rank H_1(X_1(M), Z) + #G - 1`, that `(g, gamma) -> <g> {0, gamma 0}`
/// kills `I`, and that this map is onto `H_1(X_1(M), C_0, Z)`.
pub fn prop31_check(level: u64) -> Result<Prop31Report> {
    if level <= 3 {
        return Err(Error::InvalidLevel { level, reason: "Gamma_1(M) has torsion for M <= 3" });
    }
    let m = level as i128;
    let units = UnitsModSign::new(level);
    let sch = Schreier::new(level);
    let ng = units.len();
    let col = |g: usize, x: usize, s: usize| (x * 2 + s) * ng + g;
    let ncols = sch.cosets * 2 * ng;
    let diamond_of = |x: usize, s: usize| units.class(sch.gens[x][s][3]);

    // Fox derivative of a rewritten word at g.
    let fox = |g: usize, word: &[(usize, usize)], row: &mut Vec<Int>| {
        let mut h = g;
        for &(x, s) in word {
            row[col(h, x, s)] += 1;
            h = units.mul(h, diamond_of(x, s));
        }
        h
    };

    let mut rows: Vec<Vec<Int>> = Vec::new();
    for x in 0..sch.cosets {
        for s in 0..2 {
            if sch.tree[x][s] {
                for g in 0..ng {
                    let mut row = vec![0; ncols];
                    row[col(g, x, s)] = 1;
                    rows.push(row);
                }
            }
        }
        for relator in [&[0usize, 0][..], &[1, 1, 1][..]] {
            let (word, end) = sch.rewrite(x, relator);
            debug_assert_eq!(end, x);
            for g in 0..ng {
                let mut row = vec![0; ncols];
                fox(g, &word, &mut row);
                rows.push(row);
            }
        }
    }

    // Cusp stabilizers: one coset per orbit of T = SR.
    let mut seen = vec![false; sch.cosets];
    for x0 in 0..sch.cosets {
        if seen[x0] {
            continue;
        }
        let mut word = Vec::new();
        let mut x = x0;
        loop {
            seen[x] = true;
            word.extend_from_slice(&[0, 1]);
            x = sch.next[sch.next[x][0]][1];
            if x == x0 {
                break;
            }
        }
        let (pi_word, _) = sch.rewrite(x0, &word);
        let pi_mat = word.iter().fold(sch.reps[x0], |acc, &s| mul(acc, LETTERS[s]));
        let pi_mat = mul(pi_mat, inv(sch.reps[x0]));
        let d = units.class(pi_mat[3]);
        let mut k = 1;
        let mut dk = d;
        while dk != units.class(1) {
            dk = units.mul(dk, d);
            k += 1;
        }
        for g in 0..ng {
            let mut row = vec![0; ncols];
            let mut h = g;
            for _ in 0..k {
                h = fox(h, &pi_word, &mut row);
            }
            rows.push(row);
        }
    }

    let relations = IntMatrix::from_rows(ncols, &rows);
    let module = AbelianQuotient::new(ncols, &relations)?;

    let pres = HomologyPresentation::new(level)?;
    let c0 = pres.subspace(&pres.cusps().orbit_of_zero())?;
    let diamonds: Vec<IntMatrix> =
        units.reps.iter().map(|&t| diamond_matrix(&pres, t)).collect::<Result<_>>()?;
    let mut images = vec![vec![0; pres.rank()]; ncols];
    for x in 0..sch.cosets {
        for s in 0..2 {
            let gm = sch.gens[x][s];
            if gm[2].rem_euclid(m) != 0 {
                return Err(Error::NotInGamma0 { level, detail: format!("{gm:?}") });
            }
            let f = pres.symbol(Cusp::zero(), Cusp::zero().act(gm));
            for g in 0..ng {
                images[col(g, x, s)] = diamonds[g].left_apply(&f.coords);
            }
        }
    }
    let image = IntMatrix::from_rows(pres.rank(), &images);
    let relations_vanish = relations.mul(&image).is_zero();
    let span = Subgroup::new(image)?;
    let surjective = images.iter().all(|v| c0.contains(&pres.elt(v.clone())))
        && c0.basis().iter().all(|b| span.contains(&b.coords));

    let g = genus(level);
    let expected_rank = 2 * g as usize + ng - 1;
    let module_rank = module.free_rank();
    let module_torsion = module.torsion();
    let pass = module_rank == expected_rank
        && module_torsion.is_empty()
        && module_rank == c0.dim()
        && relations_vanish
        && surjective;
    Ok(Prop31Report {
        level,
        group_order: ng,
        genus: g,
        module_rank,
        module_torsion,
        expected_rank,
        c0_rank: c0.dim(),
        relations_vanish,
        surjective,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schreier_generators_lie_in_gamma0() {
        for level in [4u64, 6, 11] {
            let sch = Schreier::new(level);
            let expect: u64 = level * arith::prime_divisors(level).iter().map(|&p| p + 1).product::<u64>()
                / arith::prime_divisors(level).iter().product::<u64>();
            assert_eq!(sch.cosets as u64, expect);
            for x in 0..sch.cosets {
                for s in 0..2 {
                    assert_eq!(sch.gens[x][s][2].rem_euclid(level as i128), 0);
                    if sch.tree[x][s] {
                        let g = sch.gens[x][s];
                        assert!(g == [1, 0, 0, 1] || g == [-1, 0, 0, -1]);
                    }
                }
            }
        }
    }

    #[test]
    fn level_five() {
        let r = prop31_check(5).unwrap();
        assert_eq!((r.group_order, r.module_rank, r.c0_rank), (2, 1, 1));
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn level_eleven() {
        let r = prop31_check(11).unwrap();
        assert_eq!((r.group_order, r.module_rank), (5, 6));
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn levels_up_to_sixteen() {
        for level in 4..=16 {
            let r = prop31_check(level).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn small_levels_rejected() {
        assert!(prop31_check(3).is_err());
    }
}
