//! Smith normal form over the integers with optional transform tracking.
//!
//! Produces unimodular `P`, `Q` with `P * A * Q = D`, `D` diagonal and each
//! nonzero diagonal entry dividing the next.

use super::matrix::{Int, IntMatrix};
use crate::error::LinalgError;

#[derive(Clone, Copy, Debug, Default)]
pub struct SnfOptions {
    pub p: bool,
    pub p_inv: bool,
    pub q: bool,
    pub q_inv: bool,
}

impl SnfOptions {
    pub fn all() -> Self {
        SnfOptions { p: true, p_inv: true, q: true, q_inv: true }
    }

    pub fn cols_only() -> Self {
        SnfOptions { q: true, q_inv: true, ..Default::default() }
    }

    pub fn none() -> Self {
        SnfOptions::default()
    }
}

#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of `D`, length `min(rows, cols)`; zeros trail.
    pub diag: Vec<Int>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub p: Option<IntMatrix>,
    pub p_inv: Option<IntMatrix>,
    pub q: Option<IntMatrix>,
    pub q_inv: Option<IntMatrix>,
}

impl Snf {
    /// Nonzero invariant factors different from one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diag[..self.rank].iter().copied().filter(|&d| d != 1).collect()
    }

    pub fn p(&self) -> &IntMatrix {
        self.p.as_ref().expect("row transform was not tracked")
    }

    pub fn p_inv(&self) -> &IntMatrix {
        self.p_inv.as_ref().expect("inverse row transform was not tracked")
    }

    pub fn q(&self) -> &IntMatrix {
        self.q.as_ref().expect("column transform was not tracked")
    }

    pub fn q_inv(&self) -> &IntMatrix {
        self.q_inv.as_ref().expect("inverse column transform was not tracked")
    }
}

struct Work {
    a: IntMatrix,
    p: Option<IntMatrix>,
    p_inv: Option<IntMatrix>,
    q: Option<IntMatrix>,
    q_inv: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(p) = &mut self.p {
            p.swap_rows(i, j);
        }
        if let Some(pi) = &mut self.p_inv {
            pi.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(q) = &mut self.q {
            q.swap_cols(i, j);
        }
        if let Some(qi) = &mut self.q_inv {
            qi.swap_rows(i, j);
        }
    }

    /// row_i += k row_j
    fn add_row(&mut self, i: usize, j: usize, k: Int) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        self.a.add_row_multiple(i, j, k)?;
        if let Some(p) = &mut self.p {
            p.add_row_multiple(i, j, k)?;
        }
        if let Some(pi) = &mut self.p_inv {
            pi.add_col_multiple(j, i, -k)?;
        }
        Ok(())
    }

    /// col_i += k col_j
    fn add_col(&mut self, i: usize, j: usize, k: Int) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        self.a.add_col_multiple(i, j, k)?;
        if let Some(q) = &mut self.q {
            q.add_col_multiple(i, j, k)?;
        }
        if let Some(qi) = &mut self.q_inv {
            qi.add_row_multiple(j, i, -k)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(p) = &mut self.p {
            p.negate_row(i);
        }
        if let Some(pi) = &mut self.p_inv {
            pi.negate_col(i);
        }
    }
}

/// Computes the Smith normal form of `a`.
pub fn smith_normal_form(a: &IntMatrix, opts: SnfOptions) -> Result<Snf, LinalgError> {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut w = Work {
        a: a.clone(),
        p: opts.p.then(|| IntMatrix::identity(rows)),
        p_inv: opts.p_inv.then(|| IntMatrix::identity(rows)),
        q: opts.q.then(|| IntMatrix::identity(cols)),
        q_inv: opts.q_inv.then(|| IntMatrix::identity(cols)),
    };
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize, Int)> = None;
        for i in t..rows {
            for (j, &x) in w.a.row(i)[t..].iter().enumerate() {
                if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                    best = Some((i, j + t, x.abs()));
                    if x.abs() == 1 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 1))) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            // Clear column t.
            loop {
                let piv = w.a[(t, t)];
                let mut smallest: Option<(usize, Int)> = None;
                for i in t + 1..rows {
                    let x = w.a[(i, t)];
                    if x != 0 {
                        let qt = x.div_euclid(piv);
                        w.add_row(i, t, -qt)?;
                        let r = w.a[(i, t)];
                        if r != 0 && smallest.is_none_or(|(_, s)| r.abs() < s) {
                            smallest = Some((i, r.abs()));
                        }
                    }
                }
                match smallest {
                    Some((i, _)) => {
                        w.swap_rows(t, i);
                        dirty = true;
                    }
                    None => break,
                }
            }
            // Clear row t.
            loop {
                let piv = w.a[(t, t)];
                let mut smallest: Option<(usize, Int)> = None;
                for j in t + 1..cols {
                    let x = w.a[(t, j)];
                    if x != 0 {
                        let qt = x.div_euclid(piv);
                        w.add_col(j, t, -qt)?;
                        let r = w.a[(t, j)];
                        if r != 0 && smallest.is_none_or(|(_, s)| r.abs() < s) {
                            smallest = Some((j, r.abs()));
                        }
                    }
                }
                match smallest {
                    Some((j, _)) => {
                        w.swap_cols(t, j);
                        dirty = true;
                    }
                    None => break,
                }
            }
            if dirty && (t + 1..rows).any(|i| w.a[(i, t)] != 0) {
                continue;
            }
            // Divisibility condition on the trailing block.
            let piv = w.a[(t, t)];
            let offender = if piv.abs() == 1 {
                None
            } else {
                (t + 1..rows).find(|&i| w.a.row(i)[t + 1..].iter().any(|&x| x % piv != 0))
            };
            match offender {
                Some(i) => {
                    w.add_row(t, i, 1)?;
                }
                None => break,
            }
        }
        if w.a[(t, t)] < 0 {
            w.negate_row(t);
        }
        rank = t + 1;
    }
    let diag = (0..n).map(|i| w.a[(i, i)]).collect();
    Ok(Snf { diag, rank, rows, cols, p: w.p, p_inv: w.p_inv, q: w.q, q_inv: w.q_inv })
}

/// Basis (as rows) of the saturated left kernel `{x : x A = 0}`.
pub fn left_kernel(a: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let snf = smith_normal_form(a, SnfOptions { p: true, ..Default::default() })?;
    let idx: Vec<usize> = (snf.rank..a.nrows()).collect();
    Ok(snf.p().select_rows(&idx))
}

/// Solves `x A = b` over the integers, returning one solution if any exists.
pub fn solve_left(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, LinalgError> {
    let snf = smith_normal_form(a, SnfOptions { p: true, q: true, ..Default::default() })?;
    solve_left_with(&snf, b)
}

/// Same as [`solve_left`] with a precomputed form (needs `P` and `Q`).
pub fn solve_left_with(snf: &Snf, b: &[Int]) -> Result<Option<Vec<Int>>, LinalgError> {
    assert_eq!(b.len(), snf.cols);
    let bq = snf.q().left_apply(b);
    let mut y = vec![0; snf.rows];
    for (i, &v) in bq.iter().enumerate() {
        if i < snf.rank {
            let d = snf.diag[i];
            if v % d != 0 {
                return Ok(None);
            }
            y[i] = v / d;
        } else if v != 0 {
            return Ok(None);
        }
    }
    Ok(Some(snf.p().left_apply(&y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_form(a: &IntMatrix) {
        let s = smith_normal_form(a, SnfOptions::all()).unwrap();
        let d = s.p().mul(a).mul(s.q());
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if i != j {
                    assert_eq!(d[(i, j)], 0);
                } else {
                    assert_eq!(d[(i, i)], s.diag[i]);
                }
            }
        }
        for w in s.diag[..s.rank].windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {:?}", s.diag);
        }
        assert_eq!(s.p().mul(s.p_inv()), IntMatrix::identity(a.nrows()));
        assert_eq!(s.q().mul(s.q_inv()), IntMatrix::identity(a.ncols()));
    }

    #[test]
    fn small_examples() {
        let a = IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a, SnfOptions::none()).unwrap();
        assert_eq!(s.diag, vec![2, 6, 12]);
        check_form(&a);

        let b = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&b, SnfOptions::none()).unwrap();
        assert_eq!(s.diag, vec![1, 6]);
        check_form(&b);
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_rows(2, &[vec![1, 2], vec![2, 4], vec![0, 3]]);
        let k = left_kernel(&a).unwrap();
        assert_eq!(k.nrows(), 1);
        assert!(k.mul(&a).is_zero());
        let x = solve_left(&a, &[3, 9]).unwrap().unwrap();
        assert_eq!(IntMatrix::from_rows(3, std::slice::from_ref(&x)).mul(&a).row(0), &[3, 9]);
        assert!(solve_left(&IntMatrix::from_rows(1, &[vec![2]]), &[3]).unwrap().is_none());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn random_matrices_reduce(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-6i128..7, 36)) {
            let data: Vec<Vec<Int>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            check_form(&IntMatrix::from_rows(cols, &data));
        }
    }
}
