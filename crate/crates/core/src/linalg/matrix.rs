use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::LinalgError;

/// Integer scalar used by all exact linear algebra.
pub type Int = i128;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Int] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows: Vec<Vec<Int>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(self.cols, &rows)
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    if b == 0 {
                        continue;
                    }
                    let t = a.checked_mul(b).ok_or(LinalgError::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(t).ok_or(LinalgError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("integer overflow in matrix product")
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in vector product");
        let mut out: Vec<Int> = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                if b != 0 {
                    *o = (*o)
                        .checked_add(a.checked_mul(b).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        out
    }

    // Elementary operations; used by the Smith form and kept public for callers
    // that maintain their own transforms.

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row_i += k * row_j`
    pub fn add_row_multiple(&mut self, i: usize, j: usize, k: Int) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let b = self.data[j * self.cols + c];
            if b != 0 {
                let t = b.checked_mul(k).ok_or(LinalgError::Overflow)?;
                let a = &mut self.data[i * self.cols + c];
                *a = a.checked_add(t).ok_or(LinalgError::Overflow)?;
            }
        }
        Ok(())
    }

    /// `col_i += k * col_j`
    pub fn add_col_multiple(&mut self, i: usize, j: usize, k: Int) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        for r in 0..self.rows {
            let b = self.data[r * self.cols + j];
            if b != 0 {
                let t = b.checked_mul(k).ok_or(LinalgError::Overflow)?;
                let a = &mut self.data[r * self.cols + i];
                *a = a.checked_add(t).ok_or(LinalgError::Overflow)?;
            }
        }
        Ok(())
    }

    pub fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -*x;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + j];
            *x = -*x;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.rows_iter() {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// Rank of an integer matrix reduced modulo a prime `p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = m
        .rows_iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = crate::arith::pow_mod(a[rank][c] as u64, (p - 2) as u64, p as u64) as i128;
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..cols {
                    a[r][j] = (a[r][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
