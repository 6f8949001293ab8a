//! Dense exact matrices and Kronecker-structured operators.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a small matrix from integer entries, row-major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            data: entries.iter().map(|&v| int(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(
            self.cols,
            v.len(),
            "vector length differs from column count"
        );
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.row_vecs())
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, b.len());
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = self
            .row_vecs()
            .into_iter()
            .zip(b.iter())
            .map(|(mut row, bi)| {
                row.push(bi.clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut().skip(col) {
                *v *= &inv;
            }
            let pivot = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (v, pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn rank_of_rows(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot[col];
            for (v, pv) in row[col..cols].iter_mut().zip(&pivot[col..cols]) {
                *v -= &factor * pv;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Kronecker product: entry `(ra*d + rb, ca*l + cb)` is `A[ra,ca] * B[rb,cb]`.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.rows, a.cols);
    let (d, l) = (b.rows, b.cols);
    let mut out = Matrix::zeros(n * d, m * l);
    for ra in 0..n {
        for ca in 0..m {
            let x = &a[(ra, ca)];
            if x.is_zero() {
                continue;
            }
            for rb in 0..d {
                for cb in 0..l {
                    out[(ra * d + rb, ca * l + cb)] = x * &b[(rb, cb)];
                }
            }
        }
    }
    out
}

/// `A ⊗ A ⊗ … ⊗ A` (`n` factors); the 1×1 identity when `n == 0`.
pub fn kron_power(a: &Matrix, n: usize) -> Matrix {
    (0..n).fold(Matrix::identity(1), |acc, _| kronecker(&acc, a))
}

/// A 2×2 exact block `[[a, b], [c, d]]`.
pub type Block2 = [[Rational; 2]; 2];

pub fn block2(a: i64, b: i64, c: i64, d: i64) -> Block2 {
    [[int(a), int(b)], [int(c), int(d)]]
}

/// Applies `B_m ⊗ … ⊗ B_1` to `v` without forming it, where `blocks[i]` acts on
/// coordinate `i + 1` (bit `i` of the support index).
///
/// This is the Kronecker operator in canonical support order, where
/// coordinate 1 toggles fastest; cost is `m * 2^m` block applications.
pub fn apply_per_coordinate(blocks: &[Block2], v: &[Rational]) -> Vec<Rational> {
    assert_eq!(v.len(), 1usize << blocks.len(), "vector length must be 2^m");
    let mut out = v.to_vec();
    for (i, b) in blocks.iter().enumerate() {
        let bit = 1usize << i;
        for j in 0..out.len() {
            if j & bit != 0 {
                continue;
            }
            let (lo, hi) = (&out[j], &out[j | bit]);
            let new_lo = &b[0][0] * lo + &b[0][1] * hi;
            let new_hi = &b[1][0] * lo + &b[1][1] * hi;
            out[j] = new_lo;
            out[j | bit] = new_hi;
        }
    }
    out
}

/// Dense form of the per-coordinate operator, for small `m`.
pub fn per_coordinate_matrix(blocks: &[Block2]) -> Matrix {
    blocks.iter().fold(Matrix::identity(1), |acc, b| {
        let b = Matrix::from_rows(vec![b[0].to_vec(), b[1].to_vec()]);
        kronecker(&b, &acc)
    })
}
