//! Dense exact rational matrices with elimination-based solvers.
//!
//! The elimination here is plain Gauss-Jordan with exact division; over
//! arbitrary-precision rationals this produces the same exact echelon data a
//! fraction-free scheme would, at the sizes this crate works with.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{rat, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    // row-major
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Integer entries, row-major; convenient in tests.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| rat(data[i * cols + j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).fold(Rational::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Reduced row echelon form together with the row-operation matrix `t`
    /// (so that `t * self` equals the returned echelon form) and the list of
    /// pivot columns.
    pub fn rref(&self) -> Rref {
        let mut a = self.clone();
        let mut t = Matrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            t.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            a.scale_row(r, &inv);
            t.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.sub_scaled_row(i, r, &f);
                    t.sub_scaled_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            echelon: a,
            transform: t,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let rr = self.rref();
        let pivot_set: Vec<usize> = rr.pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -rr.echelon[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Vec<Vec<Rational>> {
        self.rref().pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Solve `self * x = y` exactly. On failure returns a certificate
    /// covector `z` with `z * self = 0` and `z . y != 0`.
    pub fn solve(&self, y: &[Rational]) -> Result<Vec<Rational>, Vec<Rational>> {
        assert_eq!(y.len(), self.rows, "rhs length mismatch");
        let rr = self.rref();
        let ty = rr.transform.apply(y);
        // Any echelon row that is zero but has a nonzero transformed rhs is
        // inconsistent; the corresponding row of the transform certifies it.
        for i in rr.pivots.len()..self.rows {
            if !ty[i].is_zero() {
                return Err(rr.transform.row(i));
            }
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = ty[row].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let rr = self.rref();
        if rr.pivots.len() == self.rows {
            Some(rr.transform)
        } else {
            None
        }
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..self.cols {
            let Some(p) = (c..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(c, p);
                det = -det;
            }
            det *= a[(c, c)].clone();
            let inv = a[(c, c)].recip();
            a.scale_row(c, &inv);
            for i in (c + 1)..self.rows {
                if !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.sub_scaled_row(i, c, &f);
                }
            }
        }
        det
    }

    /// Leading principal minor of order k.
    pub fn leading_minor(&self, k: usize) -> Rational {
        Matrix::from_fn(k, k, |i, j| self[(i, j)].clone()).determinant()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &Rational) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.entries[idx] = &self.entries[idx] * f;
        }
    }

    // row_i -= f * row_j
    fn sub_scaled_row(&mut self, i: usize, j: usize, f: &Rational) {
        for c in 0..self.cols {
            let v = &self.entries[j * self.cols + c] * f;
            let idx = i * self.cols + c;
            self.entries[idx] = &self.entries[idx] - v;
        }
    }
}

pub struct Rref {
    pub echelon: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The nonzero rows of the echelon form, i.e. a canonical basis of the
    /// row space.
    pub fn echelon_rows_nonzero(&self) -> Vec<Vec<Rational>> {
        (0..self.pivots.len())
            .map(|r| self.echelon.row(r))
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .map(|k| &self[(i, k)] * &rhs[(k, j)])
                .fold(Rational::zero(), |a, b| a + b)
        })
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rational::zero(), |acc, v| acc + v)
}
