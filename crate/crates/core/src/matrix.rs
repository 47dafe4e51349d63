//! Dense row-major matrices of field symbols and the Gaussian elimination
//! kernel shared by the decoders.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::dims(format!("{} symbols", rows * cols), data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dims(format!("{cols} symbols in row {i}"), r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Convenience constructor from raw integers; panics on ragged input.
    pub fn from_u16(rows: &[&[u16]]) -> Matrix {
        let v: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.iter().map(|&x| FieldElement(x)).collect()).collect();
        Matrix::from_rows(&v).expect("ragged matrix literal")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [FieldElement] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[FieldElement]) {
        debug_assert_eq!(values.len(), self.rows);
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Rows `rows` of `self`, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(r));
        }
        out
    }

    pub fn submatrix(&self, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for r in 0..rows {
            out.row_mut(r).copy_from_slice(&self.row(r)[..cols]);
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Element-wise sum (XOR).
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(self.shape(), other.shape()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dims(format!("{} rows", self.cols), format!("{} rows", other.rows)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(r, i)];
                if !a.is_zero() {
                    field.add_scaled(out.row_mut(r), other.row(i), a);
                }
            }
        }
        Ok(out)
    }

    pub fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    /// Indices of nonzero rows.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.row(r).iter().any(|x| !x.is_zero())).collect()
    }

    /// Adds `c * row(src)` to `row(dst)`.
    fn add_scaled_row(&mut self, field: &Field, dst: usize, src: usize, c: FieldElement) {
        debug_assert_ne!(dst, src);
        let cols = self.cols;
        let (lo, hi) = self.data.split_at_mut(dst.max(src) * cols);
        if dst < src {
            field.add_scaled(&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols], c);
        } else {
            field.add_scaled(&mut hi[..cols], &lo[src * cols..(src + 1) * cols], c);
        }
    }

    /// Reduces `self` to reduced row echelon form in place and returns the
    /// pivot columns.
    pub fn row_reduce(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = field.inv(self[(r, c)]).expect("pivot is nonzero");
            field.scale(self.row_mut(r), inv);
            for i in 0..self.rows {
                let f = self[(i, c)];
                if i != r && !f.is_zero() {
                    self.add_scaled_row(field, i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().row_reduce(field).len()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }
}

/// Solves `a * x = b` for square non-singular `a`, carrying every column of
/// `b` through the same elimination.
pub fn solve(field: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(Error::dims(format!("{n}x{n} system"), format!("{} | {}", a.shape(), b.shape())));
    }
    let w = b.cols();
    if n == 0 {
        return Ok(Matrix::zeros(0, w));
    }
    let mut aug = Matrix::zeros(n, n + w);
    for r in 0..n {
        aug.row_mut(r)[..n].copy_from_slice(a.row(r));
        aug.row_mut(r)[n..].copy_from_slice(b.row(r));
    }
    let pivots = aug.row_reduce(field);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    let mut x = Matrix::zeros(n, w);
    for r in 0..n {
        x.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
    }
    Ok(x)
}

pub fn inverse(field: &Field, a: &Matrix) -> Result<Matrix> {
    solve(field, a, &Matrix::identity(a.rows()))
}
