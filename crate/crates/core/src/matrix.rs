//! Dense integer matrices with overflow-checked arithmetic.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in exact matrix arithmetic")]
pub struct Overflow;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for k in 0..size {
            m[(k, k)] = 1;
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i128]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, Overflow> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    let term = self[(r, k)].checked_mul(rhs[(k, c)]).ok_or(Overflow)?;
                    acc = acc.checked_add(term).ok_or(Overflow)?;
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128, Overflow> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&r| a[(r, k)] != 0) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[(i, j)].checked_mul(a[(k, k)]).ok_or(Overflow)?;
                    let rhs = a[(i, k)].checked_mul(a[(k, j)]).ok_or(Overflow)?;
                    a[(i, j)] = lhs.checked_sub(rhs).ok_or(Overflow)? / prev;
                }
            }
            prev = a[(k, k)];
        }
        a[(n - 1, n - 1)].checked_mul(sign).ok_or(Overflow)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += factor * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<(), Overflow> {
        for c in 0..self.cols {
            let v = self[(src, c)].checked_mul(factor).ok_or(Overflow)?;
            self[(dst, c)] = self[(dst, c)].checked_add(v).ok_or(Overflow)?;
        }
        Ok(())
    }

    /// `col[dst] += factor * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<(), Overflow> {
        for r in 0..self.rows {
            let v = self[(r, src)].checked_mul(factor).ok_or(Overflow)?;
            self[(r, dst)] = self[(r, dst)].checked_add(v).ok_or(Overflow)?;
        }
        Ok(())
    }

    pub fn negate_row(&mut self, r: usize) -> Result<(), Overflow> {
        for c in 0..self.cols {
            self[(r, c)] = self[(r, c)].checked_neg().ok_or(Overflow)?;
        }
        Ok(())
    }

    /// Submatrix on the given row and column indices.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)];
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;

    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}
