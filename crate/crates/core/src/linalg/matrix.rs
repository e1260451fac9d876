use std::fmt;
use std::ops::{Index, IndexMut};

use crate::rings::ChainRing;

use super::LinalgError;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::Dimension { expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn zeros<C: ChainRing<Elem = E>>(ring: &C, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<C: ChainRing<Elem = E>>(ring: &C, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        // chunks_exact panics on zero width
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Dimension { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn into_rows(self) -> Vec<Vec<E>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(|c| c.to_vec()).collect()
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<E: fmt::Debug> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul<C: ChainRing>(
    ring: &C,
    a: &Matrix<C::Elem>,
    b: &Matrix<C::Elem>,
) -> Result<Matrix<C::Elem>, LinalgError> {
    if a.cols != b.rows {
        return Err(LinalgError::Dimension { expected: a.cols, got: b.rows });
    }
    let mut out = Matrix::zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = &a[(i, l)];
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let acc = ring.add(&out[(i, j)], &ring.mul(x, &b[(l, j)]));
                out[(i, j)] = acc;
            }
        }
    }
    Ok(out)
}

/// `A·x` for a column vector `x`.
pub fn mat_vec<C: ChainRing>(
    ring: &C,
    a: &Matrix<C::Elem>,
    x: &[C::Elem],
) -> Result<Vec<C::Elem>, LinalgError> {
    if a.cols != x.len() {
        return Err(LinalgError::Dimension { expected: a.cols, got: x.len() });
    }
    Ok(a.rows()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(ring.zero(), |acc, (u, v)| ring.add(&acc, &ring.mul(u, v)))
        })
        .collect())
}

/// `x·A` for a row vector `x`.
pub fn vec_mat<C: ChainRing>(
    ring: &C,
    x: &[C::Elem],
    a: &Matrix<C::Elem>,
) -> Result<Vec<C::Elem>, LinalgError> {
    if a.rows != x.len() {
        return Err(LinalgError::Dimension { expected: a.rows, got: x.len() });
    }
    let mut out = vec![ring.zero(); a.cols];
    for (xi, row) in x.iter().zip(a.rows()) {
        if ring.is_zero(xi) {
            continue;
        }
        for (o, aij) in out.iter_mut().zip(row) {
            *o = ring.add(o, &ring.mul(xi, aij));
        }
    }
    Ok(out)
}
