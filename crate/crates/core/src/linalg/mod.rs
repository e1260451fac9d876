//! Exact linear algebra over finite chain rings: Smith normal form, kernels,
//! linear systems and intersections of row modules.

use thiserror::Error;

use crate::rings::ChainRing;

mod matrix;
mod snf;

pub use matrix::{mat_mul, mat_vec, vec_mat, Matrix};
pub use snf::{rank_frk, snf, snf_with, Snf, SnfOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("the linear system has no solution")]
    NoSolution,
}

/// Rows of an 𝔪-shaped basis of `{x : A·x = 0}`, ordered by non-decreasing
/// valuation.
pub fn right_kernel<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>) -> Matrix<C::Elem> {
    let d = snf_with(ring, a, SnfOptions { left: false, right: true, right_inv: false });
    kernel_from_snf(ring, &d)
}

pub(crate) fn kernel_from_snf<C: ChainRing>(ring: &C, d: &Snf<C::Elem>) -> Matrix<C::Elem> {
    let t = d.t.as_ref().expect("right transform tracked");
    let r = ring.chain_length();
    let n = d.cols;
    let mut rows: Vec<Vec<C::Elem>> = (d.rank()..n).map(|k| t.column(k)).collect();
    for k in (0..d.rank()).rev() {
        let v = d.valuations[k];
        if v == 0 {
            break;
        }
        let c = ring.p_power(r - v);
        rows.push(t.column(k).iter().map(|x| ring.mul(&c, x)).collect());
    }
    Matrix::from_rows(n, rows).expect("kernel rows have full width")
}

/// One solution of `A·x = b`.
pub fn solve<C: ChainRing>(
    ring: &C,
    a: &Matrix<C::Elem>,
    b: &[C::Elem],
) -> Result<Vec<C::Elem>, LinalgError> {
    if b.len() != a.nrows() {
        return Err(LinalgError::Dimension { expected: a.nrows(), got: b.len() });
    }
    let d = snf_with(ring, a, SnfOptions { left: true, right: true, right_inv: false });
    solve_with_snf(ring, &d, b, ring.chain_length())
}

/// One solution of `A·x ≡ b (mod p^k)`, given the SNF of `A` with both
/// `S` and `T` tracked.
pub fn solve_with_snf<C: ChainRing>(
    ring: &C,
    d: &Snf<C::Elem>,
    b: &[C::Elem],
    k: u32,
) -> Result<Vec<C::Elem>, LinalgError> {
    let s = d.s.as_ref().expect("left transform tracked");
    let t = d.t.as_ref().expect("right transform tracked");
    if b.len() != d.rows {
        return Err(LinalgError::Dimension { expected: d.rows, got: b.len() });
    }
    let bp = mat_vec(ring, s, b)?;
    let mut y = vec![ring.zero(); d.cols];
    for (j, bj) in bp.iter().enumerate() {
        let vb = ring.valuation(bj).min(k);
        match d.valuations.get(j) {
            Some(&vj) => {
                if vb < vj.min(k) {
                    return Err(LinalgError::NoSolution);
                }
                if vb >= vj && vj < ring.chain_length() {
                    y[j] = ring.div_p_power(bj, vj);
                }
            }
            None => {
                if vb < k {
                    return Err(LinalgError::NoSolution);
                }
            }
        }
    }
    mat_vec(ring, t, &y)
}

/// Row module of `A` held through its SNF: basis rows `p^{v_k}·row_k(T⁻¹)`.
#[derive(Clone, Debug)]
pub struct RowModule<E> {
    pub valuations: Vec<u32>,
    /// Valuation-free generators `row_k(T⁻¹)`, one per nonzero diagonal entry.
    pub generators: Matrix<E>,
    /// Right transform `T`; `x·T` gives coordinates against the generators.
    pub t: Matrix<E>,
}

impl<E: Clone> RowModule<E> {
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }

    /// The basis rows `p^{v_k}·g_k`.
    pub fn basis<C: ChainRing<Elem = E>>(&self, ring: &C) -> Matrix<E> {
        Matrix::from_fn(self.rank(), self.generators.ncols(), |k, j| {
            ring.mul(&ring.p_power(self.valuations[k]), &self.generators[(k, j)])
        })
    }

    /// Coefficients `c` with `x = Σ c_k p^{v_k} g_k`, or `None` if `x` is not
    /// in the module. Coefficient `k` is unique modulo `p^{r-v_k}`.
    pub fn coordinates<C: ChainRing<Elem = E>>(&self, ring: &C, x: &[E]) -> Option<Vec<E>> {
        let y = vec_mat(ring, x, &self.t).ok()?;
        let mut out = Vec::with_capacity(self.rank());
        for (k, yk) in y.iter().enumerate() {
            match self.valuations.get(k) {
                Some(&v) => {
                    if ring.valuation(yk) < v {
                        return None;
                    }
                    out.push(ring.div_p_power(yk, v));
                }
                None => {
                    if !ring.is_zero(yk) {
                        return None;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn contains<C: ChainRing<Elem = E>>(&self, ring: &C, x: &[E]) -> bool {
        self.coordinates(ring, x).is_some()
    }
}

pub fn row_module<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>) -> RowModule<C::Elem> {
    let d = snf_with(ring, a, SnfOptions { left: false, right: true, right_inv: true });
    let ti = d.t_inv.expect("tracked");
    let generators = Matrix::from_fn(d.valuations.len(), a.ncols(), |k, j| ti[(k, j)].clone());
    RowModule { valuations: d.valuations, generators, t: d.t.expect("tracked") }
}

/// Rows spanning `∩ rowspace(A_i)`, computed as the annihilator of the sum
/// of the annihilators.
pub fn intersect_row_modules<C: ChainRing>(
    ring: &C,
    mats: &[&Matrix<C::Elem>],
) -> Result<Matrix<C::Elem>, LinalgError> {
    let Some(first) = mats.first() else {
        return Err(LinalgError::Dimension { expected: 1, got: 0 });
    };
    let n = first.ncols();
    let mut stacked = Matrix::zeros(ring, 0, n);
    for a in mats {
        if a.ncols() != n {
            return Err(LinalgError::Dimension { expected: n, got: a.ncols() });
        }
        stacked = stacked.vstack(&right_kernel(ring, a))?;
    }
    Ok(right_kernel(ring, &stacked))
}

/// Reduced row echelon form using unit pivots only.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub matrix: Matrix<E>,
    /// Pivot column of each of the first `pivots.len()` rows.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination that only pivots on units. The number of pivots
/// is the free rank.
pub fn rref_units<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>) -> Rref<C::Elem> {
    let mut w = a.clone();
    let (rows, cols) = (w.nrows(), w.ncols());
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows {
            break;
        }
        let Some(pr) = (next..rows).find(|&i| ring.is_unit(&w[(i, col)])) else { continue };
        w.swap_rows(next, pr);
        let inv = ring.inverse(&w[(next, col)]).expect("pivot is a unit");
        for x in w.row_mut(next).iter_mut() {
            *x = ring.mul(x, &inv);
        }
        let prow = w.row(next).to_vec();
        for i in 0..rows {
            if i == next || ring.is_zero(&w[(i, col)]) {
                continue;
            }
            let c = w[(i, col)].clone();
            for (x, y) in w.row_mut(i).iter_mut().zip(&prow) {
                if !ring.is_zero(y) {
                    *x = ring.sub_mul(x, &c, y);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    Rref { matrix: w, pivots }
}
