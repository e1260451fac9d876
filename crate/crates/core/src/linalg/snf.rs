use crate::rings::ChainRing;

use super::Matrix;

/// Which transforms [`snf_with`] should track.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnfOptions {
    pub left: bool,
    pub right: bool,
    pub right_inv: bool,
}

impl SnfOptions {
    pub const ALL: SnfOptions = SnfOptions { left: true, right: true, right_inv: true };
    pub const NONE: SnfOptions = SnfOptions { left: false, right: false, right_inv: false };
}

/// `S·A·T = D` with `D` diagonal, `D_kk = p^{valuations[k]}` for
/// `k < rank` and zero afterwards.
#[derive(Clone, Debug)]
pub struct Snf<E> {
    pub rows: usize,
    pub cols: usize,
    /// Non-decreasing valuations of the nonzero diagonal entries.
    pub valuations: Vec<u32>,
    pub s: Option<Matrix<E>>,
    pub t: Option<Matrix<E>>,
    pub t_inv: Option<Matrix<E>>,
}

impl<E: Clone> Snf<E> {
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }

    pub fn free_rank(&self) -> usize {
        self.valuations.iter().take_while(|&&v| v == 0).count()
    }

    /// The `rows × cols` diagonal matrix.
    pub fn d<C: ChainRing<Elem = E>>(&self, ring: &C) -> Matrix<E> {
        let mut d = Matrix::zeros(ring, self.rows, self.cols);
        for (k, &v) in self.valuations.iter().enumerate() {
            d[(k, k)] = ring.p_power(v);
        }
        d
    }

    /// Diagonal counts per valuation, `r` entries.
    pub fn profile_counts(&self, r: u32) -> Vec<usize> {
        let mut c = vec![0; r as usize];
        for &v in &self.valuations {
            c[v as usize] += 1;
        }
        c
    }
}

pub fn snf<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>) -> Snf<C::Elem> {
    snf_with(ring, a, SnfOptions::ALL)
}

pub fn rank_frk<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>) -> (usize, usize) {
    let d = snf_with(ring, a, SnfOptions::NONE);
    (d.rank(), d.free_rank())
}

pub fn snf_with<C: ChainRing>(ring: &C, a: &Matrix<C::Elem>, opts: SnfOptions) -> Snf<C::Elem> {
    let (rows, cols) = (a.nrows(), a.ncols());
    let r = ring.chain_length();
    let mut w = a.clone();
    let mut s = opts.left.then(|| Matrix::identity(ring, rows));
    let mut t = opts.right.then(|| Matrix::identity(ring, cols));
    let mut t_inv = opts.right_inv.then(|| Matrix::identity(ring, cols));
    let mut valuations = Vec::new();
    let mut floor = 0u32;

    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for i in k..rows {
            for j in k..cols {
                let v = ring.valuation(&w[(i, j)]);
                if v < r && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == floor {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        floor = v;
        valuations.push(v);

        w.swap_rows(k, pi);
        if let Some(s) = s.as_mut() {
            s.swap_rows(k, pi);
        }
        w.swap_cols(k, pj);
        if let Some(t) = t.as_mut() {
            t.swap_cols(k, pj);
        }
        if let Some(ti) = t_inv.as_mut() {
            ti.swap_rows(k, pj);
        }

        let (_, unit) = ring.unit_part(&w[(k, k)]);
        let uinv = ring.inverse(&unit).expect("unit part is a unit");
        if unit != ring.one() {
            for x in w.row_mut(k)[k..].iter_mut() {
                *x = ring.mul(x, &uinv);
            }
            if let Some(s) = s.as_mut() {
                for x in s.row_mut(k).iter_mut() {
                    *x = ring.mul(x, &uinv);
                }
            }
        }

        let pivot_row: Vec<C::Elem> = w.row(k)[k..].to_vec();
        let s_row: Option<Vec<C::Elem>> = s.as_ref().map(|s| s.row(k).to_vec());
        for i in k + 1..rows {
            if ring.is_zero(&w[(i, k)]) {
                continue;
            }
            let c = ring.div_p_power(&w[(i, k)], v);
            for (x, y) in w.row_mut(i)[k..].iter_mut().zip(&pivot_row) {
                *x = ring.sub_mul(x, &c, y);
            }
            if let (Some(s), Some(sr)) = (s.as_mut(), s_row.as_ref()) {
                for (x, y) in s.row_mut(i).iter_mut().zip(sr) {
                    *x = ring.sub_mul(x, &c, y);
                }
            }
        }

        for j in k + 1..cols {
            if ring.is_zero(&w[(k, j)]) {
                continue;
            }
            let c = ring.div_p_power(&w[(k, j)], v);
            w[(k, j)] = ring.zero();
            if let Some(t) = t.as_mut() {
                for i in 0..cols {
                    let val = ring.sub_mul(&t[(i, j)], &c, &t[(i, k)]);
                    t[(i, j)] = val;
                }
            }
            if let Some(ti) = t_inv.as_mut() {
                for l in 0..cols {
                    let val = ring.add(&ti[(k, l)], &ring.mul(&c, &ti[(j, l)]));
                    ti[(k, l)] = val;
                }
            }
        }
    }

    Snf { rows, cols, valuations, s, t, t_inv }
}
