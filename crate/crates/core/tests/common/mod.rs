#![allow(dead_code)]

use std::collections::HashSet;

use lrpc_core::linalg::Matrix;
use lrpc_core::rings::{ChainRing, GaloisRing, RingElem};
use rand::Rng;

pub fn z4() -> GaloisRing {
    GaloisRing::integers(2, 2).unwrap()
}

pub fn z8() -> GaloisRing {
    GaloisRing::integers(2, 3).unwrap()
}

pub fn gr4_2() -> GaloisRing {
    GaloisRing::make(2, 2, 2).unwrap()
}

pub fn ints(ring: &GaloisRing, rows: &[&[u64]]) -> Matrix<RingElem> {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect()).unwrap()
}

pub fn random_matrix<G: Rng>(ring: &GaloisRing, rows: usize, cols: usize, rng: &mut G) -> Matrix<RingElem> {
    Matrix::from_fn(rows, cols, |_, _| ring.random(rng))
}

/// Random matrix whose entries have a random valuation, so that low-rank
/// and non-free cases are common.
pub fn skewed_matrix<G: Rng>(ring: &GaloisRing, rows: usize, cols: usize, rng: &mut G) -> Matrix<RingElem> {
    let r = ring.spec().r;
    Matrix::from_fn(rows, cols, |_, _| {
        let v = rng.gen_range(0..=r);
        ring.mul(&ring.p_power(v), &ring.random(rng))
    })
}

/// Every vector of length `n` over the ring.
pub fn all_vectors(ring: &GaloisRing, n: usize) -> Vec<Vec<RingElem>> {
    let elems: Vec<RingElem> = ring.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(*e);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn apply(ring: &GaloisRing, a: &Matrix<RingElem>, x: &[RingElem]) -> Vec<RingElem> {
    (0..a.nrows())
        .map(|i| a.row(i).iter().zip(x).fold(ring.zero(), |acc, (u, v)| ring.add(&acc, &ring.mul(u, v))))
        .collect()
}

pub fn key(v: &[RingElem]) -> Vec<u64> {
    v.iter().map(|e| e.packed()).collect()
}

/// `{x : A·x = b}` by enumeration.
pub fn brute_solutions(ring: &GaloisRing, a: &Matrix<RingElem>, b: &[RingElem]) -> HashSet<Vec<u64>> {
    all_vectors(ring, a.ncols()).into_iter().filter(|x| apply(ring, a, x) == b).map(|x| key(&x)).collect()
}

/// The set of all `R`-linear combinations of the rows.
pub fn span_set(ring: &GaloisRing, rows: &Matrix<RingElem>) -> HashSet<Vec<u64>> {
    let n = rows.ncols();
    let elems: Vec<RingElem> = ring.elements().collect();
    let mut set: HashSet<Vec<RingElem>> = HashSet::from([vec![ring.zero(); n]]);
    for g in rows.rows() {
        let mut next = HashSet::new();
        for v in &set {
            for c in &elems {
                let w: Vec<RingElem> = v.iter().zip(g).map(|(x, y)| ring.add(x, &ring.mul(c, y))).collect();
                next.insert(w);
            }
        }
        set = next;
    }
    set.into_iter().map(|v| key(&v)).collect()
}

/// Number of `a×b` matrices of free rank `a`, by enumeration.
pub fn count_full_free_rank(ring: &GaloisRing, a: usize, b: usize) -> u64 {
    use lrpc_core::linalg::rank_frk;
    let vecs = all_vectors(ring, a * b);
    vecs.iter()
        .filter(|v| {
            let m = Matrix::from_fn(a, b, |i, j| v[i * b + j]);
            rank_frk(ring, &m).1 == a
        })
        .count() as u64
}
