//! Exhaustive checks over tiny rings, for sanity-checking a build.

use std::collections::HashSet;
use std::io::{self, Write};

use lrpc_core::bounds::nm_count;
use lrpc_core::linalg::{mat_mul, rank_frk, right_kernel, snf, solve, Matrix};
use lrpc_core::lrpc::LrpcCode;
use lrpc_core::rings::{make_ring, ChainRing, GaloisRing, RingElem, Tower};
use lrpc_core::sim::stream_rng;
use rand::Rng;

fn all_vectors(ring: &GaloisRing, n: usize) -> Vec<Vec<RingElem>> {
    let elems: Vec<RingElem> = ring.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<RingElem>| {
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

fn apply(ring: &GaloisRing, a: &Matrix<RingElem>, x: &[RingElem]) -> Vec<RingElem> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&a[(i, j)], &x[j]))))
        .collect()
}

fn ring_axioms(ring: &GaloisRing) -> bool {
    let elems: Vec<RingElem> = ring.elements().collect();
    elems.iter().all(|a| {
        elems.iter().all(|b| {
            let ok = ring.mul(a, b) == ring.mul(b, a) && ring.sub(&ring.add(a, b), b) == *a;
            ok && elems.iter().all(|c| ring.mul(a, &ring.add(b, c)) == ring.add(&ring.mul(a, b), &ring.mul(a, c)))
        }) && (!ring.is_unit(a) || ring.mul(a, &ring.inverse(a).unwrap()) == ring.one())
    })
}

fn matrix_count(ring: &GaloisRing, a: usize, b: usize) -> bool {
    let spec = ring.spec();
    let counted = all_vectors(ring, a * b)
        .iter()
        .filter(|v| rank_frk(ring, &Matrix::from_fn(a, b, |i, j| v[i * b + j])).1 == a)
        .count() as u64;
    nm_count(spec.p, spec.r, spec.s, a as u64, b as u64).is_ok_and(|c| c == counted.into())
}

fn linear_algebra<G: Rng>(ring: &GaloisRing, rng: &mut G) -> bool {
    (0..100).all(|_| {
        let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = Matrix::from_fn(rows, cols, |_, _| ring.random(rng));
        let d = snf(ring, &a);
        let (s, t) = (d.s.as_ref().unwrap(), d.t.as_ref().unwrap());
        let snf_ok = mat_mul(ring, &mat_mul(ring, s, &a).unwrap(), t).unwrap() == d.d(ring);
        let xs = all_vectors(ring, cols);
        let zeros: HashSet<Vec<RingElem>> = xs.iter().filter(|x| apply(ring, &a, x).iter().all(|y| ring.is_zero(y))).cloned().collect();
        let k = right_kernel(ring, &a);
        let spanned: HashSet<Vec<RingElem>> = all_vectors(ring, k.nrows())
            .iter()
            .map(|c| (0..cols).map(|j| (0..k.nrows()).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&c[i], &k[(i, j)])))).collect())
            .collect();
        let b: Vec<RingElem> = (0..rows).map(|_| ring.random(rng)).collect();
        let solvable = xs.iter().any(|x| apply(ring, &a, x) == b);
        let solve_ok = match solve(ring, &a, &b) {
            Ok(x) => apply(ring, &a, &x) == b,
            Err(_) => !solvable,
        };
        snf_ok && zeros == spanned && solve_ok
    })
}

fn tiny_code(seed: u64) -> bool {
    let tower = Tower::make(&make_ring(2, 2, 1).unwrap(), 2).unwrap();
    let Ok(code) = LrpcCode::generate(&tower, 3, 1, 2, &mut stream_rng(seed, 2)) else { return false };
    let elems: Vec<_> = all_vectors(tower.base(), 2).into_iter().map(|c| tower.elem(c).unwrap()).collect();
    let encoded: HashSet<_> = elems.iter().map(|m| code.encode(std::slice::from_ref(m)).unwrap()).collect();
    let mut kernel = HashSet::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                let w = vec![a.clone(), b.clone(), c.clone()];
                if code.syndrome(&w).unwrap().iter().all(|x| tower.is_zero(x)) {
                    kernel.insert(w);
                }
            }
        }
    }
    encoded.len() == 16 && encoded == kernel
}

/// Runs every check, printing one line each. Returns the failure count.
pub fn run(seed: u64, out: &mut dyn Write) -> io::Result<usize> {
    let z4 = GaloisRing::integers(2, 2).unwrap();
    let gr = GaloisRing::make(2, 2, 2).unwrap();
    let mut rng = stream_rng(seed, 3);
    let checks = [
        ("ring axioms over Z_4", ring_axioms(&z4)),
        ("ring axioms over GR(4,2)", ring_axioms(&gr)),
        ("matrix count 1x2 over Z_4", matrix_count(&z4, 1, 2)),
        ("matrix count 2x3 over Z_4", matrix_count(&z4, 2, 3)),
        ("matrix count 1x2 over GR(4,2)", matrix_count(&gr, 1, 2)),
        ("snf, kernel and solve over Z_4", linear_algebra(&z4, &mut rng)),
        ("code equals parity-check kernel", tiny_code(seed)),
    ];
    let mut failed = 0;
    for (name, ok) in checks {
        writeln!(out, "{} {name}", if ok { "ok  " } else { "FAIL" })?;
        failed += usize::from(!ok);
    }
    Ok(failed)
}
