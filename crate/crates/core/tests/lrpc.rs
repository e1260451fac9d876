mod common;

use std::collections::HashSet;

use lrpc_core::lrpc::{CodeFile, LrpcCode, LrpcError};
use lrpc_core::rings::{make_ring, ChainRing, ExtElem, Tower};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tower(p: u64, r: u32, s: u32, m: usize) -> Tower {
    Tower::make(&make_ring(p, r, s).unwrap(), m).unwrap()
}

fn all_elements(t: &Tower) -> Vec<ExtElem> {
    common::all_vectors(t.base(), t.degree()).into_iter().map(|c| t.elem(c).unwrap()).collect()
}

fn words(t: &Tower, n: usize) -> Vec<Vec<ExtElem>> {
    let elems = all_elements(t);
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<ExtElem>| {
                elems.iter().map(move |e| {
                    let mut v = w.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    out
}

fn flat(w: &[ExtElem]) -> Vec<u64> {
    w.iter().flat_map(|x| x.coords().iter().map(|c| c.packed())).collect()
}

#[test]
fn code_cardinality_at_micro_scale() {
    for (p, r) in [(2, 1), (2, 2)] {
        let t = tower(p, r, 1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let code = LrpcCode::generate(&t, 3, 1, 2, &mut rng).unwrap();
        let encoded: HashSet<Vec<u64>> = all_elements(&t)
            .into_iter()
            .map(|msg| flat(&code.encode(&[msg]).unwrap()))
            .collect();
        let kernel: HashSet<Vec<u64>> = words(&t, 3)
            .into_iter()
            .filter(|w| code.syndrome(w).unwrap().iter().all(|x| t.is_zero(x)))
            .map(|w| flat(&w))
            .collect();
        let size = (p.pow(r)).pow(2) as usize;
        assert_eq!(encoded.len(), size);
        assert_eq!(kernel, encoded);
    }
}

#[test]
fn generated_codes_have_all_properties() {
    for (t, n, k, lambda) in [
        (tower(2, 2, 1, 21), 20, 8, 2),
        (tower(2, 3, 1, 12), 10, 4, 2),
        (tower(3, 2, 1, 9), 8, 3, 2),
        (tower(2, 2, 2, 7), 9, 3, 3),
        (tower(2, 1, 1, 10), 6, 3, 2),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let code = LrpcCode::generate(&t, n, k, lambda, &mut rng).unwrap();
        assert!(code.check_properties().all());
        assert_eq!(code.f()[0], t.one());
        for row in code.h_ext().rows() {
            for x in row {
                assert!(t.base().is_zero(x) || t.base().is_unit(x));
            }
        }
        for i in 0..n - k {
            for j in 0..n {
                let sum = (0..lambda).fold(t.zero(), |acc, l| {
                    t.add(&acc, &t.scale(&code.h_ext()[(i * lambda + l, j)], &code.f()[l]))
                });
                assert_eq!(sum, code.h()[(i, j)]);
            }
        }
        let msg: Vec<ExtElem> = (0..k).map(|_| t.random(&mut rng)).collect();
        let c = code.encode(&msg).unwrap();
        assert_eq!(code.message(&c).unwrap(), msg);
        assert!(code.syndrome(&c).unwrap().iter().all(|x| t.is_zero(x)));
        assert!(code.encode(&vec![t.zero(); k]).unwrap().iter().all(|x| t.is_zero(x)));
    }
}

#[test]
fn headline_parameters_give_a_valid_code() {
    let t = tower(2, 2, 4, 101);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let code = LrpcCode::generate(&t, 101, 40, 2, &mut rng).unwrap();
    assert!(code.check_properties().all());
}

#[test]
fn generation_is_reproducible() {
    let t = tower(2, 2, 1, 21);
    let a = LrpcCode::generate(&t, 20, 8, 2, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let b = LrpcCode::generate(&t, 20, 8, 2, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    assert_eq!(serde_json::to_string(&a.to_file()).unwrap(), serde_json::to_string(&b.to_file()).unwrap());
}

#[test]
fn parameter_and_input_errors() {
    let t = tower(2, 2, 1, 21);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // λ < n/(n-k)
    assert!(matches!(LrpcCode::generate(&t, 20, 14, 2, &mut rng), Err(LrpcError::Parameter(_))));
    let code = LrpcCode::generate(&t, 20, 8, 2, &mut rng).unwrap();
    let mut file: CodeFile = serde_json::from_str(&serde_json::to_string(&code.to_file()).unwrap()).unwrap();
    let back = LrpcCode::from_file(&file).unwrap();
    assert_eq!(back.generator_matrix(), code.generator_matrix());
    // an entry outside F
    let mut outside = None;
    for _ in 0..100 {
        let x = t.random_unit(&mut rng);
        let f = lrpc_core::modules::support(&t, code.f());
        if !f.contains(&t, &x) {
            outside = Some(x);
            break;
        }
    }
    file.h[0][0] = lrpc_core::lrpc::ext_to_ints(&t, &outside.unwrap());
    assert!(matches!(LrpcCode::from_file(&file), Err(LrpcError::Decomposition(0, 0))));
}
