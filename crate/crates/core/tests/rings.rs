mod common;

use lrpc_core::rings::{make_ring, ChainRing, ExtElem, GaloisRing, RingElem, Tower};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn test_rings() -> Vec<GaloisRing> {
    vec![
        GaloisRing::integers(2, 3).unwrap(),
        GaloisRing::integers(3, 2).unwrap(),
        GaloisRing::integers(2, 40).unwrap(),
        GaloisRing::integers(1_000_003, 2).unwrap(),
        GaloisRing::make(2, 2, 2).unwrap(),
        GaloisRing::make(2, 3, 3).unwrap(),
        GaloisRing::make(2, 2, 4).unwrap(),
        GaloisRing::make(3, 2, 2).unwrap(),
        GaloisRing::make(5, 3, 3).unwrap(),
        GaloisRing::make(2, 5, 7).unwrap(),
    ]
}

#[test]
fn axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for ring in test_rings() {
        for _ in 0..1000 {
            let (a, b, c) = (ring.random(&mut rng), ring.random(&mut rng), ring.random(&mut rng));
            assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
            assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
            assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
            assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
            assert_eq!(ring.add(&a, &ring.zero()), a);
            assert_eq!(ring.mul(&a, &ring.one()), a);
            assert_eq!(ring.sub(&ring.add(&a, &b), &b), a);
            assert_eq!(ring.add(&a, &ring.neg(&a)), ring.zero());
            if ring.is_unit(&a) {
                assert_eq!(ring.mul(&a, &ring.inverse(&a).unwrap()), ring.one());
            } else {
                assert!(ring.inverse(&a).is_err());
            }
        }
    }
}

#[test]
fn valuation_is_multiplicative_exhaustively() {
    for ring in [GaloisRing::integers(2, 3).unwrap(), GaloisRing::make(2, 2, 2).unwrap(), GaloisRing::make(2, 3, 2).unwrap(), GaloisRing::make(3, 2, 2).unwrap()] {
        let r = ring.spec().r;
        let elems: Vec<RingElem> = ring.elements().collect();
        assert!(elems.len() <= 256);
        for a in &elems {
            for b in &elems {
                let v = ring.valuation(&ring.mul(a, b));
                assert_eq!(v, (ring.valuation(a) + ring.valuation(b)).min(r));
            }
        }
    }
}

#[test]
fn unit_counts() {
    let gr = GaloisRing::make(2, 2, 2).unwrap();
    assert_eq!(gr.elements().filter(|a| gr.is_unit(a)).count(), 12);
    let gr = GaloisRing::make(2, 3, 3).unwrap();
    assert_eq!(gr.elements().filter(|a| gr.is_unit(a)).count(), 512 - 64);
    let z = gr.eta();
    let inv = gr.elements().find(|b| gr.mul(&z, b) == gr.one()).unwrap();
    assert_eq!(gr.inverse(&z).unwrap(), inv);
}

#[test]
fn uniform_sampling_chi_square() {
    let ring = common::z8();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut counts = [0u64; 8];
    for _ in 0..80_000 {
        counts[ring.random(&mut rng).packed() as usize] += 1;
    }
    let sigma = (80_000.0f64 * 0.125 * 0.875).sqrt();
    let mut chi2 = 0.0;
    for c in counts {
        assert!((c as f64 - 10_000.0).abs() < 4.0 * sigma, "{counts:?}");
        chi2 += (c as f64 - 10_000.0).powi(2) / 10_000.0;
    }
    // 7 degrees of freedom, 0.999 quantile
    assert!(chi2 < 24.32, "{chi2}");
    for _ in 0..1000 {
        assert!([1, 3, 5, 7].contains(&ring.random_unit(&mut rng).packed()));
    }
}

#[test]
fn teichmuller_digits_lie_in_the_teichmuller_set() {
    let ring = GaloisRing::make(2, 3, 3).unwrap();
    let eta = ring.eta();
    let mut t_set: Vec<RingElem> = (0..7).map(|k| ring.pow(&eta, k)).collect();
    t_set.push(ring.zero());
    for a in ring.elements() {
        let digits = ring.teichmuller_digits(&a);
        assert!(digits.iter().all(|d| t_set.contains(d)));
        assert_eq!(ring.from_teichmuller_digits(&digits), a);
    }
}

#[test]
fn modulus_is_a_lift_dividing_the_unit_order_polynomial() {
    for (p, r, s) in [(2, 3, 3), (3, 2, 2), (2, 4, 5), (5, 2, 3)] {
        let ring = GaloisRing::new(make_ring(p, r, s).unwrap()).unwrap();
        let order = p.pow(s) - 1;
        assert_eq!(ring.pow(&ring.eta(), order), ring.one());
        for k in 1..order {
            if order % k == 0 {
                assert_ne!(ring.pow(&ring.eta(), k), ring.one());
            }
        }
    }
}

fn towers() -> Vec<Tower> {
    vec![
        Tower::make(&make_ring(2, 2, 1).unwrap(), 21).unwrap(),
        Tower::make(&make_ring(2, 2, 2).unwrap(), 3).unwrap(),
        Tower::make(&make_ring(3, 2, 1).unwrap(), 4).unwrap(),
        Tower::make(&make_ring(2, 2, 2).unwrap(), 4).unwrap(),
    ]
}

#[test]
fn tower_inverse_and_matrix_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in towers() {
        for _ in 0..100 {
            let u = t.random_unit(&mut rng);
            assert_eq!(t.mul(&u, &t.inverse(&u).unwrap()), t.one());
            assert_eq!(t.inverse(&u).unwrap(), t.inverse_by_linear_system(&u).unwrap());
            let v: Vec<ExtElem> = (0..5).map(|_| t.random(&mut rng)).collect();
            let a = t.ext_to_matrix(&v);
            assert_eq!((a.nrows(), a.ncols()), (t.degree(), 5));
            assert_eq!(t.matrix_to_ext(&a).unwrap(), v);
            let w: Vec<ExtElem> = (0..5).map(|_| t.random(&mut rng)).collect();
            let c = t.base().random(&mut rng);
            let sum: Vec<ExtElem> = v.iter().zip(&w).map(|(x, y)| t.add(x, y)).collect();
            let lhs = t.ext_to_matrix(&sum);
            let (av, aw) = (t.ext_to_matrix(&v), t.ext_to_matrix(&w));
            for i in 0..t.degree() {
                for j in 0..5 {
                    assert_eq!(lhs[(i, j)], t.base().add(&av[(i, j)], &aw[(i, j)]));
                }
            }
            let scaled: Vec<ExtElem> = v.iter().map(|x| t.scale(&c, x)).collect();
            let sa = t.ext_to_matrix(&scaled);
            for i in 0..t.degree() {
                for j in 0..5 {
                    assert_eq!(sa[(i, j)], t.base().mul(&c, &av[(i, j)]));
                }
            }
        }
        let json = serde_json::to_string(t.spec()).unwrap();
        let back = Tower::new(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.spec(), t.spec());
    }
}

proptest! {
    #[test]
    fn tower_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in towers() {
            let (a, b, c) = (t.random(&mut rng), t.random(&mut rng), t.random(&mut rng));
            prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
            prop_assert_eq!(t.mul(&a, &t.add(&b, &c)), t.add(&t.mul(&a, &b), &t.mul(&a, &c)));
            prop_assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
            let (v, u) = t.unit_part(&a);
            prop_assert_eq!(v, t.valuation(&a));
            if v < t.chain_length() {
                prop_assert!(t.is_unit(&u));
                prop_assert_eq!(t.mul(&t.p_power(v), &u), a.clone());
            }
            prop_assert_eq!(t.from_teichmuller_digits(&t.teichmuller_digits(&a)), a);
        }
    }

    #[test]
    fn base_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ring in test_rings() {
            let a = ring.random(&mut rng);
            let v = ring.valuation(&a);
            if v < ring.spec().r {
                let q = ring.div_p_power(&a, v);
                prop_assert_eq!(ring.mul(&ring.p_power(v), &q), a);
            }
            prop_assert_eq!(ring.coeffs(a).len(), ring.degree());
            prop_assert_eq!(ring.elem(&ring.coeffs(a)).unwrap(), a);
        }
    }
}
