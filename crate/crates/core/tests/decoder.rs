use lrpc_core::decoder::{
    add_vectors, decode, decode_traced, diagnose, erasure_decode, f_module, DecodeOutcome, FailureReason,
};
use lrpc_core::lrpc::LrpcCode;
use lrpc_core::modules::{sample_error, sample_module, RankProfile, SubModule};
use lrpc_core::rings::{make_ring, ChainRing, ExtElem, Tower};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_code(seed: u64) -> LrpcCode {
    let t = Tower::make(&make_ring(2, 2, 1).unwrap(), 21).unwrap();
    LrpcCode::generate(&t, 20, 8, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn random_profile<G: Rng>(t: u64, rng: &mut G) -> RankProfile {
    let free = rng.gen_range(0..=t);
    RankProfile::new(vec![free, t - free])
}

fn product_condition(code: &LrpcCode, e: &SubModule) -> bool {
    let f = f_module(code);
    *e.product(code.tower(), &f).profile() == e.profile().mul(f.profile())
}

#[test]
fn planted_errors_are_recovered_by_erasure_decoding() {
    let code = small_code(1);
    let t = code.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 200 {
        let phi = random_profile(rng.gen_range(1..=6), &mut rng);
        let supp = sample_module(t, &phi, &mut rng).unwrap();
        if !product_condition(&code, &supp) {
            continue;
        }
        let e = sample_error(t, &supp, 20, &mut rng).unwrap();
        let s = code.syndrome(&e).unwrap();
        assert_eq!(erasure_decode(&code, &supp, &s).unwrap(), e);
        checked += 1;
    }
}

#[test]
fn inflated_support_still_recovers() {
    let code = small_code(3);
    let t = code.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    while checked < 100 {
        let phi = random_profile(rng.gen_range(1..=4), &mut rng);
        let supp = sample_module(t, &phi, &mut rng).unwrap();
        let mut gens = supp.basis(t);
        gens.push(t.random(&mut rng));
        let bigger = SubModule::span(t, &gens);
        if bigger.rank() == supp.rank() || !product_condition(&code, &bigger) {
            continue;
        }
        let e = sample_error(t, &supp, 20, &mut rng).unwrap();
        let s = code.syndrome(&e).unwrap();
        assert_eq!(erasure_decode(&code, &bigger, &s).unwrap(), e);
        checked += 1;
    }
}

#[test]
fn successful_decodings_are_consistent() {
    let code = small_code(5);
    let t = code.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut successes = 0;
    for _ in 0..200 {
        let supp = sample_module(t, &random_profile(2, &mut rng), &mut rng).unwrap();
        let e = sample_error(t, &supp, 20, &mut rng).unwrap();
        let c = code.random_codeword(&mut rng);
        let y = add_vectors(&code, &c, &e);
        let (outcome, trace) = decode_traced(&code, &y).unwrap();
        if let DecodeOutcome::Success { codeword, error } = &outcome {
            assert!(code.syndrome(codeword).unwrap().iter().all(|x| t.is_zero(x)));
            assert_eq!(add_vectors(&code, codeword, error), y);
            assert_eq!(*codeword, c);
            successes += 1;
        }
        let d = diagnose(&code, &e).unwrap();
        if d.all() {
            assert!(outcome.is_success());
            assert!(trace.intersection.equals(t, &supp));
        }
    }
    assert!(successes >= 195, "{successes}");
}

#[test]
fn large_errors_mostly_fail() {
    let code = small_code(7);
    let t = code.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for _ in 0..50 {
        // λt = 14 > n - k = 12
        let supp = sample_module(t, &RankProfile::new(vec![7, 0]), &mut rng).unwrap();
        let e = sample_error(t, &supp, 20, &mut rng).unwrap();
        let y = add_vectors(&code, &code.random_codeword(&mut rng), &e);
        if !decode(&code, &y).unwrap().is_success() {
            failures += 1;
        }
    }
    assert!(failures >= 45, "{failures}");
}

#[test]
fn zero_error_and_degenerate_inputs() {
    let code = small_code(9);
    let t = code.tower();
    let zero: Vec<ExtElem> = vec![t.zero(); 20];
    assert!(diagnose(&code, &zero).unwrap().all());
    assert_eq!(erasure_decode(&code, &SubModule::zero(t), &vec![t.zero(); 12]).unwrap(), zero);
    let nonzero = vec![t.one(); 12];
    assert_eq!(erasure_decode(&code, &SubModule::zero(t), &nonzero), Err(FailureReason::ErasureInconsistent));
    assert!(decode(&code, &zero[..5]).is_err());
}
