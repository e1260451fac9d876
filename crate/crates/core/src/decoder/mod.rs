//! The LRPC decoder: syndrome space, shifted intersections and erasure
//! decoding, plus per-condition diagnostics for simulations.

use serde::Serialize;

use crate::linalg::{self, snf_with, SnfOptions};
use crate::lrpc::{LrpcCode, LrpcError};
use crate::modules::{support, RankProfile, SubModule};
use crate::rings::{ChainRing, ExtElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FailureReason {
    /// The syndrome has no representation consistent with the support.
    ErasureInconsistent,
    /// More than one error vector with the support fits the syndrome.
    ErasureAmbiguous,
    /// The candidate codeword has a nonzero syndrome.
    VerificationFailed,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FailureReason::ErasureInconsistent => "erasure system inconsistent",
            FailureReason::ErasureAmbiguous => "erasure system ambiguous",
            FailureReason::VerificationFailed => "verification failed",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Success { codeword: Vec<ExtElem>, error: Vec<ExtElem> },
    Failure(FailureReason),
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeOutcome::Success { .. })
    }
}

/// Intermediate modules of one decoder run.
#[derive(Clone, Debug)]
pub struct DecodeTrace {
    pub syndrome: Vec<ExtElem>,
    pub syndrome_space: SubModule,
    pub intersection: SubModule,
}

/// The three conditions under which decoding provably succeeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Diagnosis {
    pub product_ok: bool,
    pub syndrome_ok: bool,
    pub intersection_ok: bool,
}

impl Diagnosis {
    pub fn all(&self) -> bool {
        self.product_ok && self.syndrome_ok && self.intersection_ok
    }
}

pub fn decode(code: &LrpcCode, received: &[ExtElem]) -> Result<DecodeOutcome, LrpcError> {
    decode_traced(code, received).map(|(o, _)| o)
}

pub fn decode_traced(
    code: &LrpcCode,
    received: &[ExtElem],
) -> Result<(DecodeOutcome, DecodeTrace), LrpcError> {
    let t = code.tower();
    let syndrome = code.syndrome(received)?;
    let syndrome_space = support(t, &syndrome);
    let intersection = shifted_intersection(code, &syndrome_space);
    let outcome = match erasure_decode(code, &intersection, &syndrome) {
        Err(reason) => DecodeOutcome::Failure(reason),
        Ok(error) => {
            let codeword: Vec<ExtElem> = received.iter().zip(&error).map(|(r, e)| t.sub(r, e)).collect();
            if code.syndrome(&codeword)?.iter().all(|x| t.is_zero(x)) {
                DecodeOutcome::Success { codeword, error }
            } else {
                DecodeOutcome::Failure(FailureReason::VerificationFailed)
            }
        }
    };
    Ok((outcome, DecodeTrace { syndrome, syndrome_space, intersection }))
}

/// `⋂_i f_i⁻¹·S`.
pub fn shifted_intersection(code: &LrpcCode, syndrome_space: &SubModule) -> SubModule {
    let t = code.tower();
    if code.lambda() == 1 || syndrome_space.is_zero() {
        return syndrome_space.scaled(t, &code.f_inv()[0]);
    }
    let shifted: Vec<SubModule> = code.f_inv().iter().map(|fi| syndrome_space.scaled(t, fi)).collect();
    let refs: Vec<&SubModule> = shifted.iter().collect();
    SubModule::intersect(t, &refs)
}

/// Recovers the error with support in `supp` and the given syndrome by
/// solving one `H_ext` system per basis element of `supp`.
pub fn erasure_decode(
    code: &LrpcCode,
    supp: &SubModule,
    syndrome: &[ExtElem],
) -> Result<Vec<ExtElem>, FailureReason> {
    let t = code.tower();
    let base = t.base();
    let r = t.chain_length();
    let (n, lambda) = (code.n(), code.lambda());
    let rows = code.h_ext().nrows();
    if supp.is_zero() {
        return if syndrome.iter().all(|x| t.is_zero(x)) {
            Ok(vec![t.zero(); n])
        } else {
            Err(FailureReason::ErasureInconsistent)
        };
    }
    let eps = supp.basis_pairs(t);
    let eps_full: Vec<ExtElem> = eps.iter().map(|(v, g)| t.scale(&base.p_power(*v), g)).collect();
    let tp = eps.len();

    // column κ·λ + l holds f_l·ε_κ
    let products: Vec<ExtElem> = eps_full
        .iter()
        .flat_map(|e| code.f().iter().map(move |f| t.mul(f, e)))
        .collect();
    let b = t.ext_to_matrix(&products);
    let b_snf = snf_with(base, &b, SnfOptions { left: true, right: true, right_inv: false });

    // rhs[κ][i·λ + l]
    let mut rhs = vec![vec![base.zero(); rows]; tp];
    for (i, si) in syndrome.iter().enumerate() {
        let c = linalg::solve_with_snf(base, &b_snf, si.coords(), r)
            .map_err(|_| FailureReason::ErasureInconsistent)?;
        for kappa in 0..tp {
            for l in 0..lambda {
                rhs[kappa][i * lambda + l] = c[kappa * lambda + l];
            }
        }
    }

    let h_snf = code.h_ext_snf();
    let mut e = vec![t.zero(); n];
    for (kappa, (v, _)) in eps.iter().enumerate() {
        let x = linalg::solve_with_snf(base, h_snf, &rhs[kappa], r - v)
            .map_err(|_| FailureReason::ErasureInconsistent)?;
        for (ej, xj) in e.iter_mut().zip(&x) {
            *ej = t.add(ej, &t.scale(xj, &eps_full[kappa]));
        }
    }
    if h_snf.free_rank() < n {
        return Err(FailureReason::ErasureAmbiguous);
    }
    Ok(e)
}

/// The free module `F` as a submodule.
pub fn f_module(code: &LrpcCode) -> SubModule {
    support(code.tower(), code.f())
}

/// Evaluates the three success conditions for a known error.
pub fn diagnose(code: &LrpcCode, error: &[ExtElem]) -> Result<Diagnosis, LrpcError> {
    let t = code.tower();
    let e_supp = support(t, error);
    let syndrome = code.syndrome(error)?;
    let s_space = support(t, &syndrome);
    let inter = shifted_intersection(code, &s_space);
    Ok(diagnose_parts(code, &e_supp, &s_space, &inter))
}

/// [`diagnose`] from already computed modules.
pub fn diagnose_parts(
    code: &LrpcCode,
    error_support: &SubModule,
    syndrome_space: &SubModule,
    intersection: &SubModule,
) -> Diagnosis {
    let t = code.tower();
    let f = f_module(code);
    let ef = error_support.product(t, &f);
    let expected: RankProfile = error_support.profile().mul(f.profile());
    Diagnosis {
        product_ok: *ef.profile() == expected,
        syndrome_ok: syndrome_space.equals(t, &ef),
        intersection_ok: intersection.equals(t, error_support),
    }
}

/// Adds `e` to `c` coordinate-wise.
pub fn add_vectors(code: &LrpcCode, c: &[ExtElem], e: &[ExtElem]) -> Vec<ExtElem> {
    let t = code.tower();
    c.iter().zip(e).map(|(a, b)| t.add(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{sample_error, sample_module};
    use crate::rings::{make_ring, Tower};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_error_and_small_errors() {
        let tower = Tower::make(&make_ring(2, 2, 1).unwrap(), 21).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let code = LrpcCode::generate(&tower, 20, 8, 2, &mut rng).unwrap();
        let c = code.random_codeword(&mut rng);
        match decode(&code, &c).unwrap() {
            DecodeOutcome::Success { codeword, error } => {
                assert_eq!(codeword, c);
                assert!(error.iter().all(|x| tower.is_zero(x)));
            }
            other => panic!("{other:?}"),
        }
        let zero_diag = diagnose(&code, &vec![tower.zero(); 20]).unwrap();
        assert!(zero_diag.all());

        let mut ok = 0;
        for _ in 0..100 {
            let supp = sample_module(&tower, &RankProfile::new(vec![2, 0]), &mut rng).unwrap();
            let e = sample_error(&tower, &supp, 20, &mut rng).unwrap();
            let y = add_vectors(&code, &c, &e);
            if let DecodeOutcome::Success { codeword, error } = decode(&code, &y).unwrap() {
                assert_eq!(codeword, c);
                assert_eq!(error, e);
                ok += 1;
            }
        }
        assert!(ok >= 99, "{ok}");
    }
}
