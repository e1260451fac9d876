//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::*;
use lrpc_core::bounds::{log2, nm_count, to_f64, total_bound, CodeParams};
use lrpc_core::decoder::{erasure_decode, f_module};
use lrpc_core::linalg::{intersect_row_modules, mat_mul, rank_frk, right_kernel, snf, solve, LinalgError, Matrix};
use lrpc_core::lrpc::LrpcCode;
use lrpc_core::modules::{sample_error, sample_module, RankProfile, SubModule};
use lrpc_core::rings::{make_ring, ChainRing, GaloisRing, RingElem, Tower};
use lrpc_core::sim::{self, wilson, SimConfig, SimReport, StopRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SMALL: CodeParams = CodeParams { p: 2, r: 2, s: 1, m: 21, n: 20, k: 8, lambda: 2 };
const HEADLINE: CodeParams = CodeParams { p: 2, r: 2, s: 4, m: 101, n: 101, k: 40, lambda: 2 };

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    check(elapsed.as_secs() < limit_s, || format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64()))
}

fn tower(p: u64, r: u32, s: u32, m: usize) -> Tower {
    Tower::make(&make_ring(p, r, s).unwrap(), m).unwrap()
}

fn headline_bounds() -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for (t, want) in [(30, -6.0), (18, -102.0), (24, -54.0)] {
        let rep = total_bound(&HEADLINE, t).map_err(|e| e.to_string())?;
        let l = log2(&rep.total_simple);
        check((l - want).abs() < 0.01, || format!("t={t}: log2 = {l:.4}, expected {want}"))?;
        got.push(format!("t={t}: {l:.3}"));
    }
    within(start.elapsed(), 1)?;
    Ok(got.join(", "))
}

fn simulation() -> SimReport {
    let mut config = SimConfig::new(SMALL, 2024);
    config.stop = StopRule {
        min_trials: 10_000,
        max_trials: 10_000,
        min_dec_fail: 0,
        min_prod_fail: 0,
        min_synd_fail: 0,
        min_inter_fail: 0,
    };
    sim::run(&config, |_| {}).expect("simulation runs")
}

fn simulation_rates(report: &SimReport) -> Outcome {
    check(report.skipped.is_empty(), || format!("skipped points: {:?}", report.skipped))?;
    check(report.points.len() == 21, || format!("{} points", report.points.len()))?;
    let mut checked_a = 0;
    for p in &report.points {
        let c = &p.counts;
        check(c.trials >= 10_000, || format!("t={} {}: {} trials", p.t, p.family.id(), c.trials))?;
        if c.synd_fail >= 50 {
            let bound = to_f64(&p.bounds.syndrome.exact).min(1.0);
            let ratio = p.rate(c.synd_fail) / bound;
            check((0.25..=4.0).contains(&ratio), || {
                format!("(a) t={} {}: syndrome rate / bound = {ratio:.3}", p.t, p.family.id())
            })?;
            checked_a += 1;
        }
        let (lo, hi) = wilson(c.dec_fail, c.trials);
        let limit = to_f64(&p.bounds.total_tight) + 1.5 * (hi - lo);
        check(p.rate(c.dec_fail) <= limit, || {
            format!("(b) t={} {}: decode rate {} > {limit}", p.t, p.family.id(), p.rate(c.dec_fail))
        })?;
    }
    for t in 1..=7 {
        let at: Vec<_> = report.points.iter().filter(|p| p.t == t).collect();
        for (name, get) in [
            ("syndrome", (|c: &sim::Counters| c.synd_fail) as fn(&sim::Counters) -> u64),
            ("decode", |c: &sim::Counters| c.dec_fail),
        ] {
            let iv: Vec<(f64, f64)> = at.iter().map(|p| wilson(get(&p.counts), p.counts.trials)).collect();
            let lo = iv.iter().map(|x| x.0).fold(f64::MIN, f64::max);
            let hi = iv.iter().map(|x| x.1).fold(f64::MAX, f64::min);
            check(lo <= hi, || format!("(c) t={t}: {name} intervals do not overlap: {iv:?}"))?;
        }
    }
    Ok(format!("21 points x 10000 trials, (a) checked at {checked_a} points"))
}

fn snf_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ring in [z4(), z8(), gr4_2()] {
        for (r, c) in [(3, 3), (4, 6), (6, 4)] {
            for k in 0..1000 {
                let a = if k % 2 == 0 { random_matrix(&ring, r, c, &mut rng) } else { skewed_matrix(&ring, r, c, &mut rng) };
                let d = snf(&ring, &a);
                let (s, t, ti) = (d.s.as_ref().unwrap(), d.t.as_ref().unwrap(), d.t_inv.as_ref().unwrap());
                let sat = mat_mul(&ring, &mat_mul(&ring, s, &a).unwrap(), t).unwrap();
                check(sat == d.d(&ring), || format!("S·A·T != D for {a:?}"))?;
                check(mat_mul(&ring, t, ti).unwrap() == Matrix::identity(&ring, c), || "T·T⁻¹ != I".into())?;
                check(rank_frk(&ring, s).1 == r, || "S not invertible".into())?;
                check(d.valuations.windows(2).all(|w| w[0] <= w[1]), || "valuations decrease".into())?;
            }
        }
    }
    let ring = z8();
    let d = snf(&ring, &ints(&ring, &[&[5, 6, 0], &[2, 1, 1], &[2, 4, 2]]));
    let diag: Vec<u64> = (0..3).map(|i| d.d(&ring)[(i, i)].packed()).collect();
    check(diag == [1, 1, 2], || format!("worked example diagonal {diag:?}"))?;
    check((d.rank(), d.free_rank()) == (3, 2), || format!("rank {} frk {}", d.rank(), d.free_rank()))?;
    within(start.elapsed(), 60)?;
    Ok("9000 matrices, worked example diag(1,1,2)".into())
}

fn linalg_oracles() -> Outcome {
    let start = Instant::now();
    let ring = z4();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shape = |rng: &mut ChaCha8Rng| (rng.gen_range(1..=4), rng.gen_range(1..=4));
    for _ in 0..200 {
        let (rows, cols) = shape(&mut rng);
        let a = skewed_matrix(&ring, rows, cols, &mut rng);
        let k = right_kernel(&ring, &a);
        check(span_set(&ring, &k) == brute_solutions(&ring, &a, &vec![ring.zero(); rows]), || {
            format!("kernel mismatch for {a:?}")
        })?;
    }
    for _ in 0..200 {
        let (rows, cols) = shape(&mut rng);
        let a = skewed_matrix(&ring, rows, cols, &mut rng);
        let b: Vec<RingElem> = if rng.gen_bool(0.5) {
            let x0: Vec<RingElem> = (0..cols).map(|_| ring.random(&mut rng)).collect();
            apply(&ring, &a, &x0)
        } else {
            (0..rows).map(|_| ring.random(&mut rng)).collect()
        };
        let oracle = brute_solutions(&ring, &a, &b);
        match solve(&ring, &a, &b) {
            Ok(x) => check(oracle.contains(&key(&x)), || format!("bad solution for {a:?}"))?,
            Err(LinalgError::NoSolution) => check(oracle.is_empty(), || format!("missed solution for {a:?}"))?,
            Err(e) => return Err(e.to_string()),
        }
    }
    for _ in 0..200 {
        let (ra, cols) = shape(&mut rng);
        let a = skewed_matrix(&ring, ra, cols, &mut rng);
        let b = skewed_matrix(&ring, rng.gen_range(1..=4), cols, &mut rng);
        let i = intersect_row_modules(&ring, &[&a, &b]).map_err(|e| e.to_string())?;
        let expected: HashSet<Vec<u64>> = span_set(&ring, &a).intersection(&span_set(&ring, &b)).cloned().collect();
        check(span_set(&ring, &i) == expected, || format!("intersection mismatch for {a:?} {b:?}"))?;
    }
    within(start.elapsed(), 120)?;
    Ok("600 instances over Z_4".into())
}

fn matrix_counts() -> Outcome {
    let start = Instant::now();
    let cases: [(GaloisRing, u32, u32, usize, usize); 3] =
        [(z4(), 2, 1, 1, 2), (z4(), 2, 1, 2, 3), (gr4_2(), 2, 2, 1, 2)];
    let mut got = Vec::new();
    for (ring, r, s, a, b) in cases {
        let counted = count_full_free_rank(&ring, a, b);
        let formula = nm_count(2, r, s, a as u64, b as u64).map_err(|e| e.to_string())?;
        check(formula == counted.into(), || format!("({a},{b}) s={s}: formula {formula}, counted {counted}"))?;
        got.push(counted.to_string());
    }
    within(start.elapsed(), 60)?;
    Ok(format!("counts {}", got.join(", ")))
}

fn erasure_exactness() -> Outcome {
    let start = Instant::now();
    let t = tower(2, 2, 1, 21);
    let code = LrpcCode::generate(&t, 20, 8, 2, &mut ChaCha8Rng::seed_from_u64(61)).map_err(|e| e.to_string())?;
    let f = f_module(&code);
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let (mut done, mut rejected) = (0, 0);
    while done < 500 {
        let rank = rng.gen_range(1..=6);
        let free = rng.gen_range(0..=rank);
        let supp = sample_module(&t, &RankProfile::new(vec![free, rank - free]), &mut rng).map_err(|e| e.to_string())?;
        if *supp.product(&t, &f).profile() != supp.profile().mul(f.profile()) {
            rejected += 1;
            continue;
        }
        let e = sample_error(&t, &supp, 20, &mut rng).map_err(|e| e.to_string())?;
        let s = code.syndrome(&e).map_err(|e| e.to_string())?;
        let got = erasure_decode(&code, &supp, &s).map_err(|r| format!("instance {done}: {r:?}"))?;
        check(got == e, || format!("instance {done}: wrong error recovered"))?;
        done += 1;
    }
    within(start.elapsed(), 300)?;
    Ok(format!("500 recovered, {rejected} supports rejected by the product condition"))
}

fn completeness(report: &SimReport) -> Outcome {
    let trials: u64 = report.points.iter().map(|p| p.counts.trials).sum();
    let violations: u64 = report.points.iter().map(|p| p.counts.completeness_violations).sum();
    check(violations == 0, || format!("{violations} violations in {trials} trials"))?;
    Ok(format!("0 violations in {trials} trials"))
}

fn random_module(t: &Tower, max_rank: u64, rng: &mut ChaCha8Rng) -> SubModule {
    let r = t.chain_length() as usize;
    let mut c = vec![0u64; r];
    for _ in 0..rng.gen_range(0..=max_rank) {
        c[rng.gen_range(0..r)] += 1;
    }
    sample_module(t, &RankProfile::new(c), rng).unwrap()
}

fn profile_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let towers = [tower(2, 2, 1, 12), tower(2, 3, 1, 10), tower(2, 2, 2, 6), tower(3, 2, 1, 8)];
    for k in 0..500 {
        let t = &towers[k % towers.len()];
        let a = random_module(t, 3, &mut rng);
        let b = random_module(t, 3, &mut rng);
        let ab = a.product(t, &b);
        check(ab.profile().leq(&a.profile().mul(b.profile())), || {
            format!("{:?}·{:?} gave {:?}", a.profile(), b.profile(), ab.profile())
        })?;
    }
    for k in 0..200 {
        let t = &towers[k % towers.len()];
        let m = random_module(t, 5, &mut rng);
        for j in 0..t.chain_length() {
            let mj = SubModule::span(t, &[t.p_power(j)]).product(t, &m);
            check(*mj.profile() == m.profile().shift(j), || format!("shift {j} of {:?}", m.profile()))?;
        }
    }
    within(start.elapsed(), 60)?;
    Ok("500 pairs, 200 modules".into())
}

fn main() {
    let t0 = Instant::now();
    let report = simulation();
    let sim_time = t0.elapsed();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "headline bounds", headline_bounds()),
        (2, "small-code simulation", simulation_rates(&report).map(|s| format!("{s}, {:.0}s", sim_time.as_secs_f64()))),
        (3, "smith normal form", snf_suite()),
        (4, "kernel/solve/intersection", linalg_oracles()),
        (5, "matrix counts", matrix_counts()),
        (6, "erasure decoding", erasure_exactness()),
        (7, "conditional completeness", completeness(&report)),
        (8, "profile algebra", profile_algebra()),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
