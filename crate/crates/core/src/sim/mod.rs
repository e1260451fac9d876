//! Monte Carlo estimation of the failure rates of each success condition and
//! of the decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{bound_report_raw, to_f64, BoundReport, CodeParams};
use crate::decoder::{add_vectors, decode_traced, diagnose_parts, DecodeOutcome};
use crate::lrpc::{LrpcCode, LrpcError};
use crate::modules::{sample_error, sample_module, ModuleError, RankProfile};
use crate::rings::{make_ring, RingError, Tower};

pub const WILSON_Z: f64 = 1.959964;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Code(#[from] LrpcError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// RNG for substream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Error rank-profile families indexed by the rank `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileFamily {
    /// `φ(x) = t`
    Free,
    /// `φ(x) = t·x`
    Shifted,
    /// `φ(x) = ⌈t/2⌉ + ⌊t/2⌋·x`
    Mixed,
}

impl ProfileFamily {
    pub const ALL: [ProfileFamily; 3] = [ProfileFamily::Free, ProfileFamily::Shifted, ProfileFamily::Mixed];

    pub fn id(&self) -> &'static str {
        match self {
            ProfileFamily::Free => "phi1",
            ProfileFamily::Shifted => "phi2",
            ProfileFamily::Mixed => "phi3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.id() == s)
    }

    /// The profile of rank `t`, or `None` if the family needs `r >= 2`.
    pub fn profile(&self, r: u32, t: u64) -> Option<RankProfile> {
        match self {
            ProfileFamily::Free => Some(RankProfile::monomial(r, t, 0)),
            ProfileFamily::Shifted => (r >= 2).then(|| RankProfile::monomial(r, t, 1)),
            ProfileFamily::Mixed => (r >= 2).then(|| {
                let mut c = vec![0; r as usize];
                c[0] = t.div_ceil(2);
                c[1] = t / 2;
                RankProfile::new(c)
            }),
        }
    }
}

/// When to stop sampling a point: after `min_trials` and once every
/// counter reached its threshold, or at `max_trials` regardless.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_trials: u64,
    pub max_trials: u64,
    pub min_dec_fail: u64,
    pub min_prod_fail: u64,
    pub min_synd_fail: u64,
    pub min_inter_fail: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_trials: 0,
            max_trials: 1_000_000,
            min_dec_fail: 1000,
            min_prod_fail: 50,
            min_synd_fail: 50,
            min_inter_fail: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: CodeParams,
    pub profiles: Vec<ProfileFamily>,
    pub t_values: Vec<u64>,
    pub stop: StopRule,
    pub seed: u64,
    /// Trials per batch; batches are the unit of parallel work.
    pub batch_size: u64,
    /// Batches per round; the stop rule is checked between rounds.
    pub batches_per_round: u64,
}

impl SimConfig {
    pub fn new(params: CodeParams, seed: u64) -> Self {
        SimConfig {
            params,
            profiles: ProfileFamily::ALL.to_vec(),
            t_values: (1..=7).collect(),
            stop: StopRule::default(),
            seed,
            batch_size: 250,
            batches_per_round: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub trials: u64,
    pub prod_fail: u64,
    pub synd_fail: u64,
    pub inter_fail: u64,
    pub dec_fail: u64,
    pub wrong_cw: u64,
    /// Trials where all three conditions held but decoding failed.
    pub completeness_violations: u64,
}

impl Counters {
    fn merge(&mut self, o: &Counters) {
        self.trials += o.trials;
        self.prod_fail += o.prod_fail;
        self.synd_fail += o.synd_fail;
        self.inter_fail += o.inter_fail;
        self.dec_fail += o.dec_fail;
        self.wrong_cw += o.wrong_cw;
        self.completeness_violations += o.completeness_violations;
    }

    fn thresholds_met(&self, s: &StopRule) -> bool {
        self.trials >= s.min_trials
            && self.dec_fail >= s.min_dec_fail
            && self.prod_fail >= s.min_prod_fail
            && self.synd_fail >= s.min_synd_fail
            && self.inter_fail >= s.min_inter_fail
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let z2 = WILSON_Z * WILSON_Z;
    let ph = k / n;
    let denom = 1.0 + z2 / n;
    let center = (ph + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub t: u64,
    pub family: ProfileFamily,
    pub profile: RankProfile,
    pub counts: Counters,
    pub threshold_met: bool,
    pub bounds: BoundReport,
}

impl PointReport {
    pub fn rate(&self, failures: u64) -> f64 {
        if self.counts.trials == 0 {
            0.0
        } else {
            failures as f64 / self.counts.trials as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub config: SimConfig,
    pub points: Vec<PointReport>,
    /// Points that could not be sampled, with the reason.
    pub skipped: Vec<(u64, ProfileFamily, String)>,
}

fn run_trial(code: &LrpcCode, phi: &RankProfile, rng: &mut ChaCha8Rng) -> Result<Counters, SimError> {
    let tower = code.tower();
    let supp = sample_module(tower, phi, rng)?;
    let e = sample_error(tower, &supp, code.n(), rng)?;
    let c = code.random_codeword(rng);
    let y = add_vectors(code, &c, &e);
    let (outcome, trace) = decode_traced(code, &y)?;
    let diag = diagnose_parts(code, &supp, &trace.syndrome_space, &trace.intersection);
    let (recovered, wrong) = match &outcome {
        DecodeOutcome::Success { codeword, .. } => (*codeword == c, *codeword != c),
        DecodeOutcome::Failure(_) => (false, false),
    };
    Ok(Counters {
        trials: 1,
        prod_fail: u64::from(!diag.product_ok),
        synd_fail: u64::from(!diag.syndrome_ok),
        inter_fail: u64::from(!diag.intersection_ok),
        dec_fail: u64::from(!recovered),
        wrong_cw: u64::from(wrong),
        completeness_violations: u64::from(diag.all() && !recovered),
    })
}

fn run_batch(code: &LrpcCode, phi: &RankProfile, trials: u64, rng: &mut ChaCha8Rng) -> Result<Counters, SimError> {
    let mut acc = Counters::default();
    for _ in 0..trials {
        acc.merge(&run_trial(code, phi, rng)?);
    }
    Ok(acc)
}

/// Generates the code used by a run from the master seed.
pub fn build_code(params: &CodeParams, seed: u64) -> Result<LrpcCode, SimError> {
    let tower = Tower::make(&make_ring(params.p, params.r, params.s)?, params.m as usize)?;
    let mut rng = stream_rng(seed, 0);
    Ok(LrpcCode::generate(&tower, params.n as usize, params.k as usize, params.lambda as usize, &mut rng)?)
}

/// Runs every `(t, family)` point on a single code. Deterministic for a
/// fixed configuration, independent of the number of worker threads.
pub fn run(config: &SimConfig, mut progress: impl FnMut(&PointReport)) -> Result<SimReport, SimError> {
    let code = build_code(&config.params, config.seed)?;
    run_with_code(config, &code, &mut progress)
}

pub fn run_with_code(
    config: &SimConfig,
    code: &LrpcCode,
    mut progress: impl FnMut(&PointReport),
) -> Result<SimReport, SimError> {
    let params = &config.params;
    let stop = &config.stop;
    let batch = config.batch_size.max(1);
    let per_round = config.batches_per_round.max(1);
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut point_idx = 0u64;
    for &t in &config.t_values {
        for &family in &config.profiles {
            point_idx += 1;
            let Some(phi) = family.profile(params.r, t) else {
                skipped.push((t, family, "profile needs r >= 2".into()));
                continue;
            };
            let limit = params.m.min(params.n);
            if phi.rank() > limit {
                skipped.push((t, family, format!("rank {} exceeds min(m, n) = {limit}", phi.rank())));
                continue;
            }
            let mut counts = Counters::default();
            let mut next_batch = 0u64;
            loop {
                if counts.thresholds_met(stop) || counts.trials >= stop.max_trials {
                    break;
                }
                let remaining = stop.max_trials - counts.trials;
                let jobs: Vec<(u64, u64)> = (0..per_round)
                    .map(|b| {
                        let start = b * batch;
                        (next_batch + b, batch.min(remaining.saturating_sub(start)))
                    })
                    .filter(|&(_, n)| n > 0)
                    .collect();
                next_batch += per_round;
                let results: Vec<Result<Counters, SimError>> = jobs
                    .par_iter()
                    .map(|&(b, n)| {
                        let mut rng = stream_rng(config.seed, (point_idx << 32) | b);
                        run_batch(code, &phi, n, &mut rng)
                    })
                    .collect();
                for r in results {
                    counts.merge(&r?);
                }
            }
            let report = PointReport {
                t,
                family,
                profile: phi,
                threshold_met: counts.thresholds_met(stop),
                counts,
                bounds: bound_report_raw(params, t),
            };
            progress(&report);
            points.push(report);
        }
    }
    Ok(SimReport { config: config.clone(), points, skipped })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    p: u64,
    r: u32,
    s: u32,
    m: u64,
    n: u64,
    k: u64,
    lambda: u64,
    profile_id: &'a str,
    t: u64,
    trials: u64,
    prod_fail: u64,
    synd_fail: u64,
    inter_fail: u64,
    dec_fail: u64,
    wrong_cw: u64,
    rate_prod: f64,
    rate_synd: f64,
    rate_inter: f64,
    rate_dec: f64,
    ci_lo_prod: f64,
    ci_hi_prod: f64,
    ci_lo_synd: f64,
    ci_hi_synd: f64,
    ci_lo_inter: f64,
    ci_hi_inter: f64,
    ci_lo_dec: f64,
    ci_hi_dec: f64,
    bound_prod: f64,
    bound_synd: f64,
    bound_inter: f64,
    bound_dec: f64,
    threshold_met: bool,
    feasible: bool,
}

/// CSV with one row per `(t, profile)` point.
pub fn write_csv<W: std::io::Write>(report: &SimReport, out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    let c = &report.config.params;
    for pt in &report.points {
        let n = pt.counts.trials;
        let ci = |k| wilson(k, n);
        let (pl, ph) = ci(pt.counts.prod_fail);
        let (sl, sh) = ci(pt.counts.synd_fail);
        let (il, ih) = ci(pt.counts.inter_fail);
        let (dl, dh) = ci(pt.counts.dec_fail);
        let b = &pt.bounds;
        w.serialize(CsvRow {
            p: c.p,
            r: c.r,
            s: c.s,
            m: c.m,
            n: c.n,
            k: c.k,
            lambda: c.lambda,
            profile_id: pt.family.id(),
            t: pt.t,
            trials: n,
            prod_fail: pt.counts.prod_fail,
            synd_fail: pt.counts.synd_fail,
            inter_fail: pt.counts.inter_fail,
            dec_fail: pt.counts.dec_fail,
            wrong_cw: pt.counts.wrong_cw,
            rate_prod: pt.rate(pt.counts.prod_fail),
            rate_synd: pt.rate(pt.counts.synd_fail),
            rate_inter: pt.rate(pt.counts.inter_fail),
            rate_dec: pt.rate(pt.counts.dec_fail),
            ci_lo_prod: pl,
            ci_hi_prod: ph,
            ci_lo_synd: sl,
            ci_hi_synd: sh,
            ci_lo_inter: il,
            ci_hi_inter: ih,
            ci_lo_dec: dl,
            ci_hi_dec: dh,
            bound_prod: to_f64(&b.product.exact).min(1.0),
            bound_synd: to_f64(&b.syndrome.exact).min(1.0),
            bound_inter: to_f64(&b.intersection.exact).min(1.0),
            bound_dec: to_f64(&b.total_tight).min(1.0),
            threshold_met: pt.threshold_met,
            feasible: b.feasible,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval() {
        let (lo, hi) = wilson(50, 1000);
        assert!((lo - 0.0381).abs() < 1e-3 && (hi - 0.0653).abs() < 1e-3, "{lo} {hi}");
        assert_eq!(wilson(0, 0), (0.0, 1.0));
    }

    #[test]
    fn mixed_table() {
        let labels: Vec<String> =
            (1..=7).map(|t| ProfileFamily::Mixed.profile(2, t).unwrap().label()).collect();
        assert_eq!(labels, ["1", "1+x", "2+x", "2+2x", "3+2x", "3+3x", "4+3x"]);
        assert!(ProfileFamily::Shifted.profile(1, 3).is_none());
    }

    #[test]
    fn deterministic_small_run() {
        let params = CodeParams { p: 2, r: 2, s: 1, m: 21, n: 20, k: 8, lambda: 2 };
        let mut cfg = SimConfig::new(params, 11);
        cfg.t_values = vec![0, 3];
        cfg.stop = StopRule { min_trials: 40, max_trials: 40, min_dec_fail: 0, min_prod_fail: 0, min_synd_fail: 0, min_inter_fail: 0 };
        cfg.batch_size = 10;
        let a = run(&cfg, |_| {}).unwrap();
        let b = run(&cfg, |_| {}).unwrap();
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        write_csv(&a, &mut ca).unwrap();
        write_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        for pt in &a.points {
            assert_eq!(pt.counts.trials, 40);
            assert_eq!(pt.counts.completeness_violations, 0);
            if pt.t == 0 {
                assert_eq!(pt.counts.dec_fail, 0);
            }
        }
    }
}
