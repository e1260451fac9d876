use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lrpc_core::bounds::{bound_report_raw, log2, to_f64, CodeParams};
use lrpc_core::decoder::{add_vectors, decode, DecodeOutcome};
use lrpc_core::lrpc::{ext_from_ints, ext_to_ints, CodeFile, LrpcCode, LrpcError};
use lrpc_core::modules::{sample_error, sample_module};
use lrpc_core::rings::{ChainRing, ExtElem, Tower};
use lrpc_core::sim::{self, stream_rng, ProfileFamily, SimConfig, SimError, StopRule};
use serde::Serialize;

mod selftest;

#[derive(Parser, Debug)]
#[command(name = "lrpc", version, about = "LRPC codes over Galois rings")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random code and write it as JSON.
    GenCode(ParamArgs),
    /// Encode a message of k elements.
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        msg: PathBuf,
    },
    /// Add a random error of rank t to a word.
    Corrupt {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        t: u64,
        /// Rank-profile family: phi1, phi2 or phi3.
        #[arg(long, default_value = "phi1")]
        profile: String,
    },
    /// Decode a received word and print the codeword.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        /// Print the message instead of the codeword.
        #[arg(long)]
        message: bool,
    },
    /// Failure-probability bounds as CSV.
    Bounds {
        #[arg(long)]
        code: Option<PathBuf>,
        #[command(flatten)]
        params: OptParamArgs,
        /// Error ranks, e.g. `1..7`, `3` or `1,4,9`.
        #[arg(long, default_value = "1..7")]
        t: String,
    },
    /// Monte Carlo failure rates as CSV.
    Simulate {
        #[arg(long)]
        code: Option<PathBuf>,
        #[command(flatten)]
        params: OptParamArgs,
        #[arg(long, default_value = "1..7")]
        t: String,
        /// Comma-separated profile families.
        #[arg(long, default_value = "phi1,phi2,phi3")]
        profiles: String,
        #[arg(long, default_value_t = 0)]
        min_trials: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_trials: u64,
        #[arg(long, default_value_t = 1000)]
        min_dec_fail: u64,
        #[arg(long, default_value_t = 50)]
        min_cond_fail: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Brute-force oracle checks over tiny rings.
    Selftest,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
struct ParamArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    lambda: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct OptParamArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
}

impl From<ParamArgs> for CodeParams {
    fn from(a: ParamArgs) -> Self {
        CodeParams { p: a.p, r: a.r, s: a.s, m: a.m, n: a.n, k: a.k, lambda: a.lambda }
    }
}

enum Failure {
    Usage(String),
    /// Construction failed or nothing feasible was run.
    Infeasible(String),
    Decoding(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<LrpcError> for Failure {
    fn from(e: LrpcError) -> Self {
        match e {
            LrpcError::ConstructionFailure(_) => Failure::Infeasible(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Code(e) => e.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    eprintln!("{cli:?}");
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Decoding(msg)) => {
            eprintln!("decoding failed: {msg}");
            ExitCode::from(3)
        }
    }
}

fn output(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_code(path: &Path) -> Result<LrpcCode, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let file: CodeFile =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(LrpcCode::from_file(&file)?)
}

fn code_params(code: &LrpcCode) -> CodeParams {
    let spec = code.tower().spec();
    CodeParams {
        p: spec.base.p,
        r: spec.base.r,
        s: spec.base.s,
        m: spec.m as u64,
        n: code.n() as u64,
        k: code.k() as u64,
        lambda: code.lambda() as u64,
    }
}

fn resolve_params(code: &Option<PathBuf>, a: &OptParamArgs) -> Result<(CodeParams, Option<LrpcCode>), Failure> {
    if let Some(path) = code {
        let c = load_code(path)?;
        return Ok((code_params(&c), Some(c)));
    }
    let need = |name: &str, v: Option<u64>| v.ok_or_else(|| Failure::Usage(format!("--{name} or --code is required")));
    let params = CodeParams {
        p: need("p", a.p)?,
        r: need("r", a.r.map(u64::from))? as u32,
        s: a.s.unwrap_or(1),
        m: need("m", a.m)?,
        n: need("n", a.n)?,
        k: need("k", a.k)?,
        lambda: need("lambda", a.lambda)?,
    };
    if params.k >= params.n {
        return Err(Failure::Usage("need k < n".into()));
    }
    Ok((params, None))
}

/// Parses `a..b` (inclusive), a single value or a comma-separated list.
fn parse_t(spec: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("invalid --t value {spec:?}"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// One element per line, each as `m·s` integers.
fn read_vector(tower: &Tower, path: &Path) -> Result<Vec<ExtElem>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let s = tower.base().degree();
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: String| Failure::Usage(format!("{}:{}: {what}", path.display(), no + 1));
        let ints: Vec<u64> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad(format!("not an integer: {x}"))))
            .collect::<Result<_, _>>()?;
        if ints.len() != tower.degree() * s {
            return Err(bad(format!("expected {} integers, got {}", tower.degree() * s, ints.len())));
        }
        let coords: Vec<Vec<u64>> = ints.chunks(s).map(|c| c.to_vec()).collect();
        out.push(ext_from_ints(tower, &coords).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

fn write_vector(tower: &Tower, v: &[ExtElem], out: &mut dyn Write) -> io::Result<()> {
    for x in v {
        let ints: Vec<String> = ext_to_ints(tower, x).into_iter().flatten().map(|c| c.to_string()).collect();
        writeln!(out, "{}", ints.join(" "))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundRow {
    t: u64,
    prod_exact: f64,
    prod_simple: f64,
    synd_exact: f64,
    synd_simple: f64,
    inter_exact: f64,
    inter_simple: f64,
    total_tight: f64,
    total_simple: f64,
    log2_prod_exact: f64,
    log2_prod_simple: f64,
    log2_synd_exact: f64,
    log2_synd_simple: f64,
    log2_inter_exact: f64,
    log2_inter_simple: f64,
    log2_total_tight: f64,
    log2_total_simple: f64,
    feasible: bool,
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::GenCode(a) => {
            let code = sim::build_code(&(*a).into(), cli.seed)?;
            let json = serde_json::to_string_pretty(&code.to_file()).expect("code serializes");
            writeln!(output(&cli.out)?, "{json}")?;
        }
        Command::Encode { code, msg } => {
            let code = load_code(code)?;
            let msg = read_vector(code.tower(), msg)?;
            let c = code.encode(&msg)?;
            write_vector(code.tower(), &c, &mut *output(&cli.out)?)?;
        }
        Command::Corrupt { code, word, t, profile } => {
            let code = load_code(code)?;
            let word = read_vector(code.tower(), word)?;
            if word.len() != code.n() {
                return Err(Failure::Usage(format!("word has length {}, expected {}", word.len(), code.n())));
            }
            let family = ProfileFamily::parse(profile)
                .ok_or_else(|| Failure::Usage(format!("unknown profile {profile:?}")))?;
            let tower = code.tower();
            let phi = family
                .profile(tower.chain_length(), *t)
                .ok_or_else(|| Failure::Usage(format!("{profile} needs r >= 2")))?;
            let mut rng = stream_rng(cli.seed, 1);
            let supp = sample_module(tower, &phi, &mut rng).map_err(|e| Failure::Usage(e.to_string()))?;
            let e = sample_error(tower, &supp, code.n(), &mut rng).map_err(|e| Failure::Usage(e.to_string()))?;
            write_vector(tower, &add_vectors(&code, &word, &e), &mut *output(&cli.out)?)?;
        }
        Command::Decode { code, word, message } => {
            let code = load_code(code)?;
            let word = read_vector(code.tower(), word)?;
            match decode(&code, &word)? {
                DecodeOutcome::Success { codeword, .. } => {
                    let v = if *message { code.message(&codeword)? } else { codeword };
                    write_vector(code.tower(), &v, &mut *output(&cli.out)?)?;
                }
                DecodeOutcome::Failure(reason) => return Err(Failure::Decoding(reason.to_string())),
            }
        }
        Command::Bounds { code, params, t } => {
            let (params, _) = resolve_params(code, params)?;
            eprintln!("{params:?}");
            let mut w = csv::Writer::from_writer(output(&cli.out)?);
            for t in parse_t(t)? {
                let rep = bound_report_raw(&params, t);
                let vals = [
                    &rep.product.exact,
                    &rep.product.simple,
                    &rep.syndrome.exact,
                    &rep.syndrome.simple,
                    &rep.intersection.exact,
                    &rep.intersection.simple,
                    &rep.total_tight,
                    &rep.total_simple,
                ];
                let f: Vec<f64> = vals.iter().map(|x| to_f64(x)).collect();
                let l: Vec<f64> = vals.iter().map(|x| log2(x)).collect();
                w.serialize(BoundRow {
                    t,
                    prod_exact: f[0],
                    prod_simple: f[1],
                    synd_exact: f[2],
                    synd_simple: f[3],
                    inter_exact: f[4],
                    inter_simple: f[5],
                    total_tight: f[6],
                    total_simple: f[7],
                    log2_prod_exact: l[0],
                    log2_prod_simple: l[1],
                    log2_synd_exact: l[2],
                    log2_synd_simple: l[3],
                    log2_inter_exact: l[4],
                    log2_inter_simple: l[5],
                    log2_total_tight: l[6],
                    log2_total_simple: l[7],
                    feasible: rep.feasible,
                })
                .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            w.flush()?;
        }
        Command::Simulate { code, params, t, profiles, min_trials, max_trials, min_dec_fail, min_cond_fail, threads } => {
            let (params, loaded) = resolve_params(code, params)?;
            let mut config = SimConfig::new(params, cli.seed);
            config.t_values = parse_t(t)?;
            config.profiles = profiles
                .split(',')
                .map(|p| ProfileFamily::parse(p.trim()).ok_or_else(|| Failure::Usage(format!("unknown profile {p:?}"))))
                .collect::<Result<_, _>>()?;
            config.stop = StopRule {
                min_trials: *min_trials,
                max_trials: *max_trials,
                min_dec_fail: *min_dec_fail,
                min_prod_fail: *min_cond_fail,
                min_synd_fail: *min_cond_fail,
                min_inter_fail: *min_cond_fail,
            };
            eprintln!("{}", serde_json::to_string(&config).expect("config serializes"));
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build_global()
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let code = match loaded {
                Some(c) => c,
                None => sim::build_code(&params, cli.seed)?,
            };
            let progress = |p: &sim::PointReport| {
                eprintln!("t={} {}: {} trials, {} decoding failures", p.t, p.family.id(), p.counts.trials, p.counts.dec_fail)
            };
            let report = sim::run_with_code(&config, &code, progress)?;
            for (t, family, why) in &report.skipped {
                eprintln!("skipped t={t} {}: {why}", family.id());
            }
            sim::write_csv(&report, output(&cli.out)?)?;
            if report.points.iter().all(|p| !p.bounds.feasible) {
                return Err(Failure::Infeasible("no feasible point was simulated".into()));
            }
        }
        Command::Selftest => {
            let mut out = output(&cli.out)?;
            let failed = selftest::run(cli.seed, &mut *out)?;
            if failed > 0 {
                return Err(Failure::Usage(format!("{failed} selftest checks failed")));
            }
        }
    }
    Ok(())
}
