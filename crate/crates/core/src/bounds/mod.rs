//! Closed-form upper bounds on the decoding failure probability, evaluated
//! exactly over the rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("bound not defined: {0}")]
    Parameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Exact,
    Simple,
}

/// Parameters of an LRPC code over `GR(p^r, s)` with extension degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
}

/// `p^e` for any integer `e`.
fn ppow(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn log2_uint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// `log2(x)`, `-inf` for zero. Exact enough for values far below `2^-1000`.
pub fn log2(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_uint(x.numer().magnitude()) - log2_uint(x.denom().magnitude())
}

pub fn to_f64(x: &BigRational) -> f64 {
    let l = log2(x);
    if l.is_infinite() {
        0.0
    } else {
        l.exp2()
    }
}

/// `(1 - p^{-s·w}) Σ_{i=1}^t Σ_{j=0}^{r-1} p^{s(r-j)(i·w - m)}`.
fn product_like_exact(p: u64, r: u32, s: u32, m: u64, w: u64, t: u64) -> BigRational {
    let (s, m, w) = (s as i64, m as i64, w as i64);
    let mut sum = BigRational::zero();
    for i in 1..=t as i64 {
        for j in 0..r as i64 {
            sum += ppow(p, s * (r as i64 - j) * (i * w - m));
        }
    }
    (BigRational::one() - ppow(p, -s * w)) * sum
}

fn product_like_simple(p: u64, s: u32, m: u64, w: u64, t: u64) -> BigRational {
    int(2 * t as i64) * ppow(p, s as i64 * (t as i64 * w as i64 - m as i64))
}

/// Product-condition bound without the precondition check.
pub fn product_bound_raw(p: u64, r: u32, s: u32, m: u64, lambda: u64, t: u64, form: Form) -> BigRational {
    if t == 0 {
        return BigRational::zero();
    }
    match form {
        Form::Exact => product_like_exact(p, r, s, m, lambda, t),
        Form::Simple => product_like_simple(p, s, m, lambda, t),
    }
}

pub fn product_bound(
    p: u64,
    r: u32,
    s: u32,
    m: u64,
    lambda: u64,
    t: u64,
    form: Form,
) -> Result<BigRational, BoundError> {
    if t * lambda >= m {
        return Err(BoundError::Parameter(format!("t·λ = {} >= m = {m}", t * lambda)));
    }
    Ok(product_bound_raw(p, r, s, m, lambda, t, form))
}

pub fn syndrome_bound_raw(p: u64, s: u32, n: u64, k: u64, lambda: u64, t: u64, form: Form) -> BigRational {
    let lt = (lambda * t) as i64;
    if lt == 0 {
        return BigRational::zero();
    }
    let nk = (n - k) as i64;
    let s = s as i64;
    match form {
        Form::Exact => {
            let mut prod = BigRational::one();
            for i in 0..lt {
                prod *= BigRational::one() - ppow(p, (i - nk) * s);
            }
            BigRational::one() - prod
        }
        Form::Simple => int(4) * ppow(p, -s * (nk + 1 - lt)),
    }
}

pub fn syndrome_bound(
    p: u64,
    s: u32,
    n: u64,
    k: u64,
    lambda: u64,
    t: u64,
    form: Form,
) -> Result<BigRational, BoundError> {
    if lambda * t >= n - k + 1 {
        return Err(BoundError::Parameter(format!("λ·t = {} >= n-k+1 = {}", lambda * t, n - k + 1)));
    }
    Ok(syndrome_bound_raw(p, s, n, k, lambda, t, form))
}

pub fn intersection_bound_raw(p: u64, r: u32, s: u32, m: u64, lambda: u64, t: u64, form: Form) -> BigRational {
    if t == 0 {
        return BigRational::zero();
    }
    let w = lambda * (lambda + 1) / 2;
    match form {
        Form::Exact => product_like_exact(p, r, s, m, w, t),
        Form::Simple => product_like_simple(p, s, m, w, t),
    }
}

pub fn intersection_bound(c: &CodeParams, t: u64, form: Form) -> Result<BigRational, BoundError> {
    let w = c.lambda * (c.lambda + 1) / 2;
    if t * w >= c.m {
        return Err(BoundError::Parameter(format!("t·λ(λ+1)/2 = {} >= m = {}", t * w, c.m)));
    }
    if c.lambda * t >= c.n - c.k + 1 {
        return Err(BoundError::Parameter(format!("λ·t = {} >= n-k+1", c.lambda * t)));
    }
    Ok(intersection_bound_raw(c.p, c.r, c.s, c.m, c.lambda, t, form))
}

/// The simplified overall bound
/// `4 p^{s(λt-(n-k+1))} + 4t p^{s(tλ(λ+1)/2 - m)}`.
pub fn total_simple_raw(c: &CodeParams, t: u64) -> BigRational {
    if t == 0 {
        return BigRational::zero();
    }
    let s = c.s as i64;
    let w = (c.lambda * (c.lambda + 1) / 2) as i64;
    let t_i = t as i64;
    int(4) * ppow(c.p, s * (c.lambda as i64 * t_i - (c.n - c.k + 1) as i64))
        + int(4 * t_i) * ppow(c.p, s * (t_i * w - c.m as i64))
}

/// Exact and simplified values of one constituent bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPair {
    pub exact: BigRational,
    pub simple: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub t: u64,
    pub product: BoundPair,
    pub syndrome: BoundPair,
    pub intersection: BoundPair,
    pub total_tight: BigRational,
    pub total_simple: BigRational,
    /// All preconditions hold; otherwise the values are the raw formulas.
    pub feasible: bool,
}

/// All bounds at error rank `t`, failing if a precondition is violated.
pub fn total_bound(c: &CodeParams, t: u64) -> Result<BoundReport, BoundError> {
    product_bound(c.p, c.r, c.s, c.m, c.lambda, t, Form::Exact)?;
    syndrome_bound(c.p, c.s, c.n, c.k, c.lambda, t, Form::Exact)?;
    intersection_bound(c, t, Form::Exact)?;
    Ok(bound_report_raw(c, t))
}

/// All bounds at error rank `t` evaluated as plain formulas, with
/// `feasible` recording whether the preconditions hold.
pub fn bound_report_raw(c: &CodeParams, t: u64) -> BoundReport {
    let pair = |f: &dyn Fn(Form) -> BigRational| BoundPair { exact: f(Form::Exact), simple: f(Form::Simple) };
    let product = pair(&|f| product_bound_raw(c.p, c.r, c.s, c.m, c.lambda, t, f));
    let syndrome = pair(&|f| syndrome_bound_raw(c.p, c.s, c.n, c.k, c.lambda, t, f));
    let intersection = pair(&|f| intersection_bound_raw(c.p, c.r, c.s, c.m, c.lambda, t, f));
    let total_tight = &product.exact + &syndrome.exact + &intersection.exact;
    let total_simple = total_simple_raw(c, t);
    let w = c.lambda * (c.lambda + 1) / 2;
    let feasible = t * c.lambda < c.m && c.lambda * t < c.n - c.k + 1 && t * w < c.m;
    BoundReport { t, product, syndrome, intersection, total_tight, total_simple, feasible }
}

/// Number of `a×b` matrices over `GR(p^r, s)` of free rank `a`:
/// `p^{abrs} ∏_{a'=0}^{a-1} (1 - p^{(a'-b)s})`.
pub fn nm_count(p: u64, r: u32, s: u32, a: u64, b: u64) -> Result<BigUint, BoundError> {
    if a >= b {
        return Err(BoundError::Parameter(format!("need a < b, got a={a}, b={b}")));
    }
    let s_i = s as i64;
    let mut x = ppow(p, (a * b) as i64 * r as i64 * s_i);
    for ap in 0..a as i64 {
        x *= BigRational::one() - ppow(p, (ap - b as i64) * s_i);
    }
    if !x.is_integer() {
        return Err(BoundError::Parameter("count is not integral".into()));
    }
    Ok(x.to_integer().to_biguint().expect("count is non-negative"))
}
