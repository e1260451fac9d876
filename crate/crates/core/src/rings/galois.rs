use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{is_prime, poly, prime_factors, ChainRing, RingError};

const MAX_S: usize = 62;

/// Parameters of `GR(p^r, s) = Z_{p^r}[z]/(h)`. `h` is little-endian and
/// monic of degree `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub h: Vec<u64>,
}

/// An element of a [`GaloisRing`]: the coefficients `c_0..c_{s-1}` packed as
/// the integer `Σ c_i q^i` with `q = p^r`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct RingElem(u64);

impl RingElem {
    pub fn packed(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug)]
struct Lanes {
    width: u32,
    high: u64,
    /// `masks[k]` keeps the low `width - k` bits of every lane.
    masks: Vec<u64>,
}

/// The Galois ring `GR(p^r, s)`.
#[derive(Clone, Debug)]
pub struct GaloisRing {
    spec: RingSpec,
    p: u64,
    r: u32,
    s: usize,
    q: u64,
    size: u64,
    neg_h: Vec<u64>,
    lanes: Option<Lanes>,
    table: Option<Arc<Vec<u64>>>,
    coeff_ring: Option<Box<GaloisRing>>,
}

fn checked_pow(b: u64, e: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
    }
    Some(acc)
}

fn check_params(p: u64, r: u32, s: u32) -> Result<(), RingError> {
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    if r == 0 || s == 0 {
        return Err(RingError::InvalidParameters("r and s must be at least 1".into()));
    }
    let q = checked_pow(p, r);
    let size = q.and_then(|q| checked_pow(q, s));
    if !size.is_some_and(|n| n < 1 << 62) {
        return Err(RingError::InvalidParameters(format!(
            "p^(rs) = {p}^{} does not fit the element encoding",
            u64::from(r) * u64::from(s)
        )));
    }
    Ok(())
}

impl GaloisRing {
    /// Builds the ring after checking every invariant of `spec`.
    pub fn new(spec: RingSpec) -> Result<Self, RingError> {
        check_params(spec.p, spec.r, spec.s)?;
        let ring = Self::unchecked(spec.clone())?;
        let (p, s) = (ring.p, ring.s);
        let fp = Self::integers(p, 1)?;
        let h_bar: Vec<RingElem> = spec.h.iter().map(|&c| fp.from_int(c)).collect();
        if !poly::is_irreducible_over_field(&fp, &h_bar, p) {
            return Err(RingError::InvalidModulus("h is not irreducible modulo p".into()));
        }
        if s > 1 {
            let zq = ring.coeff_ring.as_deref().expect("coefficient ring for s > 1");
            let h: Vec<RingElem> = spec.h.iter().map(|&c| RingElem(c)).collect();
            let z = [zq.zero(), zq.one()];
            let order = checked_pow(p, s as u32).unwrap() - 1;
            if poly::powmod(zq, &z, order, &h) != vec![zq.one()] {
                return Err(RingError::InvalidModulus(format!(
                    "h does not divide z^{order} - 1 over Z_{}",
                    ring.q
                )));
            }
        }
        Ok(ring)
    }

    /// `Z_{p^r}` with modulus `z - 1`.
    pub fn integers(p: u64, r: u32) -> Result<Self, RingError> {
        check_params(p, r, 1)?;
        let q = p.pow(r);
        Self::unchecked(RingSpec { p, r, s: 1, h: vec![q - 1, 1] })
    }

    /// Shorthand for `GaloisRing::new(make_ring(p, r, s)?)`.
    pub fn make(p: u64, r: u32, s: u32) -> Result<Self, RingError> {
        Self::new(make_ring(p, r, s)?)
    }

    /// Builds `Z_{p^r}[z]/(h)` for any monic `h` without the Galois-ring
    /// checks. Useful for the residue field and for textbook examples.
    pub fn with_modulus(p: u64, r: u32, h: Vec<u64>) -> Result<Self, RingError> {
        let s = h.len().checked_sub(1).filter(|&s| s >= 1).ok_or_else(|| {
            RingError::InvalidModulus("modulus must have degree at least 1".into())
        })? as u32;
        check_params(p, r, s)?;
        Self::unchecked(RingSpec { p, r, s, h })
    }

    fn unchecked(spec: RingSpec) -> Result<Self, RingError> {
        let (p, r, s) = (spec.p, spec.r, spec.s as usize);
        let q = p.pow(r);
        if spec.h.len() != s + 1 || spec.h[s] != 1 {
            return Err(RingError::InvalidModulus(format!("h must be monic of degree {s}")));
        }
        if let Some(&c) = spec.h.iter().find(|&&c| c >= q) {
            return Err(RingError::InvalidModulus(format!("coefficient {c} is not reduced mod {q}")));
        }
        let size = q.pow(s as u32);
        let neg_h = spec.h[..s].iter().map(|&c| (q - c) % q).collect();
        let lanes = (p == 2 && s > 1).then(|| {
            let width = r;
            let lane_all = |bits: u32| -> u64 {
                (0..s).fold(0u64, |acc, i| acc | (((1u64 << bits) - 1) << (i as u32 * width)))
            };
            let high = (0..s).fold(0u64, |acc, i| acc | (1u64 << (i as u32 * width + width - 1)));
            Lanes { width, high, masks: (0..=r).map(|k| lane_all(r - k)).collect() }
        });
        let coeff_ring = if s > 1 { Some(Box::new(Self::integers(p, r)?)) } else { None };
        let mut ring = GaloisRing {
            spec,
            p,
            r,
            s,
            q,
            size,
            neg_h,
            lanes,
            table: None,
            coeff_ring,
        };
        if s > 1 && size <= 256 {
            let n = size as usize;
            let mut t = vec![0u64; n * n];
            for a in 0..size {
                for b in 0..size {
                    t[a as usize * n + b as usize] = ring.mul_generic(RingElem(a), RingElem(b)).0;
                }
            }
            ring.table = Some(Arc::new(t));
        }
        Ok(ring)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// `p^r`.
    pub fn modulus_q(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.s
    }

    /// Number of elements.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn coeffs(&self, a: RingElem) -> Vec<u64> {
        self.unpack(a)[..self.s].to_vec()
    }

    /// The element with the given coefficients; each must lie in `[0, p^r)`.
    pub fn elem(&self, coeffs: &[u64]) -> Result<RingElem, RingError> {
        if coeffs.len() > self.s {
            return Err(RingError::DimensionMismatch { expected: self.s, got: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.q) {
            return Err(RingError::Foreign(format!("coefficient {c} not below {}", self.q)));
        }
        Ok(self.pack(coeffs))
    }

    /// Reduces arbitrary integer coefficients modulo `p^r`.
    pub fn elem_reduced(&self, coeffs: &[u64]) -> RingElem {
        let c: Vec<u64> = coeffs.iter().take(self.s).map(|&c| c % self.q).collect();
        self.pack(&c)
    }

    /// Element from its packed encoding, if in range.
    pub fn from_packed(&self, x: u64) -> Result<RingElem, RingError> {
        if x >= self.size {
            return Err(RingError::Foreign(format!("packed value {x} out of range")));
        }
        Ok(RingElem(x))
    }

    /// All elements in packed order. Only sensible for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size).map(RingElem)
    }

    /// The class of `z`, a primitive `(p^s - 1)`-th root of unity.
    pub fn eta(&self) -> RingElem {
        if self.s == 1 {
            self.one()
        } else {
            self.pack(&[0, 1])
        }
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        RingElem(rng.gen_range(0..self.size))
    }

    pub fn random_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        loop {
            let a = self.random(rng);
            if self.valuation(&a) == 0 {
                return a;
            }
        }
    }

    fn unpack(&self, a: RingElem) -> [u64; MAX_S] {
        let mut out = [0u64; MAX_S];
        if let Some(l) = &self.lanes {
            let mask = self.q - 1;
            for (i, o) in out.iter_mut().enumerate().take(self.s) {
                *o = (a.0 >> (i as u32 * l.width)) & mask;
            }
        } else {
            let mut x = a.0;
            for o in out.iter_mut().take(self.s) {
                *o = x % self.q;
                x /= self.q;
            }
        }
        out
    }

    fn pack(&self, c: &[u64]) -> RingElem {
        let mut x = 0u64;
        for &ci in c.iter().rev() {
            x = x * self.q + ci;
        }
        RingElem(x)
    }

    fn mul_generic(&self, a: RingElem, b: RingElem) -> RingElem {
        let (s, q) = (self.s, self.q);
        if s == 1 {
            return RingElem(((a.0 as u128 * b.0 as u128) % q as u128) as u64);
        }
        let x = self.unpack(a);
        let y = self.unpack(b);
        let mut t = [0u128; 2 * MAX_S];
        for i in 0..s {
            if x[i] == 0 {
                continue;
            }
            for j in 0..s {
                t[i + j] += x[i] as u128 * y[j] as u128;
            }
        }
        let mut c = [0u64; 2 * MAX_S];
        for k in 0..2 * s - 1 {
            c[k] = (t[k] % q as u128) as u64;
        }
        for k in (s..2 * s - 1).rev() {
            let lead = c[k];
            if lead == 0 {
                continue;
            }
            for (i, &nh) in self.neg_h.iter().enumerate() {
                let idx = k - s + i;
                c[idx] = ((c[idx] as u128 + lead as u128 * nh as u128) % q as u128) as u64;
            }
        }
        self.pack(&c[..s])
    }

    fn inverse_via_system(&self, a: RingElem) -> Result<RingElem, RingError> {
        let zq = self.coeff_ring.as_deref().expect("coefficient ring for s > 1");
        let s = self.s;
        let mut cols = Vec::with_capacity(s);
        let mut basis = self.one();
        let z = self.eta();
        for _ in 0..s {
            cols.push(self.coeffs(self.mul(&a, &basis)));
            basis = self.mul(&basis, &z);
        }
        let mat = crate::linalg::Matrix::from_fn(s, s, |i, j| RingElem(cols[j][i]));
        let mut rhs = vec![zq.zero(); s];
        rhs[0] = zq.one();
        let x = crate::linalg::solve(zq, &mat, &rhs).map_err(|e| RingError::Internal(e.to_string()))?;
        Ok(self.pack(&x.iter().map(|e| e.0).collect::<Vec<_>>()))
    }

    /// Inverse computed by solving the `s×s` multiplication system over
    /// `Z_{p^r}`. Exposed so it can be checked against [`ChainRing::inverse`].
    pub fn inverse_by_linear_system(&self, a: &RingElem) -> Result<RingElem, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NonUnit);
        }
        if self.s == 1 {
            return self.inverse(a);
        }
        self.inverse_via_system(*a)
    }
}

fn inverse_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(q as i128) as u64)
}

impl ChainRing for GaloisRing {
    type Elem = RingElem;

    fn prime(&self) -> u64 {
        self.p
    }

    fn chain_length(&self) -> u32 {
        self.r
    }

    fn residue_degree(&self) -> u64 {
        self.s as u64
    }

    fn zero(&self) -> RingElem {
        RingElem(0)
    }

    fn one(&self) -> RingElem {
        RingElem(1 % self.q)
    }

    fn is_zero(&self, a: &RingElem) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if self.s == 1 {
            let x = a.0 + b.0;
            return RingElem(if x >= self.q { x - self.q } else { x });
        }
        if let Some(l) = &self.lanes {
            let (x, y, h) = (a.0, b.0, l.high);
            return RingElem((((x & !h) + (y & !h)) ^ ((x ^ y) & h)) & l.masks[0]);
        }
        let x = self.unpack(*a);
        let y = self.unpack(*b);
        let mut c = [0u64; MAX_S];
        for i in 0..self.s {
            let t = x[i] + y[i];
            c[i] = if t >= self.q { t - self.q } else { t };
        }
        self.pack(&c[..self.s])
    }

    fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if self.s == 1 {
            return RingElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.q - b.0 });
        }
        if let Some(l) = &self.lanes {
            let (x, y, h) = (a.0, b.0, l.high);
            return RingElem((((x | h) - (y & !h)) ^ ((x ^ !y) & h)) & l.masks[0]);
        }
        let x = self.unpack(*a);
        let y = self.unpack(*b);
        let mut c = [0u64; MAX_S];
        for i in 0..self.s {
            c[i] = if x[i] >= y[i] { x[i] - y[i] } else { x[i] + self.q - y[i] };
        }
        self.pack(&c[..self.s])
    }

    fn neg(&self, a: &RingElem) -> RingElem {
        self.sub(&self.zero(), a)
    }

    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if let Some(t) = &self.table {
            return RingElem(t[(a.0 * self.size + b.0) as usize]);
        }
        self.mul_generic(*a, *b)
    }

    fn from_int(&self, k: u64) -> RingElem {
        RingElem(k % self.q)
    }

    fn valuation(&self, a: &RingElem) -> u32 {
        if a.0 == 0 {
            return self.r;
        }
        if self.p == 2 {
            if self.s == 1 {
                return a.0.trailing_zeros().min(self.r);
            }
            if let Some(l) = &self.lanes {
                let mut acc = 0u64;
                for i in 0..self.s {
                    acc |= a.0 >> (i as u32 * l.width);
                }
                return (acc & (self.q - 1)).trailing_zeros().min(self.r);
            }
        }
        let c = self.unpack(*a);
        c[..self.s]
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| {
                let mut v = 0;
                let mut y = x;
                while y % self.p == 0 {
                    y /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.r)
    }

    fn inverse(&self, a: &RingElem) -> Result<RingElem, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NonUnit);
        }
        if self.s == 1 {
            return inverse_mod(a.0, self.q)
                .map(RingElem)
                .ok_or_else(|| RingError::Internal("unit without inverse".into()));
        }
        if let Some(t) = &self.table {
            let n = self.size;
            let row = &t[(a.0 * n) as usize..((a.0 + 1) * n) as usize];
            if let Some(b) = row.iter().position(|&x| x == 1) {
                return Ok(RingElem(b as u64));
            }
        }
        let zq = self.coeff_ring.as_deref().expect("coefficient ring for s > 1");
        let ap: Vec<RingElem> = self.coeffs(*a).into_iter().map(RingElem).collect();
        let h: Vec<RingElem> = self.spec.h.iter().map(|&c| RingElem(c)).collect();
        if let Some(b) = poly::euclid_inverse(zq, &poly::trim(zq, ap), &h) {
            return Ok(self.pack(&b.iter().map(|e| e.0).collect::<Vec<_>>()));
        }
        self.inverse_via_system(*a)
    }

    fn div_p_power(&self, a: &RingElem, k: u32) -> RingElem {
        if k == 0 {
            return *a;
        }
        if k >= self.r {
            return self.zero();
        }
        if self.p == 2 {
            if self.s == 1 {
                return RingElem(a.0 >> k);
            }
            if let Some(l) = &self.lanes {
                return RingElem((a.0 >> k) & l.masks[k as usize]);
            }
        }
        let d = self.p.pow(k);
        let mut c = self.unpack(*a);
        for x in c.iter_mut().take(self.s) {
            *x /= d;
        }
        self.pack(&c[..self.s])
    }
}

/// Digits of `n` in base `b`, little-endian, padded to `len`.
fn digits(mut n: u64, b: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = n % b;
        n /= b;
    }
    out
}

/// Lexicographically smallest primitive polynomial of degree `s` over `F_p`
/// (highest coefficient most significant), little-endian, monic.
fn smallest_primitive(p: u64, s: u32) -> Result<Vec<u64>, RingError> {
    let fp = GaloisRing::integers(p, 1)?;
    let s_us = s as usize;
    let order = p.pow(s) - 1;
    let factors = prime_factors(order);
    let x = [fp.zero(), fp.one()];
    let one = vec![fp.one()];
    for n in 0..p.pow(s) {
        let mut c = digits(n, p, s_us);
        if c[0] == 0 {
            continue;
        }
        c.push(1);
        let f: Vec<RingElem> = c.iter().map(|&v| RingElem(v)).collect();
        if poly::powmod(&fp, &x, order, &f) != one {
            continue;
        }
        if factors.iter().all(|&l| poly::powmod(&fp, &x, order / l, &f) != one) {
            return Ok(c);
        }
    }
    Err(RingError::Internal(format!("no primitive polynomial of degree {s} over F_{p}")))
}

/// Deterministic construction of `GR(p^r, s)`: the smallest primitive
/// polynomial over `F_p`, Hensel-lifted to the unique factor of
/// `z^(p^s-1) - 1` over `Z_{p^r}` above it.
pub fn make_ring(p: u64, r: u32, s: u32) -> Result<RingSpec, RingError> {
    check_params(p, r, s)?;
    if checked_pow(p, s).is_none_or(|n| n > 1 << 20) {
        return Err(RingError::InvalidParameters("p^s exceeds 2^20".into()));
    }
    if s == 1 {
        return Ok(GaloisRing::integers(p, r)?.spec.clone());
    }
    let h0 = smallest_primitive(p, s)?;
    // In Z_q[z]/(h0) the lift of z is a root of the lifted h; the conjugates
    // of that root are its p^i powers.
    let approx = GaloisRing::with_modulus(p, r, h0)?;
    let root = approx.teichmuller_lift(&approx.eta());
    let mut prod = vec![approx.one()];
    let mut conj = root;
    for _ in 0..s {
        prod = poly::mul(&approx, &prod, &[approx.neg(&conj), approx.one()]);
        conj = approx.pow(&conj, p);
    }
    let mut h = Vec::with_capacity(s as usize + 1);
    for c in &prod {
        let cs = approx.coeffs(*c);
        if cs[1..].iter().any(|&x| x != 0) {
            return Err(RingError::Internal("Hensel lift left non-integral coefficients".into()));
        }
        h.push(cs[0]);
    }
    let spec = RingSpec { p, r, s, h };
    GaloisRing::new(spec.clone())?;
    Ok(spec)
}
