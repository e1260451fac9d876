//! Exact arithmetic in Galois rings.
//!
//! [`GaloisRing`] is the base ring `R = GR(p^r, s)` and [`Tower`] is its
//! degree-`m` extension `S = GR(p^r, sm)`. Both implement [`ChainRing`], which
//! is all the linear algebra needs: a finite local ring whose ideals form the
//! chain `R ⊃ pR ⊃ ... ⊃ p^r R = 0`.

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

mod galois;
pub(crate) mod poly;
mod tower;

pub use galois::{make_ring, GaloisRing, RingElem, RingSpec};
pub use tower::{make_tower, ExtElem, Tower, TowerSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid ring parameters: {0}")]
    InvalidParameters(String),
    #[error("modulus rejected: {0}")]
    InvalidModulus(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("element does not belong to this ring: {0}")]
    Foreign(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("internal arithmetic failure: {0}")]
    Internal(String),
}

/// A finite commutative chain ring whose maximal ideal is generated by the
/// prime `p`.
///
/// Elements are always kept canonical, so `==` on elements is ring equality.
pub trait ChainRing: Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    /// Residue characteristic `p`; also the generator of the maximal ideal.
    fn prime(&self) -> u64;
    /// Nilpotency index `r` of the maximal ideal.
    fn chain_length(&self) -> u32;
    /// Degree `d` of the residue field `F_{p^d}` over `F_p`.
    fn residue_degree(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of the integer `k` under `Z -> R`.
    fn from_int(&self, k: u64) -> Self::Elem;

    /// Largest `j` with `a ∈ p^j R`; `r` for zero.
    fn valuation(&self, a: &Self::Elem) -> u32;

    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem, RingError>;

    /// Exact division by `p^k` for `v(a) >= k`. The quotient is only defined
    /// modulo `p^(r-k)`; the representative with all coordinates below
    /// `p^(r-k)` is returned.
    fn div_p_power(&self, a: &Self::Elem, k: u32) -> Self::Elem;

    /// `a - c*b`, the elimination kernel.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == 0
    }

    /// `p^k`, zero once `k >= r`.
    fn p_power(&self, k: u32) -> Self::Elem {
        if k >= self.chain_length() {
            return self.zero();
        }
        self.from_int(self.prime().pow(k))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Splits `a = p^v u` and returns `(v, u)` with `u` a unit. Zero maps to
    /// `(r, 0)`.
    fn unit_part(&self, a: &Self::Elem) -> (u32, Self::Elem) {
        let v = self.valuation(a);
        if v >= self.chain_length() {
            return (v, self.zero());
        }
        (v, self.div_p_power(a, v))
    }

    /// The Teichmüller representative congruent to `a` modulo `p`:
    /// `a^(p^(d(r-1)))`.
    fn teichmuller_lift(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.prime();
        let steps = self.residue_degree() * u64::from(self.chain_length() - 1);
        let mut x = a.clone();
        for _ in 0..steps {
            x = self.pow(&x, p);
        }
        x
    }

    /// Digits `t_0, ..., t_{r-1}` of the Teichmüller expansion
    /// `a = Σ p^i t_i`, each `t_i` in `{0} ∪ ⟨η⟩`.
    fn teichmuller_digits(&self, a: &Self::Elem) -> Vec<Self::Elem> {
        let r = self.chain_length();
        let mut digits = Vec::with_capacity(r as usize);
        let mut rest = a.clone();
        for i in 0..r {
            let t = self.teichmuller_lift(&rest);
            digits.push(t.clone());
            if i + 1 < r {
                // rest - t ≡ 0 mod p, so the division is exact
                rest = self.div_p_power(&self.sub(&rest, &t), 1);
            }
        }
        digits
    }

    fn from_teichmuller_digits(&self, digits: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.zero();
        for (i, t) in digits.iter().enumerate() {
            acc = self.add(&acc, &self.mul(&self.p_power(i as u32), t));
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
