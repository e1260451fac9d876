//! Dense polynomials over a chain ring, little-endian coefficient vectors.

use super::ChainRing;

pub(crate) fn trim<C: ChainRing>(ring: &C, mut a: Vec<C::Elem>) -> Vec<C::Elem> {
    while a.last().is_some_and(|c| ring.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree of a trimmed polynomial; `None` for zero.
pub(crate) fn degree<C: ChainRing>(a: &[C::Elem]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn sub<C: ChainRing>(ring: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let n = a.len().max(b.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(ring, out)
}

pub(crate) fn mul<C: ChainRing>(ring: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

/// Division with remainder by a polynomial whose leading coefficient is a
/// unit. Returns `None` if it is not.
pub(crate) fn divrem<C: ChainRing>(
    ring: &C,
    a: &[C::Elem],
    b: &[C::Elem],
) -> Option<(Vec<C::Elem>, Vec<C::Elem>)> {
    let db = degree::<C>(b)?;
    let lead_inv = ring.inverse(&b[db]).ok()?;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return Some((Vec::new(), trim(ring, rem)));
    }
    let mut quot = vec![ring.zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = ring.mul(&rem[k], &lead_inv);
        if ring.is_zero(&c) {
            continue;
        }
        let shift = k - db;
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] = ring.sub_mul(&rem[shift + i], &c, bi);
        }
        quot[shift] = c;
    }
    rem.truncate(db);
    Some((trim(ring, quot), trim(ring, rem)))
}

pub(crate) fn rem_monic<C: ChainRing>(ring: &C, a: &[C::Elem], modulus: &[C::Elem]) -> Vec<C::Elem> {
    divrem(ring, a, modulus)
        .expect("modulus has a unit leading coefficient")
        .1
}

pub(crate) fn mulmod<C: ChainRing>(
    ring: &C,
    a: &[C::Elem],
    b: &[C::Elem],
    modulus: &[C::Elem],
) -> Vec<C::Elem> {
    rem_monic(ring, &mul(ring, a, b), modulus)
}

pub(crate) fn powmod<C: ChainRing>(
    ring: &C,
    a: &[C::Elem],
    mut e: u64,
    modulus: &[C::Elem],
) -> Vec<C::Elem> {
    let mut base = rem_monic(ring, a, modulus);
    let mut acc = rem_monic(ring, &[ring.one()], modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(ring, &acc, &base, modulus);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(ring, &base, &base, modulus);
        }
    }
    acc
}

/// Monic gcd over a field (every nonzero coefficient must be a unit).
pub(crate) fn gcd_field<C: ChainRing>(ring: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let mut x = trim(ring, a.to_vec());
    let mut y = trim(ring, b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(ring, &x, &y).expect("field coefficients are units");
        x = y;
        y = r;
    }
    if let Some(d) = degree::<C>(&x) {
        let inv = ring.inverse(&x[d]).expect("field coefficients are units");
        x = x.iter().map(|c| ring.mul(c, &inv)).collect();
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree `m` over a
/// finite field with `field_size` elements.
pub(crate) fn is_irreducible_over_field<C: ChainRing>(ring: &C, f: &[C::Elem], field_size: u64) -> bool {
    let m = match degree::<C>(f) {
        Some(d) if d >= 1 => d as u64,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    let x = vec![ring.zero(), ring.one()];
    // frob[k] = x^(Q^k) mod f
    let mut frob = Vec::with_capacity(m as usize + 1);
    let mut cur = rem_monic(ring, &x, f);
    frob.push(cur.clone());
    for _ in 0..m {
        cur = powmod(ring, &cur, field_size, f);
        frob.push(cur.clone());
    }
    if !sub(ring, &frob[m as usize], &x).is_empty() {
        return false;
    }
    for l in super::prime_factors(m) {
        let diff = sub(ring, &frob[(m / l) as usize], &x);
        let g = gcd_field(ring, f, &diff);
        if degree::<C>(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Extended Euclid on `(modulus, a)` requiring every divisor along the way to
/// have a unit leading coefficient. Returns `b` with `a*b ≡ 1 (mod modulus)`,
/// or `None` when the chain hits a non-unit leading coefficient.
pub(crate) fn euclid_inverse<C: ChainRing>(
    ring: &C,
    a: &[C::Elem],
    modulus: &[C::Elem],
) -> Option<Vec<C::Elem>> {
    let mut r0 = trim(ring, modulus.to_vec());
    let mut r1 = trim(ring, a.to_vec());
    let mut t0: Vec<C::Elem> = Vec::new();
    let mut t1 = vec![ring.one()];
    loop {
        let d1 = degree::<C>(&r1)?;
        if d1 == 0 {
            let c = ring.inverse(&r1[0]).ok()?;
            let inv: Vec<_> = t1.iter().map(|x| ring.mul(x, &c)).collect();
            return Some(rem_monic(ring, &inv, modulus));
        }
        let (q, rem) = divrem(ring, &r0, &r1)?;
        let t2 = sub(ring, &t0, &mul(ring, &q, &t1));
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
}
