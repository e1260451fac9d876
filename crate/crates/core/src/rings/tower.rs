use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{gcd, poly, ChainRing, GaloisRing, RingElem, RingError, RingSpec};
use crate::linalg::{self, Matrix};

/// Parameters of `S = R[z]/(H)`. `H` is monic of degree `m`, little-endian,
/// each coefficient a base-ring element given by its `s` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerSpec {
    #[serde(flatten)]
    pub base: RingSpec,
    pub m: usize,
    #[serde(rename = "H")]
    pub modulus: Vec<Vec<u64>>,
}

/// Element of `S`: coordinates over the power basis `1, z, ..., z^{m-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct ExtElem(Vec<RingElem>);

impl ExtElem {
    pub fn coords(&self) -> &[RingElem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<RingElem> {
        self.0
    }
}

/// The extension ring `S = GR(p^r, sm)` over `R = GR(p^r, s)`.
#[derive(Clone, Debug)]
pub struct Tower {
    spec: TowerSpec,
    base: GaloisRing,
    m: usize,
    modulus: Vec<RingElem>,
    /// Nonzero low coefficients of `-H` as `(index, value)`.
    reduction: Vec<(usize, RingElem)>,
    /// `s = 1` and `2m·q² < 2^64`: products accumulate in plain `u64`.
    lazy: bool,
    spread: Option<Spread>,
}

/// Kronecker layout for small `s > 1`: a base element becomes `s` 16-bit
/// lanes of a `u64`, so a base product is a single widening multiply and
/// whole rows of products accumulate without carries.
#[derive(Clone, Debug)]
struct Spread {
    /// Packed element to lanes.
    table: Vec<u64>,
    q: u64,
    /// `q - 1` when `q` is a power of two.
    mask: Option<u64>,
    s: usize,
    /// Low coefficients of the base modulus `h`.
    h: Vec<u64>,
    /// `-H` as integers.
    reduction: Vec<(usize, u64)>,
}

const LANE: u32 = 16;

impl Spread {
    fn new(base: &GaloisRing, m: usize, reduction: &[(usize, RingElem)]) -> Option<Self> {
        let s = base.degree();
        let q = base.modulus_q();
        if !(2..=4).contains(&s) || base.size() > 1 << 16 {
            return None;
        }
        let mut red = Vec::with_capacity(reduction.len());
        for &(i, c) in reduction {
            let cs = base.coeffs(c);
            if cs[1..].iter().any(|&x| x != 0) {
                return None;
            }
            red.push((i, cs[0]));
        }
        let bound = (m as u64 * s as u64 + red.len() as u64) * (q - 1) * (q - 1);
        if bound >= 1 << LANE {
            return None;
        }
        let table = base
            .elements()
            .map(|x| base.coeffs(x).iter().enumerate().map(|(u, &d)| d << (LANE * u as u32)).sum())
            .collect();
        let h = base.spec().h[..s].to_vec();
        let mask = q.is_power_of_two().then(|| q - 1);
        Some(Spread { table, q, mask, s, h, reduction: red })
    }

    fn reduce(&self, x: u64) -> u64 {
        match self.mask {
            Some(mask) => x & mask,
            None => x % self.q,
        }
    }

    /// Reduces a lane accumulator to the base-ring digits.
    fn fold(&self, acc: u128) -> [u64; 4] {
        let s = self.s;
        if acc == 0 {
            return [0; 4];
        }
        let mut d = [0u64; 7];
        for (u, x) in d.iter_mut().enumerate().take(2 * s - 1) {
            *x = (acc >> (LANE * u as u32)) as u64 & 0xffff;
        }
        // lanes stay below 2^16, so the reduction by h can run before mod q
        for u in (s..2 * s - 1).rev() {
            let c = self.reduce(d[u]);
            if c == 0 {
                continue;
            }
            for i in 0..s {
                d[u - s + i] += c * (self.q - self.h[i]);
            }
        }
        [self.reduce(d[0]), self.reduce(d[1]), self.reduce(d[2]), self.reduce(d[3])]
    }

    fn lanes(&self, d: &[u64; 4]) -> u64 {
        (0..self.s).map(|u| d[u] << (LANE * u as u32)).sum()
    }

    fn packed(&self, d: &[u64; 4]) -> u64 {
        (0..self.s).rev().fold(0, |acc, u| acc * self.q + d[u])
    }
}

impl Tower {
    pub fn new(spec: TowerSpec) -> Result<Self, RingError> {
        let base = GaloisRing::new(spec.base.clone())?;
        let tower = Self::unchecked(spec, base)?;
        let residue = residue_field(&tower.base)?;
        let h_bar: Vec<RingElem> = tower
            .modulus
            .iter()
            .map(|c| residue.elem_reduced(&tower.base.coeffs(*c)))
            .collect();
        if !poly::is_irreducible_over_field(&residue, &h_bar, residue.size()) {
            return Err(RingError::InvalidModulus("H is not irreducible modulo p".into()));
        }
        Ok(tower)
    }

    /// `R[z]/(H)` for a monic `H` without the irreducibility check.
    pub fn with_modulus(base: GaloisRing, modulus: Vec<RingElem>) -> Result<Self, RingError> {
        let spec = TowerSpec {
            base: base.spec().clone(),
            m: modulus.len().saturating_sub(1),
            modulus: modulus.iter().map(|c| base.coeffs(*c)).collect(),
        };
        Self::unchecked(spec, base)
    }

    fn unchecked(spec: TowerSpec, base: GaloisRing) -> Result<Self, RingError> {
        let m = spec.m;
        if m == 0 {
            return Err(RingError::InvalidParameters("m must be at least 1".into()));
        }
        if spec.modulus.len() != m + 1 {
            return Err(RingError::DimensionMismatch { expected: m + 1, got: spec.modulus.len() });
        }
        let modulus = spec
            .modulus
            .iter()
            .map(|c| base.elem(c))
            .collect::<Result<Vec<_>, _>>()?;
        if modulus[m] != base.one() {
            return Err(RingError::InvalidModulus("H must be monic".into()));
        }
        let reduction: Vec<(usize, RingElem)> = modulus[..m]
            .iter()
            .enumerate()
            .filter(|(_, c)| !base.is_zero(c))
            .map(|(i, c)| (i, base.neg(c)))
            .collect();
        let q = base.modulus_q() as u128;
        let lazy = base.degree() == 1 && 2 * (m as u128) * q * q < 1u128 << 64;
        let spread = Spread::new(&base, m, &reduction);
        Ok(Tower { spec, base, m, modulus, reduction, lazy, spread })
    }

    /// Shorthand for `Tower::new(make_tower(base, m)?)`.
    pub fn make(base: &RingSpec, m: usize) -> Result<Self, RingError> {
        Self::new(make_tower(base, m)?)
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn base(&self) -> &GaloisRing {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[RingElem] {
        &self.modulus
    }

    /// Element with the given coordinates; `coords.len()` must not exceed `m`.
    pub fn elem(&self, coords: Vec<RingElem>) -> Result<ExtElem, RingError> {
        if coords.len() > self.m {
            return Err(RingError::DimensionMismatch { expected: self.m, got: coords.len() });
        }
        let mut c = coords;
        c.resize(self.m, self.base.zero());
        Ok(ExtElem(c))
    }

    /// Element from integer coordinates when `s = 1`, or from base coefficient
    /// lists in general.
    pub fn elem_from_ints(&self, coords: &[u64]) -> Result<ExtElem, RingError> {
        self.elem(coords.iter().map(|&c| self.base.from_int(c)).collect())
    }

    /// The image of a base-ring element.
    pub fn embed(&self, a: RingElem) -> ExtElem {
        let mut c = vec![self.base.zero(); self.m];
        c[0] = a;
        ExtElem(c)
    }

    /// The class of `z`.
    pub fn generator(&self) -> ExtElem {
        if self.m == 1 {
            return self.reduce(vec![self.base.zero(), self.base.one()]);
        }
        let mut c = vec![self.base.zero(); self.m];
        c[1] = self.base.one();
        ExtElem(c)
    }

    pub fn scale(&self, c: &RingElem, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| self.base.mul(c, x)).collect())
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtElem {
        ExtElem((0..self.m).map(|_| self.base.random(rng)).collect())
    }

    pub fn random_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtElem {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    /// Reduces a polynomial of any degree modulo `H`.
    fn reduce(&self, mut c: Vec<RingElem>) -> ExtElem {
        let m = self.m;
        for k in (m..c.len()).rev() {
            let lead = c[k];
            if self.base.is_zero(&lead) {
                continue;
            }
            for &(i, nh) in &self.reduction {
                c[k - m + i] = self.base.add(&c[k - m + i], &self.base.mul(&lead, &nh));
            }
        }
        c.truncate(m);
        c.resize(m, self.base.zero());
        ExtElem(c)
    }

    fn mul_lazy(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.m;
        let q = self.base.modulus_q();
        let mut acc = vec![0u64; 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            let x = x.packed();
            if x == 0 {
                continue;
            }
            for (o, y) in acc[i..i + m].iter_mut().zip(&b.0) {
                *o += x * y.packed();
            }
        }
        for k in (m..2 * m - 1).rev() {
            let lead = acc[k] % q;
            if lead == 0 {
                continue;
            }
            for &(i, nh) in &self.reduction {
                acc[k - m + i] += lead * nh.packed();
            }
        }
        ExtElem(acc[..m].iter().map(|&x| self.base.from_int(x % q)).collect())
    }

    fn mul_spread(&self, sp: &Spread, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.m;
        let lb: Vec<u64> = b.0.iter().map(|y| sp.table[y.packed() as usize]).collect();
        let mut acc = vec![0u128; 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            let x = sp.table[x.packed() as usize];
            if x == 0 {
                continue;
            }
            for (o, &y) in acc[i..i + m].iter_mut().zip(&lb) {
                *o += u128::from(x) * u128::from(y);
            }
        }
        for k in (m..2 * m - 1).rev() {
            let lead = sp.lanes(&sp.fold(acc[k])) as u128;
            if lead == 0 {
                continue;
            }
            for &(i, c) in &sp.reduction {
                acc[k - m + i] += lead * c as u128;
            }
        }
        ExtElem(
            acc[..m]
                .iter()
                .map(|&x| self.base.from_packed(sp.packed(&sp.fold(x))).expect("digits below q"))
                .collect(),
        )
    }

    /// Matrix of multiplication by `a` on the power basis; column `j` holds
    /// the coordinates of `a·z^j`.
    pub fn multiplication_matrix(&self, a: &ExtElem) -> Matrix<RingElem> {
        let mut cols = Vec::with_capacity(self.m);
        let mut cur = a.clone();
        let z = self.generator();
        for _ in 0..self.m {
            cols.push(cur.clone());
            cur = self.mul(&cur, &z);
        }
        Matrix::from_fn(self.m, self.m, |i, j| cols[j].0[i])
    }

    /// Inverse by solving the `m×m` multiplication system over `R`. Exposed
    /// so it can be checked against [`ChainRing::inverse`].
    pub fn inverse_by_linear_system(&self, a: &ExtElem) -> Result<ExtElem, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NonUnit);
        }
        let mat = self.multiplication_matrix(a);
        let rhs = self.one().0;
        let x = linalg::solve(&self.base, &mat, &rhs).map_err(|e| RingError::Internal(e.to_string()))?;
        Ok(ExtElem(x))
    }

    /// Columns of the `m×n` matrix are the coordinates of `v_j`.
    pub fn ext_to_matrix(&self, v: &[ExtElem]) -> Matrix<RingElem> {
        Matrix::from_fn(self.m, v.len(), |i, j| v[j].0[i])
    }

    pub fn matrix_to_ext(&self, a: &Matrix<RingElem>) -> Result<Vec<ExtElem>, RingError> {
        if a.nrows() != self.m {
            return Err(RingError::DimensionMismatch { expected: self.m, got: a.nrows() });
        }
        Ok((0..a.ncols()).map(|j| ExtElem(a.column(j))).collect())
    }
}

impl ChainRing for Tower {
    type Elem = ExtElem;

    fn prime(&self) -> u64 {
        self.base.prime()
    }

    fn chain_length(&self) -> u32 {
        self.base.chain_length()
    }

    fn residue_degree(&self) -> u64 {
        self.base.residue_degree() * self.m as u64
    }

    fn zero(&self) -> ExtElem {
        ExtElem(vec![self.base.zero(); self.m])
    }

    fn one(&self) -> ExtElem {
        self.embed(self.base.one())
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|c| self.base.is_zero(c))
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        if self.lazy {
            return self.mul_lazy(a, b);
        }
        if let Some(sp) = &self.spread {
            return self.mul_spread(sp, a, b);
        }
        let m = self.m;
        let mut c = vec![self.base.zero(); 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                c[i + j] = self.base.add(&c[i + j], &self.base.mul(x, y));
            }
        }
        self.reduce(c)
    }

    fn sub_mul(&self, a: &ExtElem, c: &ExtElem, b: &ExtElem) -> ExtElem {
        self.sub(a, &self.mul(c, b))
    }

    fn from_int(&self, k: u64) -> ExtElem {
        self.embed(self.base.from_int(k))
    }

    fn valuation(&self, a: &ExtElem) -> u32 {
        a.0.iter().map(|c| self.base.valuation(c)).min().unwrap_or(self.chain_length())
    }

    fn inverse(&self, a: &ExtElem) -> Result<ExtElem, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NonUnit);
        }
        let ap = poly::trim(&self.base, a.0.clone());
        if let Some(b) = poly::euclid_inverse(&self.base, &ap, &self.modulus) {
            let mut b = b;
            b.resize(self.m, self.base.zero());
            return Ok(ExtElem(b));
        }
        self.inverse_by_linear_system(a)
    }

    fn div_p_power(&self, a: &ExtElem, k: u32) -> ExtElem {
        ExtElem(a.0.iter().map(|c| self.base.div_p_power(c, k)).collect())
    }
}

/// `R/pR ≅ F_{p^s}` with the reduced modulus.
fn residue_field(base: &GaloisRing) -> Result<GaloisRing, RingError> {
    let p = base.prime();
    let h: Vec<u64> = base.spec().h.iter().map(|&c| c % p).collect();
    GaloisRing::with_modulus(p, 1, h)
}

/// Deterministic modulus for the degree-`m` extension: the smallest monic
/// polynomial with nonzero constant term that is irreducible over `F_p` when
/// `gcd(m, s) = 1`, else over `F_{p^s}`, read with integer coefficients.
pub fn make_tower(base: &RingSpec, m: usize) -> Result<TowerSpec, RingError> {
    if m == 0 {
        return Err(RingError::InvalidParameters("m must be at least 1".into()));
    }
    let r = GaloisRing::new(base.clone())?;
    let field = if gcd(m as u64, u64::from(base.s)) == 1 {
        GaloisRing::integers(base.p, 1)?
    } else {
        residue_field(&r)?
    };
    let fsize = field.size();
    let mut n: u64 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut x = n;
        for _ in 0..m {
            coeffs.push(field.from_packed(x % fsize)?);
            x /= fsize;
        }
        if x > 0 {
            return Err(RingError::Internal(format!("no irreducible polynomial of degree {m}")));
        }
        n += 1;
        if field.is_zero(&coeffs[0]) {
            continue;
        }
        coeffs.push(field.one());
        if poly::is_irreducible_over_field(&field, &coeffs, fsize) {
            let modulus = coeffs
                .iter()
                .map(|c| {
                    let mut v = field.coeffs(*c);
                    v.resize(base.s as usize, 0);
                    v
                })
                .collect();
            let spec = TowerSpec { base: base.clone(), m, modulus };
            Tower::new(spec.clone())?;
            return Ok(spec);
        }
    }
}
