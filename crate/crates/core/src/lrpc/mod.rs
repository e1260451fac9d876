//! LRPC codes: construction, parity-check expansion, encoding and syndromes.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, rank_frk, rref_units, snf_with, Matrix, Rref, Snf, SnfOptions};
use crate::rings::{ChainRing, ExtElem, RingElem, RingError, Tower, TowerSpec};

pub const CONSTRUCTION_CAP: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrpcError {
    #[error("invalid code parameters: {0}")]
    Parameter(String),
    #[error("no valid code found after {0} attempts")]
    ConstructionFailure(usize),
    #[error("parity-check entry ({0}, {1}) is not in the span of f")]
    Decomposition(usize, usize),
    #[error("code violates the {0}")]
    Property(&'static str),
    #[error("expected a vector of length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Which of the structural properties a parity-check matrix satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PropertyReport {
    pub full_rank: bool,
    pub unique_decoding: bool,
    pub maximal_row_span: bool,
    pub unity: bool,
    pub base_ring: bool,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.full_rank && self.unique_decoding && self.maximal_row_span && self.unity && self.base_ring
    }
}

/// An LRPC code with parity-check matrix `H ∈ S^{(n-k)×n}` whose entries lie
/// in the free module `F = ⟨f_1, ..., f_λ⟩_R`.
#[derive(Clone, Debug)]
pub struct LrpcCode {
    tower: Tower,
    n: usize,
    k: usize,
    lambda: usize,
    f: Vec<ExtElem>,
    f_inv: Vec<ExtElem>,
    h: Matrix<ExtElem>,
    h_ext: Matrix<RingElem>,
    h_ext_snf: Snf<RingElem>,
    /// Free rank of `H` over `S`.
    h_free_rank: usize,
    g: Matrix<ExtElem>,
    /// Columns where `G` is the identity.
    info_set: Vec<usize>,
}

fn check_params(m: usize, n: usize, k: usize, lambda: usize) -> Result<(), LrpcError> {
    if k == 0 || k >= n {
        return Err(LrpcError::Parameter(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    if lambda == 0 || lambda > m {
        return Err(LrpcError::Parameter(format!("need 1 <= lambda <= m = {m}, got {lambda}")));
    }
    if lambda * (n - k) < n {
        return Err(LrpcError::Parameter(format!(
            "unique decoding needs lambda >= n/(n-k) = {n}/{}",
            n - k
        )));
    }
    Ok(())
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m % d == 0).collect()
}

/// `R`-basis `1, ξ, ..., ξ^{l-1}` of the unique subring of `S` of degree
/// `l` over `R`. `ξ` is the norm of a Teichmüller element, retried until its
/// residue has degree exactly `l`.
fn subring_basis<G: Rng + ?Sized>(tower: &Tower, l: usize, rng: &mut G) -> Option<Vec<ExtElem>> {
    let m = tower.degree();
    let p = tower.prime();
    let qs = tower.base().degree() as u64;
    let frob_l = |x: &ExtElem| {
        let mut y = x.clone();
        for _ in 0..qs * l as u64 {
            y = tower.pow(&y, p);
        }
        y
    };
    for _ in 0..64 {
        let y = tower.teichmuller_lift(&tower.random_unit(rng));
        let mut xi = tower.one();
        let mut conj = y;
        for _ in 0..m / l {
            xi = tower.mul(&xi, &conj);
            conj = frob_l(&conj);
        }
        let mut basis = vec![tower.one()];
        for _ in 1..l {
            basis.push(tower.mul(basis.last().unwrap(), &xi));
        }
        if rank_frk(tower.base(), &tower.ext_to_matrix(&basis)).1 == l {
            return Some(basis);
        }
    }
    None
}

impl LrpcCode {
    /// Draws a random code satisfying every structural property.
    pub fn generate<G: Rng + ?Sized>(
        tower: &Tower,
        n: usize,
        k: usize,
        lambda: usize,
        rng: &mut G,
    ) -> Result<Self, LrpcError> {
        let m = tower.degree();
        check_params(m, n, k, lambda)?;
        let subrings: Vec<Vec<ExtElem>> = divisors(m)
            .into_iter()
            .filter(|&l| l > 1 && l < m && l <= lambda)
            .map(|l| subring_basis(tower, l, rng).ok_or(LrpcError::ConstructionFailure(0)))
            .collect::<Result<_, _>>()?;
        for _ in 0..CONSTRUCTION_CAP {
            let Some(f) = draw_f(tower, lambda, &subrings, rng) else { continue };
            let Some(coeffs) = draw_h_coeffs(tower, n, k, lambda, rng) else { continue };
            let h = Matrix::from_fn(n - k, n, |i, j| combine(tower, &f, &coeffs[i][j]));
            let h_ext = Matrix::from_fn((n - k) * lambda, n, |row, j| coeffs[row / lambda][j][row % lambda]);
            if rank_frk(tower.base(), &h_ext) != (n, n) {
                continue;
            }
            let code = Self::assemble(tower.clone(), n, k, f, h, h_ext);
            if code.h_free_rank != n - k {
                continue;
            }
            return Ok(code);
        }
        Err(LrpcError::ConstructionFailure(CONSTRUCTION_CAP))
    }

    fn assemble(
        tower: Tower,
        n: usize,
        k: usize,
        f: Vec<ExtElem>,
        h: Matrix<ExtElem>,
        h_ext: Matrix<RingElem>,
    ) -> Self {
        let f_inv = f.iter().map(|x| tower.inverse(x).expect("f_i are units")).collect();
        let h_ext_snf =
            snf_with(tower.base(), &h_ext, SnfOptions { left: true, right: true, right_inv: false });
        let rref = rref_units(&tower, &h);
        let g = systematic_generator(&tower, &rref);
        let h_free_rank = rref.pivots.len();
        let info_set = (0..n).filter(|j| !rref.pivots.contains(j)).collect();
        LrpcCode { lambda: f.len(), tower, n, k, f, f_inv, h, h_ext, h_ext_snf, h_free_rank, g, info_set }
    }

    /// Rebuilds a code from `f` and `H`, checking every property.
    pub fn from_parts(
        tower: Tower,
        n: usize,
        k: usize,
        f: Vec<ExtElem>,
        h: Matrix<ExtElem>,
    ) -> Result<Self, LrpcError> {
        let lambda = f.len();
        check_params(tower.degree(), n, k, lambda)?;
        if h.nrows() != n - k || h.ncols() != n {
            return Err(LrpcError::Dimension { expected: (n - k) * n, got: h.nrows() * h.ncols() });
        }
        let fm = tower.ext_to_matrix(&f);
        if rank_frk(tower.base(), &fm).1 != lambda {
            return Err(LrpcError::Property("free-basis condition on f"));
        }
        if f.iter().any(|x| !tower.is_unit(x)) {
            return Err(LrpcError::Property("unit condition on f"));
        }
        let f_snf = snf_with(tower.base(), &fm, SnfOptions { left: true, right: true, right_inv: false });
        let mut h_ext = Matrix::zeros(tower.base(), (n - k) * lambda, n);
        for i in 0..n - k {
            for j in 0..n {
                let c = linalg::solve_with_snf(tower.base(), &f_snf, h[(i, j)].coords(), tower.chain_length())
                    .map_err(|_| LrpcError::Decomposition(i, j))?;
                for (l, cl) in c.into_iter().enumerate() {
                    h_ext[(i * lambda + l, j)] = cl;
                }
            }
        }
        let code = Self::assemble(tower, n, k, f, h, h_ext);
        let rep = code.check_properties();
        let checks = [
            (rep.full_rank, "rank condition rk_S H = frk_S H = n-k"),
            (rep.unique_decoding, "unique-decoding property"),
            (rep.maximal_row_span, "maximal-row-span property"),
            (rep.unity, "unity property"),
            (rep.base_ring, "base-ring property"),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(LrpcError::Property(what));
            }
        }
        Ok(code)
    }

    pub fn check_properties(&self) -> PropertyReport {
        let base = self.tower.base();
        let (n, k, l) = (self.n, self.k, self.lambda);
        let full_rank = self.h_free_rank == n - k;
        let unique_decoding = l * (n - k) >= n && self.h_ext_snf.rank() == n && self.h_ext_snf.free_rank() == n;
        let maximal_row_span = (0..n - k).all(|i| {
            let block = Matrix::from_fn(l, n, |ll, j| self.h_ext[(i * l + ll, j)]);
            rank_frk(base, &block).1 == l
        });
        let unity = self.h_ext.rows().all(|row| row.iter().all(|x| base.is_zero(x) || base.is_unit(x)));
        let base_ring = self.f.first().is_some_and(|f1| *f1 == self.tower.one());
        PropertyReport { full_rank, unique_decoding, maximal_row_span, unity, base_ring }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn f(&self) -> &[ExtElem] {
        &self.f
    }

    pub fn f_inv(&self) -> &[ExtElem] {
        &self.f_inv
    }

    pub fn h(&self) -> &Matrix<ExtElem> {
        &self.h
    }

    pub fn h_ext(&self) -> &Matrix<RingElem> {
        &self.h_ext
    }

    pub(crate) fn h_ext_snf(&self) -> &Snf<RingElem> {
        &self.h_ext_snf
    }

    pub fn generator_matrix(&self) -> &Matrix<ExtElem> {
        &self.g
    }

    /// `msg·G`.
    pub fn encode(&self, msg: &[ExtElem]) -> Result<Vec<ExtElem>, LrpcError> {
        if msg.len() != self.k {
            return Err(LrpcError::Dimension { expected: self.k, got: msg.len() });
        }
        Ok(linalg::vec_mat(&self.tower, msg, &self.g).expect("dimensions checked"))
    }

    /// Inverse of `encode` on codewords: reads the information positions.
    pub fn message(&self, codeword: &[ExtElem]) -> Result<Vec<ExtElem>, LrpcError> {
        if codeword.len() != self.n {
            return Err(LrpcError::Dimension { expected: self.n, got: codeword.len() });
        }
        Ok(self.info_set.iter().map(|&j| codeword[j].clone()).collect())
    }

    pub fn random_codeword<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<ExtElem> {
        let msg: Vec<ExtElem> = (0..self.k).map(|_| self.tower.random(rng)).collect();
        self.encode(&msg).expect("message has length k")
    }

    /// `word·Hᵀ`, evaluated through `H_ext`:
    /// `s_i = Σ_l f_l Σ_j h_{i,j,l} w_j`.
    pub fn syndrome(&self, word: &[ExtElem]) -> Result<Vec<ExtElem>, LrpcError> {
        if word.len() != self.n {
            return Err(LrpcError::Dimension { expected: self.n, got: word.len() });
        }
        let t = &self.tower;
        let base = t.base();
        let m = t.degree();
        let mut out = Vec::with_capacity(self.n - self.k);
        for i in 0..self.n - self.k {
            let mut s = t.zero();
            for l in 0..self.lambda {
                let row = self.h_ext.row(i * self.lambda + l);
                let mut acc = vec![base.zero(); m];
                for (c, w) in row.iter().zip(word) {
                    if base.is_zero(c) {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(w.coords()) {
                        *a = base.add(a, &base.mul(c, x));
                    }
                }
                let acc = t.elem(acc).expect("m coordinates");
                s = t.add(&s, &t.mul(&self.f[l], &acc));
            }
            out.push(s);
        }
        Ok(out)
    }

    /// `word·Hᵀ` computed directly over `S`.
    pub fn syndrome_direct(&self, word: &[ExtElem]) -> Result<Vec<ExtElem>, LrpcError> {
        if word.len() != self.n {
            return Err(LrpcError::Dimension { expected: self.n, got: word.len() });
        }
        Ok(linalg::mat_vec(&self.tower, &self.h, word).expect("dimensions checked"))
    }

    pub fn to_file(&self) -> CodeFile {
        let t = &self.tower;
        CodeFile {
            tower: t.spec().clone(),
            n: self.n,
            k: self.k,
            lambda: self.lambda,
            f: self.f.iter().map(|x| ext_to_ints(t, x)).collect(),
            h: self.h.rows().map(|row| row.iter().map(|x| ext_to_ints(t, x)).collect()).collect(),
        }
    }

    pub fn from_file(file: &CodeFile) -> Result<Self, LrpcError> {
        let tower = Tower::new(file.tower.clone())?;
        if file.lambda != file.f.len() {
            return Err(LrpcError::Dimension { expected: file.lambda, got: file.f.len() });
        }
        let f = file.f.iter().map(|x| ext_from_ints(&tower, x)).collect::<Result<Vec<_>, _>>()?;
        let rows = file
            .h
            .iter()
            .map(|row| row.iter().map(|x| ext_from_ints(&tower, x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let h = Matrix::from_rows(file.n, rows)
            .map_err(|_| LrpcError::Dimension { expected: file.n, got: file.h.first().map_or(0, |r| r.len()) })?;
        Self::from_parts(tower, file.n, file.k, f, h)
    }
}

/// On-disk form of a code. `H_ext` and `G` are recomputed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub tower: TowerSpec,
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub f: Vec<Vec<Vec<u64>>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Vec<Vec<u64>>>>,
}

/// `m` coordinates, each as `s` integer coefficients.
pub fn ext_to_ints(tower: &Tower, x: &ExtElem) -> Vec<Vec<u64>> {
    x.coords().iter().map(|c| tower.base().coeffs(*c)).collect()
}

pub fn ext_from_ints(tower: &Tower, x: &[Vec<u64>]) -> Result<ExtElem, RingError> {
    if x.len() != tower.degree() {
        return Err(RingError::DimensionMismatch { expected: tower.degree(), got: x.len() });
    }
    let coords = x.iter().map(|c| tower.base().elem(c)).collect::<Result<Vec<_>, _>>()?;
    tower.elem(coords)
}

fn combine(tower: &Tower, f: &[ExtElem], alpha: &[RingElem]) -> ExtElem {
    f.iter()
        .zip(alpha)
        .fold(tower.zero(), |acc, (fl, a)| tower.add(&acc, &tower.scale(a, fl)))
}

fn draw_f<G: Rng + ?Sized>(
    tower: &Tower,
    lambda: usize,
    subrings: &[Vec<ExtElem>],
    rng: &mut G,
) -> Option<Vec<ExtElem>> {
    let mut f = vec![tower.one()];
    f.extend((1..lambda).map(|_| tower.random_unit(rng)));
    let fm = tower.ext_to_matrix(&f);
    if rank_frk(tower.base(), &fm).1 != lambda {
        return None;
    }
    if !subrings.is_empty() {
        let span = linalg::row_module(tower.base(), &fm.transpose());
        for basis in subrings {
            if basis.iter().all(|b| span.contains(tower.base(), b.coords())) {
                return None;
            }
        }
    }
    Some(f)
}

/// Coefficients `α_{i,j,l} ∈ R* ∪ {0}`, each row redrawn until its
/// `λ×n` coefficient block has free rank `λ`.
fn draw_h_coeffs<G: Rng + ?Sized>(
    tower: &Tower,
    n: usize,
    k: usize,
    lambda: usize,
    rng: &mut G,
) -> Option<Vec<Vec<Vec<RingElem>>>> {
    let base = tower.base();
    let draw = |rng: &mut G| loop {
        let a = base.random(rng);
        if base.is_zero(&a) || base.is_unit(&a) {
            return a;
        }
    };
    let mut rows = Vec::with_capacity(n - k);
    for _ in 0..n - k {
        let mut found = None;
        for _ in 0..CONSTRUCTION_CAP {
            let row: Vec<Vec<RingElem>> = (0..n).map(|_| (0..lambda).map(|_| draw(rng)).collect()).collect();
            let block = Matrix::from_fn(lambda, n, |l, j| row[j][l]);
            if rank_frk(base, &block).1 == lambda {
                found = Some(row);
                break;
            }
        }
        rows.push(found?);
    }
    Some(rows)
}

/// `G = [-Aᵀ | I]` up to column order, from the unit-pivot RREF `[I | A]`
/// of `H`.
fn systematic_generator(tower: &Tower, rref: &Rref<ExtElem>) -> Matrix<ExtElem> {
    let n = rref.matrix.ncols();
    let is_pivot: Vec<bool> = (0..n).map(|j| rref.pivots.contains(&j)).collect();
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    Matrix::from_fn(free.len(), n, |t, j| {
        if j == free[t] {
            tower.one()
        } else if is_pivot[j] {
            let i = rref.pivots.iter().position(|&c| c == j).unwrap();
            tower.neg(&rref.matrix[(i, free[t])])
        } else {
            tower.zero()
        }
    })
}
