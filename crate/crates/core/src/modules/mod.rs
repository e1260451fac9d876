//! `R`-submodules of `S`, held through an 𝔪-shaped basis.

use rand::Rng;
use thiserror::Error;

use crate::linalg::{self, rank_frk, Matrix, RowModule};
use crate::rings::{ChainRing, ExtElem, RingElem, Tower};

mod profile;

pub use profile::RankProfile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("profile of rank {rank} does not fit in dimension {limit}")]
    ProfileTooLarge { rank: u64, limit: usize },
    #[error("profile has {got} coefficients, ring has chain length {expected}")]
    ProfileLength { expected: u32, got: u32 },
    #[error("rejection sampling gave up after {0} attempts")]
    SamplingExhausted(usize),
}

pub const SAMPLING_CAP: usize = 1000;

/// An `R`-submodule of `S`.
///
/// The basis is `p^{v_k}·g_k` where the generators `g_k` are the first rows
/// of an invertible `m×m` matrix, so they are `R`-linearly independent.
#[derive(Clone, Debug)]
pub struct SubModule {
    rows: RowModule<RingElem>,
    profile: RankProfile,
}

fn coords_matrix(tower: &Tower, gens: &[ExtElem]) -> Matrix<RingElem> {
    Matrix::from_fn(gens.len(), tower.degree(), |i, j| gens[i].coords()[j])
}

impl SubModule {
    /// `⟨gens⟩_R`.
    pub fn span(tower: &Tower, gens: &[ExtElem]) -> Self {
        Self::from_matrix(tower, &coords_matrix(tower, gens))
    }

    /// The module spanned by the rows of an `·×m` coordinate matrix.
    pub fn from_matrix(tower: &Tower, rows: &Matrix<RingElem>) -> Self {
        let rm = linalg::row_module(tower.base(), rows);
        let profile = RankProfile::from_valuations(tower.chain_length(), &rm.valuations);
        SubModule { rows: rm, profile }
    }

    pub fn zero(tower: &Tower) -> Self {
        Self::span(tower, &[])
    }

    pub fn profile(&self) -> &RankProfile {
        &self.profile
    }

    pub fn rank(&self) -> usize {
        self.rows.rank()
    }

    pub fn free_rank(&self) -> usize {
        self.profile.free_rank() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// `(v_k, g_k)` pairs; the basis elements are `p^{v_k} g_k`.
    pub fn basis_pairs(&self, tower: &Tower) -> Vec<(u32, ExtElem)> {
        self.rows
            .valuations
            .iter()
            .zip(self.rows.generators.rows())
            .map(|(&v, g)| (v, tower.elem(g.to_vec()).expect("generator has m coordinates")))
            .collect()
    }

    /// The 𝔪-shaped basis `p^{v_k} g_k`.
    pub fn basis(&self, tower: &Tower) -> Vec<ExtElem> {
        self.basis_pairs(tower)
            .into_iter()
            .map(|(v, g)| tower.scale(&tower.base().p_power(v), &g))
            .collect()
    }

    /// Basis elements as rows of an `rank×m` matrix over `R`.
    pub fn basis_matrix(&self, tower: &Tower) -> Matrix<RingElem> {
        self.rows.basis(tower.base())
    }

    pub fn contains(&self, tower: &Tower, x: &ExtElem) -> bool {
        self.rows.contains(tower.base(), x.coords())
    }

    /// Coefficients of `x` against [`SubModule::basis`], if `x` is in the
    /// module.
    pub fn coordinates(&self, tower: &Tower, x: &ExtElem) -> Option<Vec<RingElem>> {
        self.rows.coordinates(tower.base(), x.coords())
    }

    pub fn is_subset_of(&self, tower: &Tower, other: &SubModule) -> bool {
        self.basis(tower).iter().all(|b| other.contains(tower, b))
    }

    /// Equal profiles imply equal cardinality, so one inclusion suffices.
    pub fn equals(&self, tower: &Tower, other: &SubModule) -> bool {
        self.profile == other.profile && self.is_subset_of(tower, other)
    }

    /// `A·B`: the span of all pairwise products of basis elements.
    pub fn product(&self, tower: &Tower, other: &SubModule) -> SubModule {
        let a = self.basis(tower);
        let b = other.basis(tower);
        let gens: Vec<ExtElem> = a.iter().flat_map(|x| b.iter().map(|y| tower.mul(x, y))).collect();
        Self::span(tower, &gens)
    }

    /// `c·M` for `c ∈ S`.
    pub fn scaled(&self, tower: &Tower, c: &ExtElem) -> SubModule {
        let gens: Vec<ExtElem> = self.basis(tower).iter().map(|b| tower.mul(c, b)).collect();
        Self::span(tower, &gens)
    }

    pub fn intersect(tower: &Tower, mods: &[&SubModule]) -> SubModule {
        let mats: Vec<Matrix<RingElem>> = mods.iter().map(|m| m.basis_matrix(tower)).collect();
        let refs: Vec<&Matrix<RingElem>> = mats.iter().collect();
        let rows = linalg::intersect_row_modules(tower.base(), &refs)
            .unwrap_or_else(|_| Matrix::zeros(tower.base(), 0, tower.degree()));
        Self::from_matrix(tower, &rows)
    }

    /// The free module `F(M)` spanned by the generators `g_k`, each with the
    /// Teichmüller digits at positions `>= r - v_k` removed. Another
    /// 𝔪-shaped basis of the same module can give a different member of
    /// `Free(M)`; the result is unique modulo `𝔪S`.
    pub fn free_closure(&self, tower: &Tower) -> SubModule {
        let r = tower.chain_length() as usize;
        let gens: Vec<ExtElem> = self
            .basis_pairs(tower)
            .into_iter()
            .map(|(v, g)| {
                let mut digits = tower.teichmuller_digits(&g);
                for d in digits.iter_mut().skip(r - v as usize) {
                    *d = tower.zero();
                }
                tower.from_teichmuller_digits(&digits)
            })
            .collect();
        Self::span(tower, &gens)
    }
}

/// `⟨v_1, ..., v_n⟩_R`.
pub fn support(tower: &Tower, v: &[ExtElem]) -> SubModule {
    SubModule::span(tower, v)
}

fn check_profile(tower: &Tower, profile: &RankProfile, limit: usize) -> Result<(), ModuleError> {
    if profile.chain_length() != tower.chain_length() {
        return Err(ModuleError::ProfileLength {
            expected: tower.chain_length(),
            got: profile.chain_length(),
        });
    }
    if profile.rank() > limit as u64 {
        return Err(ModuleError::ProfileTooLarge { rank: profile.rank(), limit });
    }
    Ok(())
}

/// Uniformly random submodule of `S` with the given rank profile.
pub fn sample_module<G: Rng + ?Sized>(
    tower: &Tower,
    profile: &RankProfile,
    rng: &mut G,
) -> Result<SubModule, ModuleError> {
    let m = tower.degree();
    check_profile(tower, profile, m)?;
    let base = tower.base();
    let vals = profile.valuations();
    let n = vals.len();
    for _ in 0..SAMPLING_CAP {
        let t = Matrix::from_fn(n, m, |_, _| base.random(rng));
        if rank_frk(base, &t).1 != n {
            continue;
        }
        let dt = Matrix::from_fn(n, m, |i, j| base.mul(&base.p_power(vals[i]), &t[(i, j)]));
        return Ok(SubModule::from_matrix(tower, &dt));
    }
    Err(ModuleError::SamplingExhausted(SAMPLING_CAP))
}

/// Uniformly random `e ∈ S^n` whose support is exactly `E`.
pub fn sample_error<G: Rng + ?Sized>(
    tower: &Tower,
    e: &SubModule,
    n: usize,
    rng: &mut G,
) -> Result<Vec<ExtElem>, ModuleError> {
    check_profile(tower, e.profile(), n)?;
    let base = tower.base();
    let basis = e.basis(tower);
    for _ in 0..SAMPLING_CAP {
        let v: Vec<ExtElem> = (0..n)
            .map(|_| {
                basis.iter().fold(tower.zero(), |acc, b| {
                    tower.add(&acc, &tower.scale(&base.random(rng), b))
                })
            })
            .collect();
        if support(tower, &v).profile() == e.profile() {
            return Ok(v);
        }
    }
    Err(ModuleError::SamplingExhausted(SAMPLING_CAP))
}
