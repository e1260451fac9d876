use std::fmt;

use serde::{Deserialize, Serialize};

/// Rank profile `φ(x) = Σ φ_i x^i ∈ Z[x]/(x^r)`: `φ_i` basis elements of
/// valuation `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankProfile(Vec<u64>);

impl RankProfile {
    /// Coefficients `φ_0..φ_{r-1}`; must be non-empty.
    pub fn new(coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a rank profile needs r >= 1 coefficients");
        RankProfile(coeffs)
    }

    pub fn zero(r: u32) -> Self {
        RankProfile(vec![0; r as usize])
    }

    /// `t·x^j`, truncated.
    pub fn monomial(r: u32, t: u64, j: u32) -> Self {
        let mut c = vec![0; r as usize];
        if j < r {
            c[j as usize] = t;
        }
        RankProfile(c)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn chain_length(&self) -> u32 {
        self.0.len() as u32
    }

    /// `φ(1)`.
    pub fn rank(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `φ(0)`.
    pub fn free_rank(&self) -> u64 {
        self.0[0]
    }

    /// Valuation of each basis element, non-decreasing.
    pub fn valuations(&self) -> Vec<u32> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i as u32, c as usize))
            .collect()
    }

    pub fn from_valuations(r: u32, vals: &[u32]) -> Self {
        let mut c = vec![0; r as usize];
        for &v in vals {
            if v < r {
                c[v as usize] += 1;
            }
        }
        RankProfile(c)
    }

    /// Product in `Z[x]/(x^r)`.
    pub fn mul(&self, other: &Self) -> Self {
        let r = self.0.len().min(other.0.len());
        let mut c = vec![0; r];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                if i + j < r {
                    c[i + j] += a * b;
                }
            }
        }
        RankProfile(c)
    }

    /// `x^j·φ`.
    pub fn shift(&self, j: u32) -> Self {
        let r = self.0.len();
        let j = j as usize;
        let mut c = vec![0; r];
        for i in 0..r.saturating_sub(j) {
            c[i + j] = self.0[i];
        }
        RankProfile(c)
    }

    /// `self ≼ other`: every prefix sum of `self` is at most that of `other`.
    pub fn leq(&self, other: &Self) -> bool {
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Compact label such as `2+x` or `3x`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            parts.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
