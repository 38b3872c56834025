//! Nilpotent Jordan profiles from exact rank sequences.
//!
//! A profile is the weakly decreasing string d₁…d_m of Jordan block lengths
//! of a nilpotent endomorphism; the rank sequence of its powers determines
//! it uniquely, and conversely
//! rank Θⁱ = n − min(i,d₁) − … − min(i,d_m).

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanProfile {
    blocks: Vec<usize>,
}

impl JordanProfile {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Precondition(
                "profile blocks must be positive".into(),
            ));
        }
        if blocks.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(
                "profile blocks must be weakly decreasing".into(),
            ));
        }
        Ok(JordanProfile { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn longest(&self) -> usize {
        self.blocks[0]
    }

    pub fn shortest(&self) -> usize {
        *self.blocks.last().unwrap()
    }

    /// Parses the "d1 d2 …" form.
    pub fn parse(text: &str) -> Result<Self> {
        let blocks: Vec<usize> = text
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad block length {t:?}")))
            })
            .collect::<Result<_>>()?;
        JordanProfile::new(blocks)
    }
}

impl std::fmt::Display for JordanProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// rank Θⁱ predicted by a profile.
pub fn rank_from_profile(profile: &JordanProfile, i: usize) -> usize {
    let n = profile.dim();
    n - profile.blocks().iter().map(|&d| i.min(d)).sum::<usize>()
}

/// Recovers the unique weakly decreasing profile from a rank sequence
/// r_0 = n, r_1, …, r_n. The number of blocks of length ≥ i is
/// r_{i−1} − r_i.
pub fn profile_from_ranks(n: usize, ranks: &[usize]) -> Result<JordanProfile> {
    assert_eq!(ranks.len(), n + 1);
    assert_eq!(ranks[0], n);
    if ranks[n] != 0 {
        return Err(Error::NotNilpotent);
    }
    let at_least: Vec<usize> = (1..=n).map(|i| ranks[i - 1] - ranks[i]).collect();
    let mut blocks = Vec::new();
    for i in (1..=n).rev() {
        let ge_i = at_least[i - 1];
        let ge_next = if i < n { at_least[i] } else { 0 };
        for _ in 0..ge_i.saturating_sub(ge_next) {
            blocks.push(i);
        }
    }
    JordanProfile::new(blocks)
}

/// Jordan profile of a nilpotent matrix of scalar fields, certified in the
/// decidable sense: the generic symbolic rank sequence must agree with the
/// rank sequence at every sample point.
pub fn certified_nilpotent_profile(
    m: &Matrix<crate::scalar::ScalarField>,
    samples: &[Vec<Rational>],
) -> Result<JordanProfile> {
    if m.rows() != m.cols() {
        return Err(Error::Precondition(
            "jordan profile needs a square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut generic = Vec::with_capacity(n + 1);
    let mut power = Matrix::identity(n, m.proto());
    for _ in 0..=n {
        generic.push(power.rank());
        power = power.matmul(m);
    }
    let profile = profile_from_ranks(n, &generic)?;
    for p in samples {
        let at = m.eval(p)?;
        let mut pw = Matrix::identity(n, at.proto());
        for (i, &expected) in generic.iter().enumerate().take(n + 1) {
            if pw.rank() != expected {
                let pt = p
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::RankInconsistency(format!(
                    "rank of power {i} at sample ({pt}) differs from the generic rank {expected}"
                )));
            }
            pw = pw.matmul(&at);
        }
    }
    Ok(profile)
}

/// Jordan profile of a square rational matrix, or `NotNilpotent`.
pub fn jordan_profile(m: &Matrix<Rational>) -> Result<JordanProfile> {
    if m.rows() != m.cols() {
        return Err(Error::Precondition(
            "jordan profile needs a square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut ranks = Vec::with_capacity(n + 1);
    let mut power = Matrix::identity(n, m.proto());
    for _ in 0..=n {
        ranks.push(power.rank());
        power = power.matmul(m);
    }
    profile_from_ranks(n, &ranks)
}

/// The nilpotent block-diagonal matrix realizing a profile, with ones on
/// each block's superdiagonal.
pub fn jordan_matrix(profile: &JordanProfile) -> Matrix<Rational> {
    use num_traits::{One, Zero};
    let n = profile.dim();
    let mut m = Matrix::zero(n, n, &Rational::zero());
    let mut offset = 0;
    for &d in profile.blocks() {
        for i in 1..d {
            m.set(offset + i - 1, offset + i, Rational::one());
        }
        offset += d;
    }
    m
}

/// Condition for the algebraic type of a nilpotent (1,1) tensor to be
/// controlled by its Nijenhuis tensor: all blocks of equal length, or
/// exactly two distinct lengths with the shorter one occurring just once.
pub fn csd_predicate(profile: &JordanProfile) -> bool {
    let b = profile.blocks();
    let m = b.len();
    b[..m - 1].iter().all(|&d| d == b[0])
}

/// Every Jordan profile of dimension exactly n, in a deterministic order.
pub fn all_profiles(n: usize) -> Vec<JordanProfile> {
    fn rec(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=n.min(max)).rev() {
            for rest in rec(n - first, first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
        out
    }
    rec(n, n)
        .into_iter()
        .map(|b| JordanProfile::new(b).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;
    use num_traits::Zero;

    #[test]
    fn single_superdiagonal_block() {
        let m = jordan_matrix(&JordanProfile::new(vec![3]).unwrap());
        assert_eq!(jordan_profile(&m).unwrap().blocks(), &[3]);
    }

    #[test]
    fn zero_matrix_is_all_ones_profile() {
        let z = Matrix::zero(4, 4, &Rational::zero());
        assert_eq!(jordan_profile(&z).unwrap().blocks(), &[1, 1, 1, 1]);
    }

    #[test]
    fn single_offdiagonal_entry_in_dim_4() {
        // Θ(1,2) = 1: rank Θ = 1, rank Θ² = 0, profile 2 1 1
        let mut m = Matrix::zero(4, 4, &Rational::zero());
        m.set(0, 1, int(1));
        assert_eq!(jordan_profile(&m).unwrap().blocks(), &[2, 1, 1]);
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let id = Matrix::identity(2, &Rational::zero());
        assert_eq!(jordan_profile(&id), Err(Error::NotNilpotent));
    }

    #[test]
    fn profile_round_trip_through_jordan_matrices() {
        // every weakly decreasing profile with n <= 8
        for n in 1..=8usize {
            for p in all_profiles(n) {
                let m = jordan_matrix(&p);
                assert_eq!(jordan_profile(&m).unwrap(), p);
                for i in 0..=n {
                    assert_eq!(m.pow(i).rank(), rank_from_profile(&p, i));
                }
            }
        }
    }

    #[test]
    fn csd_cases() {
        let t = |blocks: Vec<usize>| csd_predicate(&JordanProfile::new(blocks).unwrap());
        assert!(t(vec![3, 3, 3]));
        assert!(!t(vec![2, 1, 1]));
        assert!(t(vec![4, 4, 2]));
        assert!(!t(vec![4, 2, 2]));
        assert!(t(vec![1, 1, 1]));
        assert!(t(vec![5]));
        assert!(t(vec![2, 1]));
    }

    #[test]
    fn parse_and_display() {
        let p = JordanProfile::parse("4 2 1").unwrap();
        assert_eq!(p.to_string(), "4 2 1");
        assert!(JordanProfile::parse("1 2").is_err());
        assert!(JordanProfile::parse("0").is_err());
    }
}
