//! Partition combinatorics shared by both orbit parametrizations.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::gcd_u64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be positive and weakly decreasing")]
    NotAPartition,
}

/// A weakly-decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self, PartitionError> {
        if parts.is_empty()
            || parts.iter().any(|&x| x == 0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(PartitionError::NotAPartition);
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a partition always has at least one part
    }

    /// `m_j(λ)`: the number of parts equal to `j`.
    pub fn multiplicity(&self, j: u64) -> u64 {
        self.parts.iter().filter(|&&x| x == j).count() as u64
    }

    pub fn gcd(&self) -> u64 {
        self.parts.iter().copied().fold(0, gcd_u64)
    }

    /// Every odd part occurs an even number of times; the admissibility
    /// condition for symplectic Jordan types.
    pub fn is_symplectic_admissible(&self) -> bool {
        (1..=self.n())
            .step_by(2)
            .all(|j| self.multiplicity(j) % 2 == 0)
    }

    /// Conjugate partition (Young-diagram transpose).
    pub fn transpose(&self) -> Partition {
        let max = self.parts[0];
        let parts = (1..=max)
            .map(|j| self.parts.iter().filter(|&&x| x >= j).count() as u64)
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<u64>) -> Result<Self, PartitionError> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Vec<u64> {
        p.parts
    }
}

/// All partitions of `n` in reverse-lexicographic order, so `(n)` comes
/// first and `(1,…,1)` last.
pub fn enumerate_partitions(n: u64) -> Vec<Partition> {
    assert!(n >= 1, "n must be positive");
    let mut out = Vec::new();
    let mut stack: Vec<u64> = Vec::new();
    fn rec(remaining: u64, max: u64, stack: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: stack.clone(),
            });
            return;
        }
        let hi = remaining.min(max);
        for part in (1..=hi).rev() {
            stack.push(part);
            rec(remaining - part, part, stack, out);
            stack.pop();
        }
    }
    rec(n, n, &mut stack, &mut out);
    out
}

/// `Σ gcd(λ)²` over the given partitions: the field-independent bound on
/// the number of rational orbit labels in a dimension stratum.
pub fn count_bound(partitions: &[Partition]) -> u64 {
    partitions.iter().map(|p| p.gcd() * p.gcd()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order_and_counts() {
        let p3 = enumerate_partitions(3);
        assert_eq!(p3, vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(enumerate_partitions(1), vec![p(&[1])]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        // partition function values P(1)..P(10)
        let expected = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(enumerate_partitions(n as u64 + 1).len(), *want);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(p(&[2, 1, 1]).multiplicity(1), 2);
        assert_eq!(p(&[4]).multiplicity(4), 1);
        assert_eq!(p(&[2, 2]).multiplicity(2), 2);
        assert_eq!(p(&[2, 2]).multiplicity(1), 0);
    }

    #[test]
    fn symplectic_admissibility() {
        assert!(p(&[4]).is_symplectic_admissible());
        assert!(!p(&[3, 1]).is_symplectic_admissible());
        assert!(p(&[2, 1, 1]).is_symplectic_admissible());
        assert!(p(&[1, 1]).is_symplectic_admissible());
        let admissible: Vec<_> = enumerate_partitions(4)
            .into_iter()
            .filter(|q| q.is_symplectic_admissible())
            .collect();
        assert_eq!(
            admissible,
            vec![p(&[4]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        let of6 = enumerate_partitions(6)
            .into_iter()
            .filter(|q| q.is_symplectic_admissible())
            .count();
        assert_eq!(of6, 8);
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[3]).transpose(), p(&[1, 1, 1]));
        assert_eq!(p(&[2, 1]).transpose(), p(&[2, 1]));
        assert_eq!(p(&[2, 2]).transpose(), p(&[2, 2]));
        assert_eq!(p(&[4, 2, 1]).transpose(), p(&[3, 2, 1, 1]));
    }

    #[test]
    fn transpose_is_involutive() {
        for n in 1..=12 {
            for q in enumerate_partitions(n) {
                assert_eq!(q.transpose().transpose(), q);
            }
        }
    }

    #[test]
    fn multiplicity_sum_identity() {
        for n in 1..=10 {
            for q in enumerate_partitions(n) {
                let total: u64 = (1..=n).map(|j| j * q.multiplicity(j)).sum();
                assert_eq!(total, n);
            }
        }
    }

    #[test]
    fn count_bound_examples() {
        assert_eq!(count_bound(&enumerate_partitions(3)), 11); // 9 + 1 + 1
        assert_eq!(count_bound(&[p(&[1, 1, 1])]), 1);
        assert_eq!(count_bound(&enumerate_partitions(2)), 5); // 4 + 1
    }

    #[test]
    fn json_round_trip() {
        let q = p(&[3, 2, 2, 1]);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, "[3,2,2,1]");
        let back: Partition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
