use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::exactalg::numtheory::factorial;
use crate::exactalg::IntPolynomial;

/// Integer partition with parts sorted descending and no zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(1^k)`.
    pub fn column(k: u32) -> Self {
        Self::new(vec![1; k as usize])
    }

    /// `(k)`.
    pub fn row(k: u32) -> Self {
        Self::new(vec![k])
    }

    pub fn transpose(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Self { parts }
    }

    /// Hook lengths of all cells, row by row.
    pub fn hooks(&self) -> Vec<u32> {
        let t = self.transpose();
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = t.parts[j as usize] - i as u32 - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// Σ (i-1) λ_i.
    pub fn n_statistic(&self) -> u32 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// ∏ over cells of (q^h - 1).
    pub fn hook_polynomial(&self) -> IntPolynomial {
        self.hooks()
            .into_iter()
            .fold(IntPolynomial::one(), |acc, h| &acc * &IntPolynomial::q_pow_minus_one(h as usize))
    }
}

impl Ord for Partition {
    /// Larger partitions first; equal sizes in descending lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .size()
            .cmp(&self.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Degree of the irreducible character of S_n indexed by `lambda`, by the hook length formula.
pub fn chi_dim(lambda: &Partition) -> BigInt {
    let hooks: BigInt = lambda.hooks().into_iter().map(BigInt::from).product();
    factorial(lambda.size() as u64) / hooks
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Standard Young tableaux counted by removing the largest entry from a corner.
    fn count_tableaux(parts: &[u32]) -> u64 {
        if parts.iter().all(|&p| p == 0) {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            let is_corner = parts[i] > 0 && (i + 1 == parts.len() || parts[i + 1] < parts[i]);
            if is_corner {
                let mut smaller = parts.to_vec();
                smaller[i] -= 1;
                total += count_tableaux(&smaller);
            }
        }
        total
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(0), vec![Partition::new(vec![])]);
        let three: Vec<Vec<u32>> = enumerate_partitions(3).iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(three, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(enumerate_partitions(5).len(), 7);
        let counts: Vec<usize> = (0..=12).map(|n| enumerate_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
    }

    #[test]
    fn hook_formula_matches_tableaux() {
        assert_eq!(chi_dim(&Partition::new(vec![1, 1, 1])), BigInt::from(1));
        assert_eq!(chi_dim(&Partition::new(vec![2, 1])), BigInt::from(2));
        assert_eq!(chi_dim(&Partition::new(vec![2, 2])), BigInt::from(2));
        for n in 0..=9 {
            for lambda in enumerate_partitions(n) {
                assert_eq!(chi_dim(&lambda), BigInt::from(count_tableaux(lambda.parts())), "{lambda}");
            }
        }
    }

    #[test]
    fn transpose_is_involution() {
        for n in 0..=10 {
            for lambda in enumerate_partitions(n) {
                assert_eq!(lambda.transpose().transpose(), lambda);
                assert_eq!(lambda.transpose().size(), n);
            }
        }
        assert_eq!(Partition::new(vec![3, 1]).transpose(), Partition::new(vec![2, 1, 1]));
    }

    #[test]
    fn sum_of_squares_is_factorial() {
        for n in 1..=8u32 {
            let s: BigInt = enumerate_partitions(n).iter().map(|l| chi_dim(l).pow(2)).sum();
            assert_eq!(s, factorial(n as u64));
        }
    }
}
