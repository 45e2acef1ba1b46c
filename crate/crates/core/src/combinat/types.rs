use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::partition::{chi_dim, enumerate_partitions, Partition};
use crate::exactalg::IntPolynomial;

/// Multiset of partitions: the type of a multipartition. Iteration follows
/// the ordering of [`Partition`] (larger first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartitionType {
    entries: BTreeMap<Partition, u32>,
}

impl PartitionType {
    pub fn new(entries: impl IntoIterator<Item = (Partition, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (lambda, m) in entries {
            if m > 0 && !lambda.is_empty() {
                *map.entry(lambda).or_insert(0) += m;
            }
        }
        Self { entries: map }
    }

    /// Shorthand taking raw part lists, e.g. `from_parts(&[(&[1], 4)])` for {(1):4}.
    pub fn from_parts(entries: &[(&[u32], u32)]) -> Self {
        Self::new(entries.iter().map(|(p, m)| (Partition::new(p.to_vec()), *m)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Partition, u32)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.values().copied()
    }

    pub fn size(&self) -> u32 {
        self.entries().map(|(p, m)| p.size() * m).sum()
    }

    /// #τ: the total multiplicity.
    pub fn sharp(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.entries().map(|(p, m)| (p.transpose(), m)))
    }

    pub fn scale(&self, a: u32) -> Self {
        Self::new(self.entries().map(|(p, m)| (p.clone(), m * a)))
    }

    /// ∏ chi_dim(λ)^{m_λ}.
    pub fn d_tau(&self) -> BigInt {
        self.entries()
            .fold(BigInt::one(), |acc, (p, m)| acc * chi_dim(p).pow(m))
    }

    /// Q_τ(q) = |GL_n(F_q)| / τ(1) = q^{n(n-1)/2 - Σ m_λ n(λ)} · ∏ H_λ(q)^{m_λ}.
    pub fn dim_quotient_poly(&self) -> IntPolynomial {
        let n = self.size();
        let n_stat: u32 = self.entries().map(|(p, m)| p.n_statistic() * m).sum();
        let shift = n * n.saturating_sub(1) / 2 - n_stat;
        self.entries()
            .fold(IntPolynomial::one(), |acc, (p, m)| &acc * &p.hook_polynomial().pow(m))
            .shift(shift as usize)
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries().map(|(p, m)| format!("{p}:{m}")).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All types of size `n`, in a fixed order: earlier partitions take their
/// largest multiplicity first.
pub fn enumerate_types(n: u32) -> Vec<PartitionType> {
    let pool: Vec<Partition> = (1..=n).rev().flat_map(enumerate_partitions).collect();
    fn go(pool: &[Partition], rem: u32, cur: &mut Vec<(Partition, u32)>, out: &mut Vec<PartitionType>) {
        if rem == 0 {
            out.push(PartitionType::new(cur.iter().cloned()));
            return;
        }
        let Some((head, tail)) = pool.split_first() else {
            return;
        };
        let s = head.size();
        for m in (0..=rem / s).rev() {
            if m > 0 {
                cur.push((head.clone(), m));
            }
            go(tail, rem - m * s, cur, out);
            if m > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&pool, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ty(entries: &[(&[u32], u32)]) -> PartitionType {
        PartitionType::from_parts(entries)
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_types(1), vec![ty(&[(&[1], 1)])]);
        assert_eq!(
            enumerate_types(2),
            vec![ty(&[(&[2], 1)]), ty(&[(&[1, 1], 1)]), ty(&[(&[1], 2)])]
        );
        assert!(enumerate_types(4).contains(&ty(&[(&[1], 4)])));
    }

    /// Coefficients of ∏_k (1 - x^k)^{-p(k)}, an independent count of multisets of partitions.
    fn type_counts_by_generating_function(nmax: usize) -> Vec<u64> {
        let mut series = vec![0u64; nmax + 1];
        series[0] = 1;
        for k in 1..=nmax {
            let pk = enumerate_partitions(k as u32).len();
            for _ in 0..pk {
                for i in k..=nmax {
                    series[i] += series[i - k];
                }
            }
        }
        series
    }

    #[test]
    fn type_counts_match_generating_function() {
        let expected = type_counts_by_generating_function(8);
        for n in 1..=8u32 {
            let types = enumerate_types(n);
            assert_eq!(types.len() as u64, expected[n as usize], "n = {n}");
            let mut dedup = types.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), types.len());
            assert!(types.iter().all(|t| t.size() == n));
        }
    }

    #[test]
    fn d_tau_examples() {
        assert_eq!(ty(&[(&[1], 4)]).d_tau(), BigInt::from(1));
        assert_eq!(ty(&[(&[2, 1], 1)]).d_tau(), BigInt::from(2));
        assert_eq!(ty(&[(&[2, 1], 2)]).d_tau(), BigInt::from(4));
    }

    #[test]
    fn dual_and_scale_examples() {
        assert_eq!(ty(&[(&[2], 1)]).dual(), ty(&[(&[1, 1], 1)]));
        assert_eq!(ty(&[(&[1], 4)]).dual(), ty(&[(&[1], 4)]));
        assert_eq!(ty(&[(&[2, 1], 3)]).dual(), ty(&[(&[2, 1], 3)]));
        let t = ty(&[(&[1], 1)]);
        assert_eq!(t.scale(1), t);
        assert_eq!(t.scale(2), ty(&[(&[1], 2)]));
        assert_eq!(
            ty(&[(&[2], 1), (&[1], 2)]).scale(3),
            ty(&[(&[2], 3), (&[1], 6)])
        );
        assert_eq!(ty(&[(&[2], 1), (&[1], 2)]).scale(3).to_string(), "{(2):3,(1):6}");
    }

    #[test]
    fn dim_quotient_examples() {
        let q = IntPolynomial::q();
        let qm1 = IntPolynomial::q_minus_one();
        assert_eq!(ty(&[(&[1], 1)]).dim_quotient_poly(), qm1);
        assert_eq!(ty(&[(&[1], 2)]).dim_quotient_poly(), &q * &qm1.pow(2));
        assert_eq!(
            ty(&[(&[1, 1], 1)]).dim_quotient_poly(),
            &IntPolynomial::q_pow_minus_one(2) * &qm1
        );
        // GL_2(F_3): order 48, degrees 4 and 3
        assert_eq!(ty(&[(&[1], 2)]).dim_quotient_poly().eval_i64(3), BigInt::from(12));
        assert_eq!(ty(&[(&[1, 1], 1)]).dim_quotient_poly().eval_i64(3), BigInt::from(16));
    }

    fn gl_order(n: u32) -> IntPolynomial {
        let mut acc = IntPolynomial::monomial(1, (n * (n - 1) / 2) as usize);
        for i in 1..=n {
            acc = &acc * &IntPolynomial::q_pow_minus_one(i as usize);
        }
        acc
    }

    #[test]
    fn dim_quotient_divides_group_order_and_is_positive() {
        for n in 1..=6u32 {
            let order = gl_order(n);
            for t in enumerate_types(n) {
                let qt = t.dim_quotient_poly();
                let degree = order.exact_divide(&qt).expect("τ(1) is a polynomial");
                for q in 2..6 {
                    assert!(qt.eval_i64(q) > BigInt::from(0));
                    assert!(degree.eval_i64(q) > BigInt::from(0));
                }
            }
            // the type {(n)} is the trivial character
            assert_eq!(ty(&[(&[n], 1)]).dim_quotient_poly(), order);
        }
    }

    #[test]
    fn scaled_dim_quotient_identity() {
        for n in 1..=6u32 {
            for a in crate::exactalg::divisors(n as u64) {
                let a = a as u32;
                let shift = n * n * (a - 1) / (2 * a);
                assert_eq!(n * n * (a - 1) % (2 * a), 0);
                for t0 in enumerate_types(n / a) {
                    let lhs = t0.scale(a).dim_quotient_poly();
                    let rhs = t0.dim_quotient_poly().pow(a).shift(shift as usize);
                    assert_eq!(lhs, rhs, "n={n} A={a} τ0={t0}");
                }
            }
        }
    }

    fn arb_type() -> impl Strategy<Value = PartitionType> {
        (1u32..=6).prop_flat_map(|n| {
            let all = enumerate_types(n);
            prop::sample::select(all)
        })
    }

    proptest! {
        #[test]
        fn dual_involution_and_commutes_with_scale(t in arb_type(), a in 1u32..4) {
            prop_assert_eq!(t.dual().dual(), t.clone());
            prop_assert_eq!(t.dual().scale(a), t.scale(a).dual());
            prop_assert_eq!(t.scale(a).size(), a * t.size());
            prop_assert_eq!(t.scale(a).sharp(), a * t.sharp());
        }
    }
}
