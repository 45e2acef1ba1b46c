use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::OracleError;
use crate::combinat::{chi_dim, Partition, PartitionType};
use crate::exactalg::{CyclotomicInteger, Rational};

/// A multipartition supported on linear characters of F_q^×: pairs
/// (ξ as an exponent mod q-1, Λ(ξ)) with distinct ξ.
pub type Multipartition = Vec<(u32, Partition)>;

/// Every way to place `parts[i]` many of the remaining positions into slot i;
/// calls `visit` with the slot of each position.
fn assignments(sizes: &[usize], slots: &mut Vec<usize>, left: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    if slots.len() == sizes.iter().sum::<usize>() {
        visit(slots);
        return;
    }
    for i in 0..left.len() {
        if left[i] > 0 {
            left[i] -= 1;
            slots.push(i);
            assignments(sizes, slots, left, visit);
            slots.pop();
            left[i] += 1;
        }
    }
}

/// Value of the principal-series character of GL_n(F_q) labelled by Λ at the
/// regular diagonal element diag(ε^{μ_1}, …, ε^{μ_n}):
/// ∏_ξ χ^{Λ(ξ)}(1) · Σ over placements of positions into ξ-slots of sizes
/// |Λ(ξ)| of ∏ ξ(ε^{μ_j}).
pub fn green_value(q: u32, lambda: &[(u32, Partition)], mu: &[u32]) -> Result<CyclotomicInteger, OracleError> {
    let e = q - 1;
    let mut sorted = mu.iter().map(|m| m % e).collect::<Vec<_>>();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(OracleError::NotRegular);
    }
    let sizes: Vec<usize> = lambda.iter().map(|(_, p)| p.size() as usize).collect();
    if sizes.iter().sum::<usize>() != mu.len() {
        return Err(OracleError::InvalidParameters("multipartition size differs from the rank".into()));
    }
    let dim: BigInt = lambda.iter().map(|(_, p)| chi_dim(p)).product();
    let dim = dim.to_i64().ok_or_else(|| OracleError::InvalidParameters("dimension overflow".into()))?;
    let mut hist = vec![0i64; e as usize];
    let mut left = sizes.clone();
    assignments(&sizes, &mut Vec::new(), &mut left, &mut |slots| {
        let k: u64 = slots.iter().zip(mu).map(|(&s, &m)| lambda[s].0 as u64 * m as u64).sum();
        hist[(k % e as u64) as usize] += 1;
    });
    Ok(CyclotomicInteger::from_exponent_counts(e, &hist).scale(dim))
}

/// All multipartitions over Z/(q-1) of the given type; partitions that repeat
/// take increasing ξ so each multipartition appears once.
pub fn multipartitions_of_type(tau: &PartitionType, q: u32) -> Vec<Multipartition> {
    let items: Vec<Partition> =
        tau.entries().flat_map(|(p, m)| std::iter::repeat_n(p.clone(), m as usize)).collect();
    let mut out = Vec::new();
    fn go(items: &[Partition], e: u32, cur: &mut Multipartition, used: &mut Vec<bool>, out: &mut Vec<Multipartition>) {
        let i = cur.len();
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        let start = if i > 0 && items[i - 1] == items[i] { cur[i - 1].0 + 1 } else { 0 };
        for xi in start..e {
            if !used[xi as usize] {
                used[xi as usize] = true;
                cur.push((xi, items[i].clone()));
                go(items, e, cur, used, out);
                cur.pop();
                used[xi as usize] = false;
            }
        }
    }
    go(&items, q - 1, &mut Vec::new(), &mut vec![false; (q - 1) as usize], &mut out);
    out
}

/// Whether Λ is fixed by twisting with the character of order s.
fn fixed_by_order(lambda: &Multipartition, q: u32, s: u32) -> bool {
    let e = q - 1;
    let shift = e / s;
    lambda.iter().all(|(xi, p)| lambda.iter().any(|(x2, p2)| *x2 == (xi + shift) % e && p2 == p))
}

/// Exponent tuples (mod q-1) of a nice diagonal element: distinct, summing to
/// zero, and with no proper nonempty subset summing to zero.
pub fn is_nice(q: u32, exps: &[u32]) -> bool {
    let e = (q - 1) as u64;
    let n = exps.len();
    let mut sorted: Vec<u64> = exps.iter().map(|&x| x as u64 % e).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    if exps.iter().map(|&x| x as u64).sum::<u64>() % e != 0 {
        return false;
    }
    (1u64..(1 << n) - 1).all(|mask| {
        (0..n).filter(|i| mask >> i & 1 == 1).map(|i| exps[i] as u64).sum::<u64>() % e != 0
    })
}

/// Least increasing exponent tuple (w.r.t. the least primitive root) of a nice
/// element of SL_n(F_q) whose eigenvalues are all r-th powers.
pub fn find_nice_tuple(n: u32, q: u32, r: u32) -> Option<Vec<u32>> {
    let e = q - 1;
    let step = crate::exactalg::numtheory::gcd(r as u64, e as u64) as u32;
    let candidates: Vec<u32> = (1..e).filter(|x| x % step == 0).collect();
    fn go(n: usize, q: u32, cands: &[u32], from: usize, cur: &mut Vec<u32>) -> bool {
        if cur.len() == n {
            return is_nice(q, cur);
        }
        for i in from..cands.len() {
            cur.push(cands[i]);
            // prune: every prefix must avoid zero subset sums
            let ok = {
                let m = cur.len();
                m == n || (1u64..(1 << m)).all(|mask| {
                    (0..m).filter(|j| mask >> j & 1 == 1).map(|j| cur[j] as u64).sum::<u64>() % (q as u64 - 1) != 0
                })
            };
            if ok && go(n, q, cands, i + 1, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    go(n as usize, q, &candidates, 0, &mut cur).then_some(cur)
}

/// Č_{s,A,τ} = (1/(q-1))·Σ_{[υ] ∈ Υ_A} Σ_η ∏_i η(z|_{υ(i)}), with η over the
/// principal-series characters of GL_{n/A}(F_q) of type τ fixed by the twist
/// of order s, and υ over ordered splittings of the eigenvalues into A blocks
/// modulo cyclic shift. The eigenvalues must admit the roots the identity
/// needs; that is the caller's responsibility.
pub fn c_check_oracle(s: u32, a: u32, tau: &PartitionType, q: u32, exps: &[u32]) -> Result<Rational, OracleError> {
    let n = exps.len() as u32;
    if a == 0 || s == 0 || !n.is_multiple_of(a) || tau.size() * a != n || !(q - 1).is_multiple_of(s) {
        return Err(OracleError::InvalidParameters(format!("s={s}, A={a}, |tau|={}, n={n}, q={q}", tau.size())));
    }
    if !is_nice(q, exps) {
        return Err(OracleError::NotNice);
    }
    let m = (n / a) as usize;
    let lambdas: Vec<Multipartition> =
        multipartitions_of_type(tau, q).into_iter().filter(|l| fixed_by_order(l, q, s)).collect();
    // splittings with position 0 in the first block
    let mut splittings: Vec<Vec<Vec<usize>>> = Vec::new();
    fn split(left: &[usize], m: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first_block = cur.is_empty();
        let k = left.len();
        for mask in 0u64..(1 << k) {
            if mask.count_ones() as usize != m || (first_block && mask & 1 == 0) {
                continue;
            }
            let block: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| left[i]).collect();
            let rest: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).map(|i| left[i]).collect();
            cur.push(block);
            split(&rest, m, cur, out);
            cur.pop();
        }
    }
    split(&(0..n as usize).collect::<Vec<_>>(), m, &mut Vec::new(), &mut splittings);
    let mut total = CyclotomicInteger::zero(q - 1);
    for lam in &lambdas {
        for sp in &splittings {
            let mut prod = CyclotomicInteger::one(q - 1);
            for block in sp {
                let mu: Vec<u32> = block.iter().map(|&i| exps[i]).collect();
                prod = prod.mul(&green_value(q, lam, &mu)?)?;
            }
            total = total.add(&prod)?;
        }
    }
    let value = total
        .as_integer()
        .ok_or_else(|| OracleError::Inconsistent("character sum is not rational".into()))?;
    Ok(Rational::new(BigInt::from(value), BigInt::from(q - 1)))
}

/// Degree |GL_n(F_q)| / Q_τ(q) of the characters of type τ.
pub fn type_degree(tau: &PartitionType, q: u32) -> Result<BigInt, OracleError> {
    let n = tau.size();
    let gl: BigInt = (0..n).map(|i| BigInt::from(q).pow(n) - BigInt::from(q).pow(i)).product();
    let quotient = tau.dim_quotient_poly().eval_i64(q as i64);
    if quotient.is_zero() || (&gl % &quotient) != BigInt::zero() {
        return Err(OracleError::Inconsistent("degree quotient is not exact".into()));
    }
    Ok(gl / quotient)
}

/// The type of a multipartition.
pub fn type_of(lambda: &[(u32, Partition)]) -> PartitionType {
    PartitionType::new(lambda.iter().map(|(_, p)| (p.clone(), 1)))
}

#[cfg(test)]
mod tests {
    use super::super::block::general_linear;
    use super::super::chartab::character_table;
    use super::super::matrix;
    use super::super::Caps;
    use super::*;
    use crate::exactalg::numtheory::pow_mod;

    #[test]
    fn documented_values() {
        let one = green_value(7, &[(0, Partition::row(1))], &[4]).unwrap();
        assert_eq!(one.as_integer(), Some(1));
        assert_eq!(green_value(7, &[(0, Partition::row(2))], &[1, 1]).unwrap_err(), OracleError::NotRegular);
        let t = PartitionType::from_parts(&[(&[1], 2)]);
        let exps = find_nice_tuple(2, 7, 1).unwrap();
        assert_eq!(c_check_oracle(1, 1, &t, 7, &exps).unwrap(), Rational::from_integer((-1).into()));
        let t2 = PartitionType::from_parts(&[(&[2], 1)]);
        assert_eq!(c_check_oracle(1, 1, &t2, 7, &exps).unwrap(), Rational::from_integer(1.into()));
        let exps13 = find_nice_tuple(2, 13, 2).unwrap();
        assert_eq!(c_check_oracle(2, 1, &t, 13, &exps13).unwrap(), Rational::from_integer(1.into()));
        assert_eq!(c_check_oracle(1, 1, &t, 7, &[1, 2]).unwrap_err(), OracleError::NotNice);
    }

    #[test]
    fn nice_tuples() {
        // eigenvalues as field values: 3^2 = 2 and 3^4 = 4 in F_7
        let e = find_nice_tuple(2, 7, 1).unwrap();
        assert_eq!(e, vec![1, 5]);
        assert_eq!(pow_mod(3, e[0] as u64, 7) * pow_mod(3, e[1] as u64, 7) % 7, 1);
        assert!(find_nice_tuple(3, 7, 3).is_none());
        let e = find_nice_tuple(3, 19, 3).unwrap();
        assert!(e.iter().all(|x| x % 3 == 0));
        assert!(is_nice(19, &e));
    }

    /// Every principal-series character of GL_2(F_q) agrees with a row of the
    /// table on the regular split torus, and (degree, values) separates them.
    fn check_gl2(q: u32) {
        let g = general_linear(q, 2, Caps::default()).unwrap();
        let t = character_table(&g).unwrap();
        let eps = crate::exactalg::numtheory::primitive_root(q as u64) as u32;
        let pairs: Vec<[u32; 2]> =
            (0..q - 1).flat_map(|a| (0..q - 1).map(move |b| [a, b])).filter(|[a, b]| a != b).collect();
        let elements: Vec<u32> = pairs
            .iter()
            .map(|[a, b]| {
                let d = [pow_mod(eps as u64, *a as u64, q as u64) as u32, pow_mod(eps as u64, *b as u64, q as u64) as u32];
                g.index_of(&matrix::diagonal(&d)).unwrap()
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        for tau in crate::combinat::enumerate_types(2) {
            let degree = type_degree(&tau, q).unwrap();
            for lam in multipartitions_of_type(&tau, q) {
                let values: Vec<CyclotomicInteger> = pairs
                    .iter()
                    .map(|mu| green_value(q, &lam, mu).unwrap().embed(t.exponent()).unwrap())
                    .collect();
                let row = (0..t.char_count()).find(|&c| {
                    BigInt::from(t.degree(c)) == degree
                        && elements.iter().zip(&values).all(|(&x, v)| &t.value_at(c, x) == v)
                });
                assert!(row.is_some(), "no row for {lam:?} at q={q}");
                assert!(seen.insert((degree.clone(), values)), "{lam:?} collides");
            }
        }
    }

    #[test]
    fn green_matches_gl2_3() {
        check_gl2(3);
    }

    #[test]
    fn green_matches_gl2_5() {
        check_gl2(5);
    }
}
