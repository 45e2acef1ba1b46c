use num_bigint::BigInt;

use super::CombinatError;
use crate::exactalg::numtheory::factorial;

/// Ordered equipartition of {1, …, n} into A blocks, stored as the
/// lexicographically least of its cyclic shifts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradingClass {
    pub n: u32,
    pub a: u32,
    pub blocks: Vec<Vec<u32>>,
}

impl GradingClass {
    fn shifted(blocks: &[Vec<u32>], k: usize) -> Vec<Vec<u32>> {
        let a = blocks.len();
        (0..a).map(|i| blocks[(i + k) % a].clone()).collect()
    }

    /// Canonical representative of the shift orbit of `blocks`.
    pub fn canonical(n: u32, blocks: Vec<Vec<u32>>) -> Self {
        let a = blocks.len();
        let best = (0..a)
            .map(|k| Self::shifted(&blocks, k))
            .min()
            .unwrap_or_default();
        Self { n, a: a as u32, blocks: best }
    }
}

fn check(n: u32, a: u32) -> Result<u32, CombinatError> {
    if a == 0 || n == 0 || !n.is_multiple_of(a) {
        return Err(CombinatError::NotDivisor { n, a });
    }
    Ok(n / a)
}

fn ordered_equipartitions(n: u32, a: u32) -> Vec<Vec<Vec<u32>>> {
    let k = (n / a) as usize;
    fn go(free: &[u32], k: usize, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        // choose the next block as any k-subset of the remaining elements
        let m = free.len();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let block: Vec<u32> = idx.iter().map(|&i| free[i]).collect();
            let rest: Vec<u32> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, &x)| x)
                .collect();
            cur.push(block);
            go(&rest, k, cur, out);
            cur.pop();
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if idx[i] < m - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let free: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    go(&free, k, &mut Vec::new(), &mut out);
    out
}

/// One representative per shift orbit of ordered A-block equipartitions of
/// {1, …, n}, in ascending order. Enumerates n!/((n/A)!^A) tuples, so keep n small.
pub fn grading_classes(n: u32, a: u32) -> Result<Vec<GradingClass>, CombinatError> {
    check(n, a)?;
    let mut out: Vec<GradingClass> = ordered_equipartitions(n, a)
        .into_iter()
        .filter_map(|blocks| {
            let c = GradingClass::canonical(n, blocks.clone());
            (c.blocks == blocks).then_some(c)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// |Υ_A| by Burnside over the shift group. A nontrivial shift moves every
/// block to a disjoint one, so only the identity has fixed points.
pub fn grading_class_count(n: u32, a: u32) -> Result<BigInt, CombinatError> {
    let k = check(n, a)?;
    Ok(factorial(n as u64) / (factorial(k as u64).pow(a) * BigInt::from(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::divisors;

    #[test]
    fn examples() {
        assert_eq!(grading_classes(2, 1).unwrap().len(), 1);
        assert_eq!(grading_classes(2, 2).unwrap().len(), 1);
        assert_eq!(grading_classes(4, 2).unwrap().len(), 3);
        assert!(grading_classes(4, 3).is_err());
    }

    #[test]
    fn orbit_count_matches_burnside() {
        for n in 1..=8u32 {
            for a in divisors(n as u64) {
                let a = a as u32;
                let tuples = ordered_equipartitions(n, a);
                // Burnside with fixed points counted directly
                let fixed: usize = (0..a as usize)
                    .map(|k| {
                        tuples
                            .iter()
                            .filter(|t| GradingClass::shifted(t, k) == **t)
                            .count()
                    })
                    .sum();
                assert_eq!(fixed % a as usize, 0);
                let classes = grading_classes(n, a).unwrap();
                assert_eq!(classes.len(), fixed / a as usize, "n={n} A={a}");
                assert_eq!(BigInt::from(classes.len()), grading_class_count(n, a).unwrap());
            }
        }
    }

    #[test]
    fn representatives_are_equipartitions() {
        for c in grading_classes(6, 3).unwrap() {
            let mut all: Vec<u32> = c.blocks.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, (1..=6).collect::<Vec<_>>());
            assert!(c.blocks.iter().all(|b| b.len() == 2));
            assert_eq!(GradingClass::canonical(6, GradingClass::shifted(&c.blocks, 1)), c);
        }
    }
}
