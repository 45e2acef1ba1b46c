use std::collections::BTreeMap;
use std::sync::Arc;

use super::field::{make_field, FiniteField};
use super::matrix::{self, Matrix};
use super::{Caps, OracleError};
use crate::exactalg::numtheory::{gcd, primitive_root};

/// A twisted coset {x ∈ SL_n(F_{q^B}) : Frob(x) = β·x} together with the
/// field its entries live in.
#[derive(Clone, Debug)]
pub struct LangCoset {
    pub field: Arc<FiniteField>,
    pub elements: Vec<Matrix>,
}

fn order_mod(beta: u32, q: u32) -> u32 {
    let mut x = beta % q;
    let mut k = 1;
    while x != 1 {
        x = (x as u64 * beta as u64 % q as u64) as u32;
        k += 1;
    }
    k
}

/// Some c with c^{q-1} = β in F_{q^B}; exists because β^B = 1.
fn hilbert_root(f: &FiniteField, q: u32, beta: u32) -> Option<u32> {
    (1..f.size()).find(|&c| f.pow(c, q as u64 - 1) == beta)
}

/// Enumerate c·x0 over x0 ∈ M_n(F_q) supported on `support`, keeping those of
/// determinant 1 in F_{q^B}.
fn graded_piece(
    f: &FiniteField,
    n: usize,
    q: u32,
    c: u32,
    support: &[usize],
    cap: u64,
) -> Result<Vec<Matrix>, OracleError> {
    let total = (q as u64).checked_pow(support.len() as u32).filter(|&t| t <= cap);
    let Some(total) = total else {
        return Err(OracleError::CapExceeded { what: "coset enumeration", limit: cap });
    };
    let mut out = Vec::new();
    let mut x = vec![0u32; n * n];
    for idx in 0..total {
        let mut r = idx;
        for &pos in support {
            x[pos] = f.mul(c, (r % q as u64) as u32);
            r /= q as u64;
        }
        if matrix::det(f, n, &x) == 1 {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// {x ∈ SL_n(F_{q^B}) : Frob(x) = β·x} for a scalar β ∈ F_q^× of order B.
/// Its size is |SL_n(F_q)|.
pub fn lang_coset(n: u32, q: u32, b_order: u32, beta: u32, caps: Caps) -> Result<LangCoset, OracleError> {
    if n == 0 || beta.is_multiple_of(q) || order_mod(beta, q) != b_order {
        return Err(OracleError::InvalidParameters(format!("{beta} does not have order {b_order} mod {q}")));
    }
    let field = make_field(q, b_order)?;
    let c = hilbert_root(&field, q, beta).ok_or(OracleError::NoSuchGamma)?;
    let n = n as usize;
    let support: Vec<usize> = (0..n * n).collect();
    let elements = graded_piece(&field, n, q, c, &support, caps.max_pair_iterations)?;
    Ok(LangCoset { field, elements })
}

/// Direct count of the Frobenius-twisted a-fixed locus, with its per-grading
/// tallies. Keys are the discrete logs of (t_1, …, t_n), t_1 = 1, of the
/// torus element realising the a-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCount {
    pub total: u64,
    pub by_grading: BTreeMap<Vec<u32>, u64>,
}

/// Count classes [(x, y)] with [x, y]·z = 1 that are fixed by the scalar
/// action of a and by b^{-1}∘Frob, by enumerating pairs in Lang cosets and
/// dividing by |T(F_q)| = (q-1)^{n-1}. Genus 1 only; `z` lists the diagonal
/// entries of a regular element of SL_n(F_q), and a, b are vectors in (Z/d)².
pub fn twisted_sector_counts(
    n: u32,
    q: u32,
    d: u32,
    a: &[u32],
    b: &[u32],
    z: &[u32],
    caps: Caps,
) -> Result<TwistedCount, OracleError> {
    let nn = n as usize;
    if a.len() != 2 || b.len() != 2 {
        return Err(OracleError::InvalidParameters("only genus 1 is enumerable".into()));
    }
    if d == 0 || !n.is_multiple_of(d) || !(q - 1).is_multiple_of(n) || z.len() != nn {
        return Err(OracleError::InvalidParameters(format!("n={n}, d={d}, q={q}, |z|={}", z.len())));
    }
    let eps = primitive_root(q as u64) as u32;
    let fq = make_field(q, 1)?;
    let zeta = fq.pow(eps, ((q - 1) / d) as u64);
    let root = |k: u32| fq.pow(zeta, (k % d) as u64);
    let alpha = [root(a[0]), root(a[1])];
    let beta = [root(b[0]), root(b[1])];
    let b_order = (d as u64 / gcd(gcd(b[0] as u64, b[1] as u64), d as u64)) as u32;
    let field = make_field(q, b_order)?;
    let c = [
        hilbert_root(&field, q, beta[0]).ok_or(OracleError::NoSuchGamma)?,
        hilbert_root(&field, q, beta[1]).ok_or(OracleError::NoSuchGamma)?,
    ];
    let mut dz: Vec<u32> = z.iter().map(|&v| v % q).collect();
    dz.sort_unstable();
    if dz.windows(2).any(|w| w[0] == w[1]) || dz[0] == 0 {
        return Err(OracleError::NotRegular);
    }
    let z_inv = matrix::inverse(&field, nn, &matrix::diagonal(z)).ok_or(OracleError::Singular)?;

    let torus = (q as u64 - 1).pow(n - 1);
    let mut by_grading = BTreeMap::new();
    let mut budget = caps.max_pair_iterations;
    for t_index in 0..torus {
        let mut logs = vec![0u32; nn];
        let mut r = t_index;
        for l in logs.iter_mut().skip(1) {
            *l = (r % (q as u64 - 1)) as u32;
            r /= q as u64 - 1;
        }
        let t: Vec<u32> = logs.iter().map(|&l| fq.pow(eps, l as u64)).collect();
        // t x t^{-1} = α x allows entry (i, j) iff t_i = α t_j
        let support = |al: u32| -> Vec<usize> {
            (0..nn * nn).filter(|&p| t[p / nn] == fq.mul(al, t[p % nn])).collect()
        };
        // the sparser coordinate first; an empty piece skips the other
        let (sx, sy) = (support(alpha[0]), support(alpha[1]));
        let piece = |i: usize, s: &[usize]| graded_piece(&field, nn, q, c[i], s, caps.max_pair_iterations);
        let (xs, ys) = if sx.len() <= sy.len() {
            let xs = piece(0, &sx)?;
            if xs.is_empty() {
                continue;
            }
            (xs, piece(1, &sy)?)
        } else {
            let ys = piece(1, &sy)?;
            if ys.is_empty() {
                continue;
            }
            (piece(0, &sx)?, ys)
        };
        let pairs = xs.len() as u64 * ys.len() as u64;
        if pairs > budget {
            return Err(OracleError::CapExceeded { what: "pair iterations", limit: caps.max_pair_iterations });
        }
        budget -= pairs;
        if pairs == 0 {
            continue;
        }
        let count = solution_pairs(&field, nn, &xs, &ys, &z_inv);
        if count > 0 {
            by_grading.insert(logs, count);
        }
    }
    let raw: u64 = by_grading.values().sum();
    let divisor = (q as u64 - 1).pow(n - 1);
    if by_grading.values().any(|v| v % divisor != 0) {
        return Err(OracleError::NonExactQuotient);
    }
    for v in by_grading.values_mut() {
        *v /= divisor;
    }
    Ok(TwistedCount { total: raw / divisor, by_grading })
}

/// twisted_sector_counts, total only.
pub fn twisted_sector_count(
    n: u32,
    q: u32,
    d: u32,
    a: &[u32],
    b: &[u32],
    z: &[u32],
    caps: Caps,
) -> Result<u64, OracleError> {
    Ok(twisted_sector_counts(n, q, d, a, b, z, caps)?.total)
}

/// #{(x, y) : x y = z^{-1} y x}, split over threads by x.
fn solution_pairs(f: &FiniteField, n: usize, xs: &[Matrix], ys: &[Matrix], z_inv: &[u32]) -> u64 {
    let shifted: Vec<Matrix> = ys.iter().map(|y| matrix::mul(f, n, z_inv, y)).collect();
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(xs.len());
    let chunk = xs.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|part| {
                let shifted = &shifted;
                scope.spawn(move || {
                    let (mut lhs, mut rhs) = (vec![0u32; n * n], vec![0u32; n * n]);
                    let mut hits = 0u64;
                    for x in part {
                        for (y, zy) in ys.iter().zip(shifted) {
                            matrix::mul_into(f, n, x, y, &mut lhs);
                            matrix::mul_into(f, n, zy, x, &mut rhs);
                            hits += u64::from(lhs == rhs);
                        }
                    }
                    hits
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}
