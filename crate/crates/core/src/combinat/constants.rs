use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::partition::Partition;
use super::types::{enumerate_types, PartitionType};
use super::CombinatError;
use crate::exactalg::numtheory::{divisors, factorial, mobius};
use crate::exactalg::Rational;

/// Number of permutations of m letters all of whose cycles have length exactly s.
fn cycle_class_count(m: u32, s: u32) -> BigInt {
    if !m.is_multiple_of(s) {
        return BigInt::zero();
    }
    let k = m / s;
    factorial(m as u64) / (BigInt::from(s).pow(k) * factorial(k as u64))
}

/// ν(τ, s) = ∏_λ c(m_λ, s).
pub fn nu(tau: &PartitionType, s: u32) -> BigInt {
    tau.multiplicities()
        .fold(BigInt::one(), |acc, m| acc * cycle_class_count(m, s))
}

fn theta_closed_form(tau: &PartitionType, n: u32, a: u32) -> BigInt {
    let den = tau.entries().fold(BigInt::one(), |acc, (p, m)| {
        acc * factorial(p.size() as u64).pow(a * m) * factorial(m as u64)
    });
    factorial(n as u64) / den
}

/// Count families {(λ, I_1, …, I_A)} partitioning {0, …, n-1} with type τ by
/// direct enumeration. Members are produced in order of their least element,
/// so each family is visited once.
pub fn theta_enumerate(tau: &PartitionType, n: u32, a: u32) -> u64 {
    let parts: Vec<(Partition, u32)> = tau.entries().map(|(p, m)| (p.clone(), m)).collect();
    let mut remaining: Vec<u32> = parts.iter().map(|(_, m)| *m).collect();
    let sizes: Vec<u32> = parts.iter().map(|(p, _)| p.size()).collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    fn subsets_of(pool: u32, k: u32, out: &mut Vec<u32>) {
        // all subsets of `pool` with exactly k elements
        let elems: Vec<u32> = (0..32).filter(|i| pool >> i & 1 == 1).collect();
        fn rec(elems: &[u32], k: u32, acc: u32, out: &mut Vec<u32>) {
            if k == 0 {
                out.push(acc);
                return;
            }
            if elems.len() < k as usize {
                return;
            }
            rec(&elems[1..], k - 1, acc | 1 << elems[0], out);
            rec(&elems[1..], k, acc, out);
        }
        rec(&elems, k, 0, out);
    }

    fn fill_blocks(free: u32, k: u32, blocks_left: u32, done: &mut dyn FnMut(u32)) {
        if blocks_left == 0 {
            done(free);
            return;
        }
        let mut choices = Vec::new();
        subsets_of(free, k, &mut choices);
        for c in choices {
            fill_blocks(free & !c, k, blocks_left - 1, done);
        }
    }

    fn go(free: u32, remaining: &mut Vec<u32>, sizes: &[u32], a: u32) -> u64 {
        if free == 0 {
            return u64::from(remaining.iter().all(|&m| m == 0));
        }
        let x = free.trailing_zeros();
        let rest = free & !(1 << x);
        let mut total = 0;
        for idx in 0..remaining.len() {
            if remaining[idx] == 0 {
                continue;
            }
            let k = sizes[idx];
            remaining[idx] -= 1;
            // x sits in block `home`; that block needs k-1 more elements, the others k each
            for home in 0..a {
                let mut with_x = Vec::new();
                subsets_of(rest, k - 1, &mut with_x);
                for c in with_x {
                    let after_home = rest & !c;
                    let mut leftovers = Vec::new();
                    let before = home;
                    let after = a - 1 - home;
                    fill_blocks(after_home, k, before + after, &mut |left| leftovers.push(left));
                    for left in leftovers {
                        total += go(left, remaining, sizes, a);
                    }
                }
            }
            remaining[idx] += 1;
        }
        total
    }

    go(full, &mut remaining, &sizes, a)
}

/// Largest n for which the closed form of ϑ is checked against enumeration.
pub const THETA_VALIDATED_MAX: u32 = 8;

/// Whether the closed form for ϑ agrees with enumeration for every n ≤ 8,
/// every A | n and every type of size n/A. Computed once.
pub fn theta_closed_form_validated() -> bool {
    static VALID: OnceLock<bool> = OnceLock::new();
    *VALID.get_or_init(|| {
        (1..=THETA_VALIDATED_MAX).all(|n| {
            divisors(n as u64).into_iter().all(|a| {
                let a = a as u32;
                enumerate_types(n / a).iter().all(|t| {
                    theta_closed_form(t, n, a) == BigInt::from(theta_enumerate(t, n, a))
                })
            })
        })
    })
}

/// ϑ(τ, n, A). Uses the closed form once it has been validated against
/// enumeration; falls back to enumeration for small n otherwise.
pub fn theta_count(tau: &PartitionType, n: u32, a: u32) -> Result<BigInt, CombinatError> {
    if a == 0 || a * tau.size() != n {
        return Err(CombinatError::SizeMismatch { n, a, size: tau.size() });
    }
    if theta_closed_form_validated() {
        Ok(theta_closed_form(tau, n, a))
    } else if n <= THETA_VALIDATED_MAX {
        Ok(BigInt::from(theta_enumerate(tau, n, a)))
    } else {
        Err(CombinatError::ClosedFormRejected)
    }
}

/// Č_{s,A,τ} = -(d_τ^A/(As))·(-s)^{#τ/s}·(#τ/s - 1)!·ν(τ,s)·ϑ(τ, A|τ|, A).
pub fn c_check(s: u32, a: u32, tau: &PartitionType) -> Result<Rational, CombinatError> {
    if s == 0 || a == 0 {
        return Err(CombinatError::ZeroParameter);
    }
    let sharp = tau.sharp();
    let nu_val = nu(tau, s);
    if !sharp.is_multiple_of(s) || nu_val.is_zero() {
        return Ok(Rational::zero());
    }
    let k = sharp / s;
    let theta = theta_count(tau, a * tau.size(), a)?;
    let sign_pow = BigInt::from(-(s as i64)).pow(k);
    let num = -(tau.d_tau().pow(a)) * sign_pow * factorial(k as u64 - 1) * nu_val * theta;
    Ok(Rational::new(num, BigInt::from(a) * BigInt::from(s)))
}

/// C_{s,A,τ} = Σ_{s | j | |τ|} μ(j/s) Č_{j,A,τ}.
pub fn c_const(s: u32, a: u32, tau: &PartitionType) -> Result<Rational, CombinatError> {
    if s == 0 || a == 0 {
        return Err(CombinatError::ZeroParameter);
    }
    let size = tau.size();
    if !size.is_multiple_of(s) {
        return Ok(Rational::zero());
    }
    let mut acc = Rational::zero();
    for j in divisors(size as u64) {
        let j = j as u32;
        if !j.is_multiple_of(s) {
            continue;
        }
        let mu = mobius((j / s) as u64);
        if mu != 0 {
            acc += c_check(j, a, tau)? * Rational::from_integer(BigInt::from(mu));
        }
    }
    Ok(acc)
}
