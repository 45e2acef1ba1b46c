use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::torus::{delta_pair, TorusVector};
use super::ArithError;
use crate::exactalg::numtheory::{divisors, factorize, gcd, mobius, p_valuation, sigma};
use crate::exactalg::{CyclotomicInteger, Rational};

fn rat(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn rpow(base: u64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn require(divisor: u64, n: u64) -> Result<(), ArithError> {
    if divisor == 0 || !n.is_multiple_of(divisor) {
        Err(ArithError::NotDivisor { d: n as u32, a: divisor as u32 })
    } else {
        Ok(())
    }
}

fn check_genus(g: u32) -> Result<(), ArithError> {
    if g == 0 {
        Err(ArithError::ZeroGenus)
    } else {
        Ok(())
    }
}

/// Reduce a torsion multiplier into [1, d].
pub fn reduce_k(k: u64, d: u64) -> u64 {
    match k % d {
        0 => d,
        r => r,
    }
}

fn vp(p: u64, x: u64) -> u32 {
    p_valuation(p, x).expect("p is a prime divisor of n")
}

/// min(v_p(s), v_p(n) - v_p(d), v_p(d), v_p(n) - v_p(s), v_p(K)).
pub fn phi_exponent(p: u64, n: u64, d: u64, s: u64, k: u64) -> Result<u32, ArithError> {
    require(d, n)?;
    require(s, n)?;
    if k == 0 {
        return Err(ArithError::ZeroParameter);
    }
    p_valuation(p, n).map_err(|_| ArithError::NotPrime(p))?;
    let (vn, vd, vs, vk) = (vp(p, n), vp(p, d), vp(p, s), vp(p, k));
    Ok([vs, vn - vd, vd, vn - vs, vk].into_iter().min().unwrap())
}

/// Φ_g as a product of local factors over the primes dividing n.
pub fn phi_g_closed(n: u64, d: u64, s: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    let mut acc = Rational::one();
    for (p, _) in factorize(n) {
        let e = phi_exponent(p, n, d, s, k)?;
        let inv = rat(1, p.pow(2 * g - 1));
        let num = (int(p as i64) - &inv) * rpow(p, e) + inv - int(1);
        acc *= num / int(p as i64 - 1);
    }
    Ok(acc)
}

/// Φ_g as a Möbius-weighted sum over the orders A | gcd(s, d) allowed by the torsion.
pub fn phi_g_sum(n: u64, d: u64, s: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    require(d, n)?;
    require(s, n)?;
    let k = reduce_k(k, d);
    let gns = gcd(d, n / s);
    let mut acc = Rational::zero();
    for a in divisors(gcd(s, d)) {
        if !(k * d / a).is_multiple_of(gns) {
            continue;
        }
        let top = rpow(gcd(d, n * a / s), 2 * g - 1) * int(a as i64) * int(gns as i64);
        for d1 in divisors(a) {
            let mu = mobius(d1);
            if mu != 0 {
                acc += &top * int(mu) / (rpow(d, 2 * g) * rpow(d1, 2 * g));
            }
        }
    }
    Ok(acc)
}

fn check_st(a: u64, n: u64, d: u64, s: u64) -> Result<(), ArithError> {
    require(d, n)?;
    require(s, n)?;
    require(a, d)?;
    require(a, s)
}

/// Φ_st(A, n, d, s, K): (gcd(d, nA/s)/(dA))^{2g-1}·gcd(d, n/s)/d when gcd(d, n/s) | Kd/A, else 0.
pub fn phi_st_closed(a: u64, n: u64, d: u64, s: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    check_st(a, n, d, s)?;
    let k = reduce_k(k, d);
    let gns = gcd(d, n / s);
    if !(k * d / a).is_multiple_of(gns) {
        return Ok(Rational::zero());
    }
    let base = rat(gcd(d, n * a / s), d * a);
    Ok(num_traits::pow(base, (2 * g - 1) as usize) * rat(gns, d))
}

/// Φ_st as the double divisor sum over B | gcd(nA/s, d) and d₂ | B.
pub fn phi_st_sum(a: u64, n: u64, d: u64, s: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    check_st(a, n, d, s)?;
    let k = reduce_k(k, d);
    let mut acc = Rational::zero();
    for b in divisors(gcd(n * a / s, d)) {
        for d2 in divisors(b) {
            let mu = mobius(d2);
            if mu == 0 {
                continue;
            }
            let g_ad = gcd(a, n * a * d2 / (b * s));
            if !((k * d / b) * gcd(a, d2)).is_multiple_of(g_ad) {
                continue;
            }
            acc += rpow(b, 2 * g) * int(g_ad as i64) * int(mu)
                / (rpow(d, 2 * g) * rpow(a, 2 * g) * rpow(d2, 2 * g));
        }
    }
    Ok(acc)
}

/// Raw lattice values of Φ_st for K = 1, …, d, from a direct sum over b ∈ (Z/d)^{2g}
/// with a = (d/A, 0, …, 0). Membership in F_{a,s}: B | nA/s and A | Δ(a,b)·gcd(A, nA/(Bs)).
pub fn phi_st_lattice_all_k(a: u64, n: u64, d: u64, s: u64, g: u32) -> Result<Vec<Rational>, ArithError> {
    check_genus(g)?;
    check_st(a, n, d, s)?;
    let av = TorusVector::of_order(d as u32, g as usize, a as u32)?;
    let mut hist = vec![0i64; d as usize];
    for b in TorusVector::all(d as u32, g as usize) {
        let ob = b.order() as u64;
        if !(n * a / s).is_multiple_of(ob) {
            continue;
        }
        let delta = delta_pair(&av, &b)? as u64;
        if !(delta * gcd(a, n * a / (ob * s))).is_multiple_of(a) {
            continue;
        }
        hist[av.symplectic(&b)? as usize] += 1;
    }
    let den = rpow(d, 2 * g) * rpow(a, 2 * g - 1);
    (1..=d)
        .map(|k| {
            let mut twisted = vec![0i64; d as usize];
            for (e, &c) in hist.iter().enumerate() {
                twisted[(e as u64 * k % d) as usize] += c;
            }
            let total = CyclotomicInteger::from_exponent_counts(d as u32, &twisted);
            let value = total.as_integer().ok_or(ArithError::IrrationalLatticeSum)?;
            Ok(int(value) / &den)
        })
        .collect()
}

pub fn phi_st_lattice(a: u64, n: u64, d: u64, s: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    let k = reduce_k(k, d);
    Ok(phi_st_lattice_all_k(a, n, d, s, g)?.swap_remove(k as usize - 1))
}

/// Φ̌(B, n, d, s, K) = δ_{B | dn/s}·Σ_{d₁ | d, s} μ(d₁)/(d^{2g} d₁^{2g-1})·Γ(gcd(s/d₁, n/B, d/d₁, dn/(Bs))),
/// with Γ the divisor sum. Independent of K.
pub fn phi_check(b: u64, n: u64, d: u64, s: u64, _k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    require(d, n)?;
    require(s, n)?;
    require(b, n)?;
    if !(d * n / s).is_multiple_of(b) {
        return Ok(Rational::zero());
    }
    let mut acc = Rational::zero();
    for d1 in divisors(gcd(d, s)) {
        let mu = mobius(d1);
        if mu == 0 {
            continue;
        }
        let m = gcd(gcd(s / d1, n / b), gcd(d / d1, d * n / (b * s)));
        acc += int(mu) * int(sigma(m) as i64) / (rpow(d, 2 * g) * rpow(d1, 2 * g - 1));
    }
    Ok(acc)
}

/// Φ_stp(B0, n, s, d, K) = Σ_{d₂ | B | n, B·B0 | n·gcd(B0, d₂)} (dB/(n d₂))^{2g}·μ(d₂)·Φ̌(B, n, d, s, K).
pub fn phi_stp_sum(b0: u64, n: u64, s: u64, d: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    check_genus(g)?;
    require(d, n)?;
    require(s, n)?;
    require(b0, n / d)?;
    let mut acc = Rational::zero();
    for b in divisors(n) {
        let check = phi_check(b, n, d, s, k, g)?;
        if check.is_zero() {
            continue;
        }
        for d2 in divisors(b) {
            let mu = mobius(d2);
            if mu == 0 || !(n * gcd(b0, d2)).is_multiple_of(b * b0) {
                continue;
            }
            acc += num_traits::pow(rat(d * b, n * d2), (2 * g) as usize) * int(mu) * &check;
        }
    }
    Ok(acc)
}

/// The mirrored value [B0 | s]·Φ_st(B0, n, n/d, s, (n/d)²K) that Φ_stp must equal.
pub fn phi_stp_closed(b0: u64, n: u64, s: u64, d: u64, k: u64, g: u32) -> Result<Rational, ArithError> {
    require(d, n)?;
    require(b0, n / d)?;
    if !s.is_multiple_of(b0) {
        return Ok(Rational::zero());
    }
    let mirror = n / d;
    phi_st_closed(b0, n, mirror, s, mirror * mirror * k, g)
}
