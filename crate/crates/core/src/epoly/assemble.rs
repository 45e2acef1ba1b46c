use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::EpolyError;
use crate::arith::{
    delta_pair, phi_g_closed, phi_st_closed, phi_stp_sum, reduce_k, TorusVector,
};
use crate::combinat::{c_const, enumerate_types, PartitionType};
use crate::exactalg::numtheory::{divisors, gcd};
use crate::exactalg::{CyclotomicInteger, IntPolynomial, Rational};

/// Which divisibility condition selects the s-range of a twisted count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SRangeConvention {
    /// e_A(η) | Δ(a,b) with e_A = As/gcd(As, n/B).
    #[default]
    EA,
    /// A | Δ(a,b)·gcd(A, n/(Bs)).
    Theorem,
}

impl SRangeConvention {
    fn admits(self, a: u64, b: u64, delta: u64, n: u64, s: u64) -> bool {
        match self {
            SRangeConvention::EA => {
                let e = a * s / gcd(a * s, n / b);
                delta.is_multiple_of(e)
            }
            SRangeConvention::Theorem => (delta * gcd(a, n / (b * s))).is_multiple_of(a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Stringy,
    Sector,
    Isotypic,
    PointCount,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Stringy => "stringy",
            Variant::Sector => "sector",
            Variant::Isotypic => "isotypic",
            Variant::PointCount => "point-count",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPolyMeta {
    pub n: u32,
    pub d: u32,
    pub g: u32,
    pub k_raw: u64,
    pub k: u64,
    pub variant: Variant,
    /// Sector order A, isotypic order, or (A, B) folded into the first for point counts.
    pub order: Option<u32>,
    pub shift: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPolyResult {
    pub poly: IntPolynomial,
    pub meta: EPolyMeta,
}

/// F = (n²/2)(2g-1)(1 - 1/A).
pub fn fermionic_shift(n: u32, g: u32, a: u32) -> Result<u64, EpolyError> {
    if a == 0 || !n.is_multiple_of(a) {
        return Err(EpolyError::InvalidParameters(format!("A = {a} must divide n = {n}")));
    }
    let (n, g, a) = (n as u64, g as u64, a as u64);
    let twice = n * (n / a) * (a - 1) * (2 * g - 1);
    debug_assert_eq!(twice % 2, 0);
    Ok(twice / 2)
}

fn validate(n: u32, d: u32, g: u32) -> Result<(), EpolyError> {
    if n == 0 || g == 0 || d == 0 || !n.is_multiple_of(d) {
        return Err(EpolyError::InvalidParameters(format!(
            "need n, g >= 1 and d | n (n = {n}, d = {d}, g = {g})"
        )));
    }
    Ok(())
}

fn rational_pow(x: u64, e: u32) -> Rational {
    Rational::from_integer(BigInt::from(x).pow(e))
}

/// Σ_τ weight_τ·Q_τ(q)^{exponent} / (q-1)^{den_power}, asserting the result is an integer polynomial.
fn assemble(
    terms: &[(IntPolynomial, Rational)],
    den_power: u32,
) -> Result<IntPolynomial, EpolyError> {
    let l = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
    let mut numerator = IntPolynomial::zero();
    for (poly, r) in terms {
        if r.is_zero() {
            continue;
        }
        let scaled = (r * Rational::from_integer(l.clone())).to_integer();
        numerator = &numerator + &poly.scale(&scaled);
    }
    let quotient = numerator
        .exact_divide(&IntPolynomial::q_minus_one().pow(den_power))
        .map_err(EpolyError::NonPolynomial)?;
    quotient.div_scalar_exact(&l).map_err(EpolyError::NonPolynomial)
}

/// Q_τ^{2g-1} for every type of size n, paired with a per-type weight.
fn type_terms(
    n: u32,
    g: u32,
    mut weight: impl FnMut(&PartitionType) -> Result<Rational, EpolyError>,
) -> Result<Vec<(IntPolynomial, Rational)>, EpolyError> {
    enumerate_types(n)
        .into_iter()
        .map(|tau| {
            let w = weight(&tau)?;
            let poly = if w.is_zero() {
                IntPolynomial::zero()
            } else {
                tau.dim_quotient_poly().pow(2 * g - 1)
            };
            Ok((poly, w))
        })
        .collect()
}

/// The stringy E-polynomial of the SL_n character variety quotiented by F_d with torsion K.
pub fn stringy_epoly(n: u32, d: u32, g: u32, k: u64) -> Result<EPolyResult, EpolyError> {
    validate(n, d, g)?;
    let kr = reduce_k(k, d as u64);
    let mut phis = Vec::new();
    for s in divisors(n as u64) {
        let phi = phi_g_closed(n as u64, d as u64, s, kr, g)?;
        phis.push((s, phi * rational_pow(s, 2 * g)));
    }
    let terms = type_terms(n, g, |tau| {
        let mut acc = Rational::zero();
        for (s, w) in &phis {
            let c = c_const(*s as u32, 1, tau)?;
            if !c.is_zero() {
                acc += c * w;
            }
        }
        Ok(acc)
    })?;
    let poly = assemble(&terms, 2 * g - 2 + n)?;
    Ok(EPolyResult {
        poly,
        meta: EPolyMeta { n, d, g, k_raw: k, k: kr, variant: Variant::Stringy, order: None, shift: 0 },
    })
}

/// Contribution of a twisted sector of order A, Fermionic shift included.
pub fn sector_epoly(n: u32, d: u32, g: u32, k: u64, a: u32) -> Result<EPolyResult, EpolyError> {
    validate(n, d, g)?;
    if a == 0 || !d.is_multiple_of(a) {
        return Err(EpolyError::InvalidParameters(format!("A = {a} must divide d = {d}")));
    }
    let kr = reduce_k(k, d as u64);
    let mut phis = Vec::new();
    for s in divisors(n as u64).into_iter().filter(|s| s % a as u64 == 0) {
        let phi = phi_st_closed(a as u64, n as u64, d as u64, s, kr, g)?;
        phis.push((s, phi * rational_pow(s, 2 * g)));
    }
    let terms = type_terms(n, g, |tau| {
        let mut acc = Rational::zero();
        for (s, w) in &phis {
            if w.is_zero() {
                continue;
            }
            acc += c_const(*s as u32, 1, tau)? * w;
        }
        Ok(acc)
    })?;
    let poly = assemble(&terms, 2 * g - 2 + n)?;
    Ok(EPolyResult {
        poly,
        meta: EPolyMeta {
            n,
            d,
            g,
            k_raw: k,
            k: kr,
            variant: Variant::Sector,
            order: Some(a),
            shift: fermionic_shift(n, g, a)?,
        },
    })
}

/// S_{a,b}: the polynomial counting F_q-points of the Frobenius-twisted a-fixed locus.
pub fn point_count_poly(
    n: u32,
    g: u32,
    a: &TorusVector,
    b: &TorusVector,
    convention: SRangeConvention,
) -> Result<IntPolynomial, EpolyError> {
    let d = a.modulus();
    validate(n, d, g)?;
    if a.genus() != g as usize {
        return Err(EpolyError::InvalidParameters(format!(
            "torus vectors have genus {} but g = {g}",
            a.genus()
        )));
    }
    let delta = delta_pair(a, b)? as u64;
    let (oa, ob) = (a.order() as u64, b.order() as u64);
    let (n64, m) = (n as u64, n / a.order());
    let s_range: Vec<u64> = divisors(n64 / ob)
        .into_iter()
        .filter(|&s| (n64 / oa) % s == 0 && convention.admits(oa, ob, delta, n64, s))
        .collect();
    let terms: Vec<(IntPolynomial, Rational)> = enumerate_types(m)
        .into_iter()
        .map(|tau| {
            let mut w = Rational::zero();
            for &s in &s_range {
                w += c_const(s as u32, oa as u32, &tau)? * rational_pow(s, 2 * g);
            }
            w *= Rational::from_integer(BigInt::from(oa));
            let poly = if w.is_zero() {
                IntPolynomial::zero()
            } else {
                tau.dim_quotient_poly().pow(oa as u32 * (2 * g - 1))
            };
            Ok((poly, w))
        })
        .collect::<Result<_, EpolyError>>()?;
    assemble(&terms, 2 * g - 2 + n)
}

/// (q^F/d^{2g})·Σ_b P_b(q)·ξ_a(b)^K for arbitrary per-b polynomials P_b, the
/// definitional assembly of a sector contribution from twisted counts.
pub fn sector_epoly_from_counts(
    n: u32,
    g: u32,
    k: u64,
    a: &TorusVector,
    mut count: impl FnMut(&TorusVector) -> Result<IntPolynomial, EpolyError>,
) -> Result<IntPolynomial, EpolyError> {
    let d = a.modulus();
    validate(n, d, g)?;
    let mut by_exponent = vec![IntPolynomial::zero(); d as usize];
    for b in TorusVector::all(d, g as usize) {
        let e = (a.symplectic(&b)? as u64 * k % d as u64) as usize;
        by_exponent[e] = &by_exponent[e] + &count(&b)?;
    }
    let top = by_exponent.iter().filter_map(|p| p.degree()).max();
    let mut coeffs = Vec::new();
    for deg in 0..=top.unwrap_or(0) {
        let mut hist = Vec::with_capacity(d as usize);
        for p in &by_exponent {
            hist.push(p.coeff(deg).to_i64().ok_or(EpolyError::IrrationalSum)?);
        }
        let value = CyclotomicInteger::from_exponent_counts(d, &hist)
            .as_integer()
            .ok_or(EpolyError::IrrationalSum)?;
        coeffs.push(BigInt::from(value));
    }
    let total = IntPolynomial::from_coeffs(coeffs)
        .div_scalar_exact(&BigInt::from(d).pow(2 * g))
        .map_err(EpolyError::NonPolynomial)?;
    Ok(total.shift(fermionic_shift(n, g, a.order())? as usize))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicResult {
    pub via_phi_stp: EPolyResult,
    pub via_mirror_sector: EPolyResult,
    pub agree: bool,
}

/// Isotypic piece computed from the Φ_stp divisor sums.
pub fn isotypic_epoly_via_phi_stp(
    n: u32,
    d: u32,
    g: u32,
    k: u64,
    xi_order: u32,
) -> Result<EPolyResult, EpolyError> {
    validate(n, d, g)?;
    if xi_order == 0 || !(n / d).is_multiple_of(xi_order) {
        return Err(EpolyError::InvalidParameters(format!(
            "character order {xi_order} must divide n/d = {}",
            n / d
        )));
    }
    let mut phis = Vec::new();
    for s in divisors(n as u64) {
        let phi = phi_stp_sum(xi_order as u64, n as u64, s, d as u64, k, g)?;
        phis.push((s, phi * rational_pow(s, 2 * g)));
    }
    let terms = type_terms(n, g, |tau| {
        let mut acc = Rational::zero();
        for (s, w) in &phis {
            if !w.is_zero() {
                acc += c_const(*s as u32, 1, tau)? * w;
            }
        }
        Ok(acc)
    })?;
    let poly = assemble(&terms, 2 * g - 2 + n)?;
    Ok(EPolyResult {
        poly,
        meta: EPolyMeta {
            n,
            d,
            g,
            k_raw: k,
            k: reduce_k(k, d as u64),
            variant: Variant::Isotypic,
            order: Some(xi_order),
            shift: fermionic_shift(n, g, xi_order)?,
        },
    })
}

/// Both routes to the ξ-isotypic piece: the Φ_stp sum, and the sector of order
/// ord ξ on the mirror side F_{n/d} with torsion (n/d)²K.
pub fn isotypic_epoly(n: u32, d: u32, g: u32, k: u64, xi_order: u32) -> Result<IsotypicResult, EpolyError> {
    let first = isotypic_epoly_via_phi_stp(n, d, g, k, xi_order)?;
    let mirror = n / d;
    let second = sector_epoly(n, mirror, g, (mirror as u64).pow(2) * k, xi_order)?;
    let agree = first.poly == second.poly;
    Ok(IsotypicResult { via_phi_stp: first, via_mirror_sector: second, agree })
}
