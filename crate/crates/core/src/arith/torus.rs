use std::fmt;

use super::ArithError;
use crate::exactalg::numtheory::{gcd, gcd_all};

/// Element of (Z/d)^{2g}, entries kept in [0, d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorusVector {
    modulus: u32,
    entries: Vec<u32>,
}

impl TorusVector {
    pub fn new(modulus: u32, entries: &[i64]) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(ArithError::OddLength(entries.len()));
        }
        let entries = entries
            .iter()
            .map(|&x| x.rem_euclid(modulus as i64) as u32)
            .collect();
        Ok(Self { modulus, entries })
    }

    pub fn zero(modulus: u32, genus: usize) -> Self {
        Self { modulus, entries: vec![0; 2 * genus] }
    }

    /// The vector (d/A, 0, …, 0), a fixed representative of order A.
    pub fn of_order(modulus: u32, genus: usize, order: u32) -> Result<Self, ArithError> {
        if order == 0 || !modulus.is_multiple_of(order) {
            return Err(ArithError::NotDivisor { d: modulus, a: order });
        }
        let mut v = Self::zero(modulus, genus);
        v.entries[0] = (modulus / order) % modulus;
        Ok(v)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn genus(&self) -> usize {
        self.entries.len() / 2
    }

    /// d / gcd(d, entries).
    pub fn order(&self) -> u32 {
        let mut all: Vec<u64> = self.entries.iter().map(|&x| x as u64).collect();
        all.push(self.modulus as u64);
        (self.modulus as u64 / gcd_all(&all)) as u32
    }

    pub fn scale(&self, u: u32) -> Self {
        let d = self.modulus as u64;
        Self {
            modulus: self.modulus,
            entries: self.entries.iter().map(|&x| (x as u64 * u as u64 % d) as u32).collect(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.entries.len() != other.entries.len() {
            return Err(ArithError::LengthMismatch(self.entries.len(), other.entries.len()));
        }
        Ok(())
    }

    /// Σ (a_{2i-1} b_{2i} - a_{2i} b_{2i-1}) mod d.
    pub fn symplectic(&self, other: &Self) -> Result<u32, ArithError> {
        self.compatible(other)?;
        let d = self.modulus as i64;
        let s: i64 = self
            .entries
            .chunks(2)
            .zip(other.entries.chunks(2))
            .map(|(x, y)| x[0] as i64 * y[1] as i64 - x[1] as i64 * y[0] as i64)
            .sum();
        Ok(s.rem_euclid(d) as u32)
    }

    /// Every vector of (Z/d)^{2g} in lexicographic order.
    pub fn all(modulus: u32, genus: usize) -> impl Iterator<Item = TorusVector> {
        let len = 2 * genus;
        let total = (modulus as u64).pow(len as u32);
        (0..total).map(move |mut idx| {
            let mut entries = vec![0u32; len];
            for e in entries.iter_mut().rev() {
                *e = (idx % modulus as u64) as u32;
                idx /= modulus as u64;
            }
            TorusVector { modulus, entries }
        })
    }
}

impl fmt::Display for TorusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) mod {}", e.join(","), self.modulus)
    }
}

impl fmt::Debug for TorusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Δ̂(a, b) reduced mod gcd(A, B): the symplectic sum of the rescaled coordinates a·A/d and b·B/d.
pub fn delta_hat(a: &TorusVector, b: &TorusVector) -> Result<u32, ArithError> {
    a.compatible(b)?;
    let d = a.modulus as i64;
    let (oa, ob) = (a.order() as i64, b.order() as i64);
    let m = gcd(oa as u64, ob as u64) as i64;
    let (sa, sb) = (d / oa, d / ob);
    let s: i64 = a
        .entries
        .chunks(2)
        .zip(b.entries.chunks(2))
        .map(|(x, y)| {
            let (x0, x1) = (x[0] as i64 / sa, x[1] as i64 / sa);
            let (y0, y1) = (y[0] as i64 / sb, y[1] as i64 / sb);
            (x0 * y1 - x1 * y0).rem_euclid(m)
        })
        .sum();
    Ok(s.rem_euclid(m) as u32)
}

/// Δ(a, b) = gcd(A, B, Δ̂(a, b)).
pub fn delta_pair(a: &TorusVector, b: &TorusVector) -> Result<u32, ArithError> {
    let h = delta_hat(a, b)?;
    let m = gcd(a.order() as u64, b.order() as u64);
    Ok(gcd(m, h as u64) as u32)
}

/// Number of vectors of order exactly A in (Z/d)^m.
pub fn count_order_elements(d: u32, m: u32, a: u32) -> Result<u64, ArithError> {
    if a == 0 || !d.is_multiple_of(a) {
        return Err(ArithError::NotDivisor { d, a });
    }
    let total: i128 = crate::exactalg::divisors(a as u64)
        .into_iter()
        .map(|e| crate::exactalg::mobius(a as u64 / e) as i128 * (e as i128).pow(m))
        .sum();
    Ok(total as u64)
}
