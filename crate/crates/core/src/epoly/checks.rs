use num_bigint::BigInt;

use super::assemble::{sector_epoly, stringy_epoly};
use super::EpolyError;
use crate::arith::count_order_elements;
use crate::exactalg::numtheory::divisors;
use crate::exactalg::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub n: u32,
    pub d: u32,
    pub g: u32,
    pub k: u64,
    pub polynomial: IntPolynomial,
    pub euler_characteristic: BigInt,
    pub entries: Vec<CheckEntry>,
}

impl StructuralReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| !e.pass)
    }
}

fn entry(name: &str, expected: String, actual: String) -> CheckEntry {
    CheckEntry { name: name.to_string(), pass: expected == actual, expected, actual }
}

/// Euler characteristic, degree and leading coefficient, mirror comparison and
/// the sector-sum identity for the stringy E-polynomial at (n, d, g, K).
pub fn structural_checks(n: u32, d: u32, g: u32, k: u64) -> Result<StructuralReport, EpolyError> {
    let e = stringy_epoly(n, d, g, k)?;
    let poly = e.poly.clone();
    let euler = poly.eval_i64(1);
    let mut entries = Vec::new();

    if n == 1 {
        entries.push(entry("euler", "1".into(), euler.to_string()));
    } else if g > 1 {
        entries.push(entry("euler", "0".into(), euler.to_string()));
    }

    let degree = (2 * g as i64 - 1) * (n as i64 * n as i64 - 1) - n as i64 + 1;
    entries.push(entry(
        "degree",
        degree.to_string(),
        poly.degree().map_or("-inf".into(), |x| x.to_string()),
    ));
    entries.push(entry(
        "leading-coefficient",
        "1".into(),
        poly.leading_coeff().cloned().unwrap_or_default().to_string(),
    ));

    let mirror = stringy_epoly(n, n / d, g, k)?;
    entries.push(entry("mirror", poly.to_string(), mirror.poly.to_string()));

    let mut sector_sum = IntPolynomial::zero();
    for a in divisors(d as u64) {
        let count = count_order_elements(d, 2 * g, a as u32)?;
        let sector = sector_epoly(n, d, g, k, a as u32)?;
        sector_sum = &sector_sum + &sector.poly.scale(&BigInt::from(count));
    }
    entries.push(entry("sector-sum", poly.to_string(), sector_sum.to_string()));

    Ok(StructuralReport {
        n,
        d,
        g,
        k: e.meta.k,
        polynomial: poly,
        euler_characteristic: euler,
        entries,
    })
}
