use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::numtheory::{divisors, euler_phi, lcm, mobius};
use super::{ExactError, IntPolynomial};

/// Reduction data for the ring Z[ζ_e] in the power basis 1, ζ, …, ζ^{φ(e)-1}.
#[derive(Debug)]
struct Basis {
    rank: usize,
    /// `powers[k]` is ζ^k written in the power basis, for 0 <= k < e.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_polynomial(e: u64) -> IntPolynomial {
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for d in divisors(e) {
        match mobius(e / d) {
            1 => num = &num * &IntPolynomial::q_pow_minus_one(d as usize),
            -1 => den = &den * &IntPolynomial::q_pow_minus_one(d as usize),
            _ => {}
        }
    }
    num.exact_divide(&den).expect("cyclotomic polynomial is exact")
}

fn basis(order: u32) -> Arc<Basis> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("basis cache").get(&order) {
        return b.clone();
    }
    let phi = cyclotomic_polynomial(order as u64);
    let rank = euler_phi(order as u64) as usize;
    let phi: Vec<i64> = phi.coeffs().iter().map(|c| c.to_i64().unwrap()).collect();
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![0i64; rank];
    cur[0] = 1;
    for _ in 0..order {
        powers.push(cur.clone());
        // multiply by ζ and reduce with ζ^rank = -Σ phi[i] ζ^i
        let top = cur[rank - 1];
        for i in (1..rank).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        cur[0] = -top * phi[0];
    }
    let b = Arc::new(Basis { rank, powers });
    cache
        .lock()
        .expect("basis cache")
        .insert(order, b.clone());
    b
}

/// Element of Z[ζ_e], stored in the power basis of length φ(e).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    order: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let rank = euler_phi(order as u64) as usize;
        Self { order, coeffs: vec![0; rank] }
    }

    pub fn from_int(order: u32, c: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = c;
        z
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    /// ζ_e^k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let b = basis(order);
        let k = k.rem_euclid(order as i64) as usize;
        Self { order, coeffs: b.powers[k].clone() }
    }

    /// Σ_k mult[k] ζ_e^k for an exponent histogram of length e.
    pub fn from_exponent_counts(order: u32, mult: &[i64]) -> Self {
        let b = basis(order);
        let mut coeffs = vec![0i64; b.rank];
        for (k, &m) in mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (c, &v) in coeffs.iter_mut().zip(&b.powers[k % order as usize]) {
                *c += m * v;
            }
        }
        Self { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(ExactError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { order: self.order, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let b = basis(self.order);
        let e = self.order as usize;
        let mut wide = vec![0i64; e];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                wide[(i + j) % e] += x * y;
            }
        }
        let mut coeffs = vec![0i64; b.rank];
        for (k, &m) in wide.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (c, &v) in coeffs.iter_mut().zip(&b.powers[k]) {
                *c += m * v;
            }
        }
        Ok(Self { order: self.order, coeffs })
    }

    pub fn scale(&self, c: i64) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Complex conjugation ζ -> ζ^{e-1}.
    pub fn conj(&self) -> Self {
        let e = self.order as usize;
        let mut mult = vec![0i64; e];
        for (k, &c) in self.coeffs.iter().enumerate() {
            mult[(e - k) % e] += c;
        }
        Self::from_exponent_counts(self.order, &mult)
    }

    /// Apply the Galois automorphism ζ -> ζ^u for u coprime to the order.
    pub fn galois(&self, u: u64) -> Self {
        let e = self.order as u64;
        let mut mult = vec![0i64; e as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            mult[((k as u64 * u) % e) as usize] += c;
        }
        Self::from_exponent_counts(self.order, &mult)
    }

    /// Re-express in Z[ζ_m] for a multiple m of the current order.
    pub fn embed(&self, m: u32) -> Result<Self, ExactError> {
        if !m.is_multiple_of(self.order) {
            return Err(ExactError::OrderMismatch(self.order, m));
        }
        let step = (m / self.order) as usize;
        let mut mult = vec![0i64; m as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            mult[k * step] += c;
        }
        Ok(Self::from_exponent_counts(m, &mult))
    }

    /// Bring two values into a common order (the lcm of both).
    pub fn unify(x: &Self, y: &Self) -> (Self, Self) {
        let m = lcm(x.order as u64, y.order as u64) as u32;
        (x.embed(m).expect("lcm multiple"), y.embed(m).expect("lcm multiple"))
    }

    /// Exact division by a rational integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, c: i64) -> Option<Self> {
        if c == 0 || self.coeffs.iter().any(|x| x % c != 0) {
            return None;
        }
        Some(Self { order: self.order, coeffs: self.coeffs.iter().map(|x| x / c).collect() })
    }

    /// If this element is ζ^k for some k, return k.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        let b = basis(self.order);
        (0..self.order).find(|&k| b.powers[k as usize] == self.coeffs)
    }

    /// Kind-dispatched entry point mirroring the operation table of the module.
    pub fn arith(kind: CycOp, x: &Self, y: &Self) -> Result<CycValue, ExactError> {
        Ok(match kind {
            CycOp::Add => CycValue::Element(x.add(y)?),
            CycOp::Mul => CycValue::Element(x.mul(y)?),
            CycOp::Conj => CycValue::Element(x.conj()),
            CycOp::Eq => {
                x.check(y)?;
                CycValue::Bool(x == y)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Mul,
    Conj,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycValue {
    Element(CyclotomicInteger),
    Bool(bool),
}

impl fmt::Debug for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                _ => format!("{c}*z{}^{k}", self.order),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_examples() {
        let i = CyclotomicInteger::zeta_pow(4, 1);
        assert_eq!(i.mul(&i).unwrap(), CyclotomicInteger::from_int(4, -1));
        let w = CyclotomicInteger::zeta_pow(3, 1);
        let w2 = CyclotomicInteger::zeta_pow(3, 2);
        assert_eq!(w.add(&w2).unwrap(), CyclotomicInteger::from_int(3, -1));
        assert_eq!(CyclotomicInteger::zeta_pow(5, 1).conj(), CyclotomicInteger::zeta_pow(5, 4));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CyclotomicInteger::one(3);
        let b = CyclotomicInteger::one(4);
        assert!(matches!(a.add(&b), Err(ExactError::OrderMismatch(3, 4))));
        let (a, b) = CyclotomicInteger::unify(&a, &b);
        assert_eq!(a.order(), 12);
        assert_eq!(a.mul(&b).unwrap(), CyclotomicInteger::one(12));
    }

    #[test]
    fn full_root_sums_vanish() {
        for e in 2..=30u32 {
            let all = CyclotomicInteger::from_exponent_counts(e, &vec![1; e as usize]);
            assert!(all.is_zero(), "order {e}");
        }
    }

    #[test]
    fn embedding_respects_roots() {
        let z = CyclotomicInteger::zeta_pow(6, 1).embed(12).unwrap();
        assert_eq!(z, CyclotomicInteger::zeta_pow(12, 2));
        assert_eq!(z.root_of_unity_exponent(), Some(2));
    }

    fn element(order: u32) -> impl Strategy<Value = CyclotomicInteger> {
        prop::collection::vec(-4i64..4, order as usize)
            .prop_map(move |m| CyclotomicInteger::from_exponent_counts(order, &m))
    }

    proptest! {
        #[test]
        fn ring_with_involution((x, y, z) in prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 9, 12, 15])
                                    .prop_flat_map(|e| (element(e), element(e), element(e)))) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().conj(), x.conj().mul(&y.conj()).unwrap());
            prop_assert_eq!(x.conj().conj(), x.clone());
            let left = x.mul(&y.add(&z).unwrap()).unwrap();
            let right = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        }
    }
}
