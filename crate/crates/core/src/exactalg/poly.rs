use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Dense univariate polynomial in `q` with arbitrary-precision integer
/// coefficients, lowest degree first. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    /// `q - 1`.
    pub fn q_minus_one() -> Self {
        Self::from_coeffs(vec![BigInt::from(-1), BigInt::one()])
    }

    /// `q^h - 1`.
    pub fn q_pow_minus_one(h: usize) -> Self {
        let mut c = vec![BigInt::zero(); h + 1];
        c[0] = BigInt::from(-1);
        c[h] += BigInt::one();
        Self::from_coeffs(c)
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divide every coefficient by `c`, failing unless each division is exact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Result<Self, ExactError> {
        if c.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (quo, rem) = x.div_rem(c);
            if !rem.is_zero() {
                return Err(ExactError::NonzeroRemainder);
            }
            out.push(quo);
        }
        Ok(Self::from_coeffs(out))
    }

    /// Long division `num = den * quotient + remainder` over the integers.
    /// Fails if a leading-coefficient division is inexact.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self), ExactError> {
        let dd = den.degree().ok_or(ExactError::DivisionByZero)?;
        let lead = den.leading_coeff().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quo = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(ExactError::NonzeroRemainder);
            }
            for (i, dc) in den.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quo[k] = c;
        }
        Ok((Self::from_coeffs(quo), Self::from_coeffs(rem)))
    }

    pub fn exact_divide(&self, den: &Self) -> Result<Self, ExactError> {
        let (quo, rem) = self.div_rem(den)?;
        if rem.is_zero() {
            Ok(quo)
        } else {
            Err(ExactError::NonzeroRemainder)
        }
    }

    /// Render with the substitution `q -> uv`, e.g. `u^2v^2 + 4uv + 1`.
    pub fn to_uv_string(&self) -> String {
        self.render(|k| match k {
            0 => String::new(),
            1 => "uv".to_string(),
            _ => format!("u^{k}v^{k}"),
        })
    }

    fn render(&self, var: impl Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let v = var(k);
            if v.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                out.push_str(&v);
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(|k| match k {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{k}"),
        });
        f.write_str(&s)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn divide_examples() {
        let qm1 = IntPolynomial::q_minus_one();
        assert_eq!(p(&[-1, 0, 1]).exact_divide(&qm1).unwrap(), p(&[1, 1]));
        assert_eq!(qm1.exact_divide(&qm1).unwrap(), IntPolynomial::one());
        // (q-1)^2 (q^2+3q+1), expanded by hand: q^4 + q^3 - 4q^2 + q + 1
        let num = p(&[1, 1, -4, 1, 1]);
        assert_eq!(num, &qm1.pow(2) * &p(&[1, 3, 1]));
        assert_eq!(num.exact_divide(&qm1.pow(2)).unwrap(), p(&[1, 3, 1]));
    }

    #[test]
    fn remainder_is_reported() {
        let err = p(&[1, 0, 1]).exact_divide(&IntPolynomial::q_minus_one());
        assert!(matches!(err, Err(ExactError::NonzeroRemainder)));
        assert!(matches!(
            p(&[1]).exact_divide(&IntPolynomial::zero()),
            Err(ExactError::DivisionByZero)
        ));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[3, 0, 2, 0, 0]).degree(), Some(2));
        assert_eq!(p(&[1, 4, 1]).to_string(), "q^2 + 4q + 1");
        assert_eq!(p(&[1, 4, 1]).to_uv_string(), "u^2v^2 + 4uv + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-q");
    }

    proptest! {
        #[test]
        fn product_divides_back(a in prop::collection::vec(-50i64..50, 0..6),
                                b in prop::collection::vec(-50i64..50, 1..5)) {
            let a = p(&a);
            let b = p(&b);
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            let r = prod.exact_divide(&b).unwrap();
            prop_assert_eq!(&(&b * &r) - &prod, IntPolynomial::zero());
            prop_assert_eq!(r, a);
        }

        #[test]
        fn eval_is_ring_map(a in prop::collection::vec(-9i64..9, 0..5),
                            b in prop::collection::vec(-9i64..9, 0..5),
                            x in -5i64..5) {
            let (a, b) = (p(&a), p(&b));
            prop_assert_eq!((&a * &b).eval_i64(x), a.eval_i64(x) * b.eval_i64(x));
            prop_assert_eq!((&a + &b).eval_i64(x), a.eval_i64(x) + b.eval_i64(x));
        }
    }
}
