use std::fmt;
use std::sync::Arc;

use super::OracleError;
use crate::exactalg::numtheory::{factorize, is_prime};

/// Largest field order accepted by [`make_field`].
pub const MAX_FIELD_ORDER: u64 = 1_000_000;

/// Fields up to this order carry a full addition table.
const ADD_TABLE_MAX: u32 = 1024;

/// The finite field F_{p^k}.
///
/// Elements are `u32` codes: the element Σ c_i x^i (0 <= c_i < p, i < k) of
/// F_p[x]/(f) has code Σ c_i p^i. So 0 and 1 are zero and one, and the prime
/// subfield is the codes 0..p. Multiplication goes through discrete log
/// tables relative to a fixed primitive element.
pub struct FiniteField {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    primitive: u32,
    /// exp[i] = primitive^i for 0 <= i < 2(size-1), doubled to skip a reduction.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?}, primitive {})", self.p, self.k, self.modulus, self.primitive)
    }
}

/// Dense polynomials over F_p, low degree first, used only while building a field.
mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = crate::exactalg::numtheory::inv_mod(m[dm], p);
        while r.len() > dm {
            let c = r[r.len() - 1] * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's test for a monic polynomial of degree k.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = (f.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        let primes: Vec<u64> =
            crate::exactalg::numtheory::factorize(k).into_iter().map(|(r, _)| r).collect();
        // x^{p^k} == x mod f
        let mut h = x.clone();
        for _ in 0..k {
            h = powmod(&h, p, f, p);
        }
        if rem(&sub(&h, &x, p), f, p).iter().any(|&c| c != 0) {
            return false;
        }
        for r in primes {
            let mut h = x.clone();
            for _ in 0..k / r {
                h = powmod(&h, p, f, p);
            }
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Build F_{p^k}. The modulus is the least monic irreducible of degree k when
/// coefficient vectors are compared constant term first; the primitive element
/// is the least code of full multiplicative order.
pub fn make_field(p: u32, k: u32) -> Result<Arc<FiniteField>, OracleError> {
    if k == 0 || !is_prime(p as u64) {
        return Err(OracleError::NotPrime(p as u64));
    }
    let size = (p as u64).checked_pow(k).filter(|&s| s <= MAX_FIELD_ORDER);
    let Some(size) = size else {
        return Err(OracleError::TooLarge { p, k });
    };
    let size = size as u32;
    let pp = p as u64;

    let modulus: Vec<u64> = if k == 1 {
        vec![0, 1]
    } else {
        // tail = (c_0, ..., c_{k-1}) counted with c_0 most significant
        let total = size as u64;
        (0..total)
            .map(|idx| {
                let mut tail = vec![0u64; k as usize];
                let mut r = idx;
                for c in tail.iter_mut().rev() {
                    *c = r % pp;
                    r /= pp;
                }
                tail.push(1);
                tail
            })
            .find(|f| fp_poly::is_irreducible(f, pp))
            .expect("irreducible polynomials exist in every degree")
    };

    let decode = |code: u32| -> Vec<u64> {
        let mut v = Vec::with_capacity(k as usize);
        let mut c = code as u64;
        for _ in 0..k {
            v.push(c % pp);
            c /= pp;
        }
        fp_poly::trim(&mut v);
        v
    };
    let encode = |v: &[u64]| -> u32 {
        v.iter().rev().fold(0u64, |acc, &c| acc * pp + c) as u32
    };
    let slow_mul = |a: u32, b: u32| -> u32 {
        if k == 1 {
            return ((a as u64 * b as u64) % pp) as u32;
        }
        encode(&fp_poly::mulmod(&decode(a), &decode(b), &modulus, pp))
    };
    let slow_pow = |a: u32, mut e: u64| -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(acc, base);
            }
            base = slow_mul(base, base);
            e >>= 1;
        }
        acc
    };

    let order = size as u64 - 1;
    let primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
    let primitive = (1..size)
        .find(|&x| primes.iter().all(|&r| slow_pow(x, order / r) != 1))
        .expect("the multiplicative group is cyclic");

    let n = order as usize;
    let mut exp = vec![0u32; 2 * n.max(1)];
    let mut log = vec![0u32; size as usize];
    let mut cur = 1u32;
    for i in 0..n {
        exp[i] = cur;
        exp[i + n] = cur;
        log[cur as usize] = i as u32;
        cur = slow_mul(cur, primitive);
    }

    let mut field = FiniteField {
        p,
        k,
        size,
        modulus: modulus.iter().map(|&c| c as u32).collect(),
        primitive,
        exp,
        log,
        add: None,
    };
    if size <= ADD_TABLE_MAX {
        let s = size as usize;
        let mut table = vec![0u32; s * s];
        for a in 0..size {
            for b in 0..size {
                table[a as usize * s + b as usize] = field.add_digits(a, b);
            }
        }
        field.add = Some(table);
    }
    Ok(Arc::new(field))
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    /// Order of the multiplicative group.
    pub fn unit_order(&self) -> u64 {
        self.size as u64 - 1
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[a as usize * self.size as usize + b as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut out, mut place, mut a) = (0u32, 1u32, a);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.unit_order() as u32;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.unit_order();
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// primitive^i.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % self.unit_order()) as usize]
    }

    /// Discrete logarithm to the fixed primitive element; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: u32) -> Option<u64> {
        let l = self.log(a)?;
        let n = self.unit_order();
        Some(n / crate::exactalg::numtheory::gcd(l, n))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    /// The integer in 0..p for an element of the prime subfield.
    pub fn to_int(&self, a: u32) -> Option<u32> {
        (a < self.p).then_some(a)
    }

    /// Whether the element lies in the subfield with p^j elements.
    pub fn in_subfield(&self, a: u32, j: u32) -> bool {
        self.pow(a, (self.p as u64).pow(j)) == a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let f13 = make_field(13, 1).unwrap();
        assert_eq!(f13.primitive(), 2);
        assert_eq!(f13.order_of(2), Some(12));
        let f169 = make_field(13, 2).unwrap();
        assert_eq!(f169.size(), 169);
        for x in 0..169 {
            assert_eq!(f169.frobenius(f169.frobenius(x)), x);
        }
        let moved = (0..169).filter(|&x| f169.frobenius(x) != x).count();
        assert_eq!(moved, 169 - 13);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(f2.mul(1, 1), 1);
        assert_eq!(f2.add(1, 1), 0);
    }

    #[test]
    fn modulus_is_least_irreducible() {
        // over F_3, x^2 + 1 is the first monic irreducible quadratic with c_0 most significant
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // over F_2: x^2 + x + 1
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(make_field(4, 1), Err(OracleError::NotPrime(4))));
        assert!(matches!(make_field(2, 20), Err(OracleError::TooLarge { .. })));
        assert!(make_field(997, 2).is_ok());
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2, 3), (3, 2), (5, 2), (7, 1), (2, 4)] {
            let f = make_field(p, k).unwrap();
            let s = f.size();
            for a in 0..s {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..s {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for c in [0, 1, s - 1] {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            // Frobenius is additive and fixes exactly the prime subfield
            for a in 0..s {
                for b in 0..s {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                }
            }
            let fixed = (0..s).filter(|&a| f.frobenius(a) == a).count() as u32;
            assert_eq!(fixed, p);
        }
    }
}
