use std::sync::Arc;

use num_integer::Roots;

use super::field::{make_field, FiniteField};
use super::group::{conjugacy_classes, ConjugacyClasses, GroupTable};
use super::matrix;
use super::{OracleError, TABLE_MAX};
use crate::exactalg::numtheory::{is_prime, pow_mod, primitive_root};
use crate::exactalg::CyclotomicInteger;

/// Least prime ℓ ≡ 1 (mod e) with ℓ > `above`.
pub fn prime_one_mod(e: u64, above: u64) -> u64 {
    let mut ell = (above / e + 1) * e + 1;
    while !is_prime(ell) {
        ell += e;
    }
    ell
}

/// Reduction Z[ζ_e] → F_ℓ sending ζ_e to a fixed primitive e-th root of unity.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub ell: u64,
    pub order: u32,
    zeta: u64,
}

impl Reduction {
    /// Uses the least ℓ ≡ 1 (mod e) above `above`, and ζ = w^{(ℓ-1)/e} with w the
    /// least primitive root.
    pub fn new(order: u32, above: u64) -> Self {
        let ell = prime_one_mod(order as u64, above);
        let w = primitive_root(ell);
        Self { ell, order, zeta: pow_mod(w, (ell - 1) / order as u64, ell) }
    }

    pub fn zeta_pow(&self, k: i64) -> u64 {
        pow_mod(self.zeta, k.rem_euclid(self.order as i64) as u64, self.ell)
    }

    /// Image of a cyclotomic integer whose order divides the reduction order.
    pub fn reduce(&self, c: &CyclotomicInteger) -> u64 {
        let step = (self.order / c.order()) as i64;
        let root = self.zeta_pow(step);
        let ell = self.ell as i128;
        let mut acc = 0i128;
        let mut pow = 1i128;
        for &x in c.coeffs() {
            acc = (acc + (x as i128).rem_euclid(ell) * pow) % ell;
            pow = pow * root as i128 % ell;
        }
        acc as u64
    }

    /// Residue of an integer.
    pub fn int(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.ell as i128) as u64
    }

    /// Representative in (-ℓ/2, ℓ/2].
    pub fn lift(&self, x: u64) -> i64 {
        if x > self.ell / 2 {
            x as i64 - self.ell as i64
        } else {
            x as i64
        }
    }
}

#[derive(Clone, Debug)]
enum Values {
    /// Exact values, one row per character.
    Cyclotomic(Vec<Vec<CyclotomicInteger>>),
    /// Linear characters of an abelian group: χ(c) = ζ_e^{k}, storing k.
    Exponents(Vec<Vec<u32>>),
}

/// Exact character table. Row 0 is the trivial character; the remaining rows
/// are ordered by degree and then by their values.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group_order: usize,
    classes: ConjugacyClasses,
    exponent: u32,
    degrees: Vec<u64>,
    values: Values,
}

impl CharacterTable {
    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    /// Exponent of the group; every value lies in Z[ζ_exponent].
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn char_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, chi: usize) -> u64 {
        self.degrees[chi]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn value(&self, chi: usize, class: usize) -> CyclotomicInteger {
        match &self.values {
            Values::Cyclotomic(rows) => rows[chi][class].clone(),
            Values::Exponents(rows) => CyclotomicInteger::zeta_pow(self.exponent, rows[chi][class] as i64),
        }
    }

    /// χ(g) for a group element index.
    pub fn value_at(&self, chi: usize, element: u32) -> CyclotomicInteger {
        self.value(chi, self.classes.class_of[element as usize] as usize)
    }

    /// For tables of linear characters: the exponent k with χ(c) = ζ^k.
    pub fn exponent_value(&self, chi: usize, class: usize) -> Option<u32> {
        match &self.values {
            Values::Exponents(rows) => Some(rows[chi][class]),
            Values::Cyclotomic(_) => None,
        }
    }

    /// Σ_c weights[c]·χ(c).
    pub fn weighted_sum(&self, chi: usize, weights: &[i64]) -> CyclotomicInteger {
        match &self.values {
            Values::Exponents(rows) => {
                let mut hist = vec![0i64; self.exponent as usize];
                for (c, &w) in weights.iter().enumerate() {
                    hist[rows[chi][c] as usize] += w;
                }
                CyclotomicInteger::from_exponent_counts(self.exponent, &hist)
            }
            Values::Cyclotomic(rows) => {
                let mut acc = vec![0i64; rows[chi][0].coeffs().len()];
                for (c, &w) in weights.iter().enumerate() {
                    if w != 0 {
                        for (a, &x) in acc.iter_mut().zip(rows[chi][c].coeffs()) {
                            *a += w * x;
                        }
                    }
                }
                let mut out = CyclotomicInteger::zero(self.exponent);
                for (k, &a) in acc.iter().enumerate() {
                    if a != 0 {
                        let term = CyclotomicInteger::zeta_pow(self.exponent, k as i64).scale(a);
                        out = out.add(&term).expect("same order");
                    }
                }
                out
            }
        }
    }

    /// All values reduced modulo ℓ; `red.order` must be a multiple of the exponent.
    pub fn residues(&self, red: &Reduction) -> Vec<Vec<u64>> {
        let step = (red.order / self.exponent) as i64;
        match &self.values {
            Values::Exponents(rows) => {
                rows.iter().map(|r| r.iter().map(|&k| red.zeta_pow(k as i64 * step)).collect()).collect()
            }
            Values::Cyclotomic(rows) => {
                rows.iter().map(|r| r.iter().map(|v| red.reduce(v)).collect()).collect()
            }
        }
    }

    /// Both orthogonality relations, checked modulo a prime above 2|G|, and
    /// Σ χ(1)² = |G| exactly.
    pub fn check_orthogonality(&self) -> Result<(), OracleError> {
        let n = self.group_order as u64;
        let sum_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != n {
            return Err(OracleError::Inconsistent(format!("sum of squared degrees {sum_sq} != {n}")));
        }
        let r = self.classes.count();
        if self.char_count() != r {
            return Err(OracleError::Inconsistent("table is not square".into()));
        }
        if let Values::Exponents(rows) = &self.values {
            // |G| distinct homomorphisms form the whole dual group
            let mut sorted: Vec<&Vec<u32>> = rows.iter().collect();
            sorted.sort();
            sorted.dedup();
            return if sorted.len() == r {
                Ok(())
            } else {
                Err(OracleError::Inconsistent("repeated linear character".into()))
            };
        }
        let red = Reduction::new(self.exponent, 2 * n);
        let ell = red.ell;
        let res = self.residues(&red);
        let inv = &self.classes.inverse;
        let sizes: Vec<u64> = (0..r).map(|c| self.classes.size(c) as u64).collect();
        for i in 0..r {
            for j in i..r {
                let s = (0..r).fold(0u64, |acc, c| {
                    (acc + sizes[c] * res[i][c] % ell * res[j][inv[c]]) % ell
                });
                let want = if i == j { n % ell } else { 0 };
                if s != want {
                    return Err(OracleError::Inconsistent(format!("row orthogonality fails at ({i}, {j})")));
                }
            }
        }
        for c in 0..r {
            for c2 in c..r {
                let s = (0..r).fold(0u64, |acc, i| (acc + res[i][c] * res[i][inv[c2]]) % ell);
                let want = if c == c2 { n / sizes[c] % ell } else { 0 };
                if s != want {
                    return Err(OracleError::Inconsistent(format!("column orthogonality fails at ({c}, {c2})")));
                }
            }
        }
        Ok(())
    }
}

/// Exact character table of an enumerated group (|G| ≤ 2500).
pub fn character_table(g: &GroupTable) -> Result<CharacterTable, OracleError> {
    if g.order() > TABLE_MAX {
        return Err(OracleError::CapExceeded { what: "character table group order", limit: TABLE_MAX as u64 });
    }
    let classes = conjugacy_classes(g);
    let exponent = classes.exponent(g) as u32;
    let table = if g.is_abelian() { abelian_table(g, classes, exponent)? } else { dixon(g, classes, exponent)? };
    table.check_orthogonality()?;
    Ok(table)
}

/// Characters of an abelian group, extended one generator at a time.
fn abelian_table(g: &GroupTable, classes: ConjugacyClasses, e: u32) -> Result<CharacterTable, OracleError> {
    let n = g.order();
    let e64 = e as u64;
    let mut members: Vec<u32> = vec![0];
    let mut in_sub = vec![false; n];
    in_sub[0] = true;
    let mut rows: Vec<Vec<u32>> = vec![vec![0; n]];
    for &s in g.generators() {
        if in_sub[s as usize] {
            continue;
        }
        let mut powers = vec![0u32, s];
        while !in_sub[*powers.last().unwrap() as usize] {
            let next = g.mul(*powers.last().unwrap(), s);
            powers.push(next);
        }
        let o = (powers.len() - 1) as u64;
        let top = powers[o as usize];
        let old = members.clone();
        for j in 1..o as usize {
            for &m in &old {
                let x = g.mul(m, powers[j]);
                in_sub[x as usize] = true;
                members.push(x);
            }
        }
        let mut next_rows = Vec::with_capacity(rows.len() * o as usize);
        for row in &rows {
            let t = row[top as usize] as u64;
            if !t.is_multiple_of(o) {
                return Err(OracleError::Inconsistent("abelian extension has no root".into()));
            }
            for k in 0..o {
                let x = (t / o + k * (e64 / o)) % e64;
                let mut new_row = row.clone();
                for j in 1..o as usize {
                    for &m in &old {
                        let target = g.mul(m, powers[j]);
                        new_row[target as usize] = ((row[m as usize] as u64 + j as u64 * x) % e64) as u32;
                    }
                }
                next_rows.push(new_row);
            }
        }
        rows = next_rows;
    }
    if members.len() != n {
        return Err(OracleError::Inconsistent("generators do not exhaust the group".into()));
    }
    rows.sort();
    let degrees = vec![1; rows.len()];
    Ok(CharacterTable { group_order: n, classes, exponent: e, degrees, values: Values::Exponents(rows) })
}

/// Characteristic polynomial (monic, low degree first) through Hessenberg form.
fn charpoly(f: &FiniteField, d: usize, m: &mut [u32]) -> Vec<u32> {
    for col in 0..d.saturating_sub(2) {
        let Some(piv) = (col + 1..d).find(|&i| m[i * d + col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            for j in 0..d {
                m.swap(piv * d + j, (col + 1) * d + j);
            }
            for i in 0..d {
                m.swap(i * d + piv, i * d + col + 1);
            }
        }
        let inv = f.inv(m[(col + 1) * d + col]).expect("pivot is nonzero");
        for k in col + 2..d {
            let u = f.mul(m[k * d + col], inv);
            if u == 0 {
                continue;
            }
            for j in 0..d {
                let v = f.mul(u, m[(col + 1) * d + j]);
                m[k * d + j] = f.sub(m[k * d + j], v);
            }
            for i in 0..d {
                let v = f.mul(u, m[i * d + k]);
                m[i * d + col + 1] = f.add(m[i * d + col + 1], v);
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - Σ_{i<k} h_ik (∏_{i<j≤k} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u32>> = vec![vec![1]];
    for k in 0..d {
        let prev = &polys[k];
        let mut next = vec![0u32; k + 2];
        for (t, &c) in prev.iter().enumerate() {
            next[t + 1] = f.add(next[t + 1], c);
            next[t] = f.sub(next[t], f.mul(m[k * d + k], c));
        }
        let mut prod = 1u32;
        for i in (0..k).rev() {
            prod = f.mul(prod, m[(i + 1) * d + i]);
            let coef = f.mul(m[i * d + k], prod);
            if coef != 0 {
                for (t, &c) in polys[i].iter().enumerate() {
                    next[t] = f.sub(next[t], f.mul(coef, c));
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn eval(f: &FiniteField, poly: &[u32], x: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Split an M-invariant subspace (rows of `basis`) into eigenspaces of M.
fn split(f: &FiniteField, r: usize, m: &[u32], basis: Vec<Vec<u32>>) -> Result<Vec<Vec<Vec<u32>>>, OracleError> {
    let d = basis.len();
    let mut flat: Vec<u32> = basis.concat();
    let pivots = matrix::row_reduce(f, d, r, &mut flat);
    let rows: Vec<&[u32]> = (0..d).map(|i| &flat[i * r..(i + 1) * r]).collect();
    // R[t][i] = (M w_i)[p_t]
    let mut restricted = vec![0u32; d * d];
    for (i, w) in rows.iter().enumerate() {
        for (t, &p) in pivots.iter().enumerate() {
            let v = (0..r).fold(0u32, |acc, l| f.add(acc, f.mul(m[p * r + l], w[l])));
            restricted[t * d + i] = v;
        }
    }
    let poly = charpoly(f, d, &mut restricted.clone());
    let roots: Vec<u32> = (0..f.size()).filter(|&x| eval(f, &poly, x) == 0).collect();
    if roots.len() == 1 {
        return Ok(vec![rows.iter().map(|w| w.to_vec()).collect()]);
    }
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let mut shifted = restricted.clone();
        for i in 0..d {
            shifted[i * d + i] = f.sub(shifted[i * d + i], lambda);
        }
        let kernel = matrix::nullspace(f, d, d, &shifted);
        total += kernel.len();
        out.push(
            kernel
                .iter()
                .map(|v| {
                    (0..r)
                        .map(|l| (0..d).fold(0u32, |acc, i| f.add(acc, f.mul(v[i], rows[i][l]))))
                        .collect()
                })
                .collect(),
        );
    }
    if total != d {
        return Err(OracleError::Inconsistent("class matrix is not diagonalizable mod ell".into()));
    }
    Ok(out)
}

/// Dixon's method: simultaneous eigenvectors of the class matrices mod ℓ,
/// lifted to cyclotomic integers through eigenvalue multiplicities.
fn dixon(g: &GroupTable, classes: ConjugacyClasses, e: u32) -> Result<CharacterTable, OracleError> {
    let n = g.order() as u64;
    let r = classes.count();
    let red = Reduction::new(e, 2 * n.sqrt() + 1);
    let f: Arc<FiniteField> = make_field(red.ell as u32, 1)?;

    let class_matrix = |j: usize| {
        let mut m = vec![0u32; r * r];
        for l in 0..r {
            let z = classes.rep(l);
            for &x in &classes.members[j] {
                let k = classes.class_of[g.mul(g.inverse(x), z) as usize] as usize;
                m[k * r + l] += 1;
            }
        }
        m.iter().map(|&x| x % f.size()).collect::<Vec<u32>>()
    };

    let identity: Vec<Vec<u32>> = (0..r).map(|i| (0..r).map(|j| u32::from(i == j)).collect()).collect();
    let mut spaces = vec![identity];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(j);
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
            } else {
                next.extend(split(&f, r, &m, s)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(OracleError::Inconsistent("class algebra did not split".into()));
    }

    let sizes: Vec<u32> = (0..r).map(|c| classes.size(c) as u32).collect();
    let inv_class = classes.inverse.clone();
    // power maps: class of rep^j for j < order(rep)
    let power_maps: Vec<Vec<usize>> = (0..r)
        .map(|l| {
            let x = classes.rep(l);
            let mut out = vec![0usize];
            let mut cur = x;
            while cur != 0 {
                out.push(classes.class_of[cur as usize] as usize);
                cur = g.mul(cur, x);
            }
            out
        })
        .collect();

    let mut rows = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for s in spaces {
        let v = &s[0];
        let scale = f.inv(v[0]).ok_or_else(|| OracleError::Inconsistent("eigenvector vanishes at 1".into()))?;
        let omega: Vec<u32> = v.iter().map(|&x| f.mul(x, scale)).collect();
        let norm = (0..r).fold(0u32, |acc, l| {
            let t = f.mul(omega[l], omega[inv_class[l]]);
            f.add(acc, f.mul(t, f.inv(sizes[l] % f.size()).unwrap()))
        });
        let target = f.mul(f.from_int(n as i64), f.inv(norm).ok_or_else(|| OracleError::Inconsistent("zero norm".into()))?);
        let degree = (1..=n.sqrt())
            .find(|&d| f.from_int((d * d) as i64) == target)
            .ok_or_else(|| OracleError::Inconsistent("no degree".into()))?;
        let residues: Vec<u32> = (0..r)
            .map(|l| f.mul(f.mul(f.from_int(degree as i64), omega[l]), f.inv(sizes[l] % f.size()).unwrap()))
            .collect();
        let mut row = Vec::with_capacity(r);
        for l in 0..r {
            let pm = &power_maps[l];
            let o = pm.len() as u64;
            let o_inv = f.inv(f.from_int(o as i64)).unwrap();
            let mut hist = vec![0i64; e as usize];
            for k in 0..o {
                let mut acc = 0u32;
                for (j, &c) in pm.iter().enumerate() {
                    let z = red.zeta_pow(-((j as u64 * k * (e as u64 / o)) as i64)) as u32;
                    acc = f.add(acc, f.mul(residues[c], z));
                }
                let mult = f.mul(acc, o_inv) as u64;
                if mult > degree {
                    return Err(OracleError::Inconsistent("eigenvalue multiplicity out of range".into()));
                }
                hist[(k * (e as u64 / o)) as usize] = mult as i64;
            }
            let value = CyclotomicInteger::from_exponent_counts(e, &hist);
            if red.reduce(&value) != residues[l] as u64 {
                return Err(OracleError::Inconsistent("lifted value does not reduce back".into()));
            }
            row.push(value);
        }
        rows.push(row);
        degrees.push(degree);
    }
    let one = CyclotomicInteger::one(e);
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| {
        let key = |i: usize| (rows[i].iter().any(|v| v != &one), degrees[i]);
        key(a).cmp(&key(b)).then_with(|| {
            let ca: Vec<&[i64]> = rows[a].iter().map(|v| v.coeffs()).collect();
            let cb: Vec<&[i64]> = rows[b].iter().map(|v| v.coeffs()).collect();
            ca.cmp(&cb)
        })
    });
    let rows = order.iter().map(|&i| rows[i].clone()).collect();
    let degrees = order.iter().map(|&i| degrees[i]).collect();
    Ok(CharacterTable { group_order: n as usize, classes, exponent: e, degrees, values: Values::Cyclotomic(rows) })
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::super::group::generate_group;
    use super::*;

    fn degrees_sorted(t: &CharacterTable) -> Vec<u64> {
        let mut d = t.degrees().to_vec();
        d.sort_unstable();
        d
    }

    #[test]
    fn documented_tables() {
        let f3 = make_field(3, 1).unwrap();
        let sl = generate_group(&f3, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]], 100).unwrap();
        let t = character_table(&sl).unwrap();
        assert_eq!(degrees_sorted(&t), vec![1, 1, 1, 2, 2, 2, 3]);
        assert!((0..7).all(|c| t.value(0, c) == CyclotomicInteger::one(t.exponent())));

        let heis = generate_group(&f3, 3, &[vec![1, 1, 0, 0, 1, 0, 0, 0, 1], vec![1, 0, 0, 0, 1, 1, 0, 0, 1]], 100)
            .unwrap();
        assert_eq!(heis.order(), 27);
        let t = character_table(&heis).unwrap();
        assert_eq!(degrees_sorted(&t), [vec![1; 9], vec![3, 3]].concat());

        let f7 = make_field(7, 1).unwrap();
        let cyc = generate_group(&f7, 1, &[vec![3]], 100).unwrap();
        let t = character_table(&cyc).unwrap();
        assert_eq!(t.char_count(), 6);
        for chi in 0..6 {
            for c in 0..6 {
                let v = t.value(chi, c);
                assert!(v.root_of_unity_exponent().is_some());
            }
        }
    }

    #[test]
    fn gl2_tables() {
        let f3 = make_field(3, 1).unwrap();
        let gl = generate_group(&f3, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]], 100).unwrap();
        let t = character_table(&gl).unwrap();
        assert_eq!(degrees_sorted(&t), vec![1, 1, 2, 2, 2, 3, 3, 4]);
        let f5 = make_field(5, 1).unwrap();
        let gl = generate_group(&f5, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]], 1000).unwrap();
        assert_eq!(gl.order(), 480);
        let t = character_table(&gl).unwrap();
        assert_eq!(t.char_count(), 24);
        assert_eq!(t.degrees().iter().filter(|&&d| d == 6).count(), 6);
    }

    #[test]
    fn abelian_fast_path_matches_dixon_count() {
        let f5 = make_field(5, 1).unwrap();
        let torus = generate_group(&f5, 2, &[vec![2, 0, 0, 1], vec![1, 0, 0, 2]], 100).unwrap();
        let t = character_table(&torus).unwrap();
        assert_eq!(t.char_count(), 16);
        assert_eq!(t.exponent_value(0, 5), Some(0));
        let hist = vec![1i64; 16];
        // Σ_g χ(g) = |G|·[χ trivial]
        assert_eq!(t.weighted_sum(0, &hist).as_integer(), Some(16));
        assert_eq!(t.weighted_sum(3, &hist).as_integer(), Some(0));
    }
}
