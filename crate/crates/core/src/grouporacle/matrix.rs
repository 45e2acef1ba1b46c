//! Square matrices over a [`FiniteField`], stored row-major as flat `u32` code vectors.

use super::field::FiniteField;

pub type Matrix = Vec<u32>;

pub fn identity(n: usize) -> Matrix {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub fn diagonal(entries: &[u32]) -> Matrix {
    let n = entries.len();
    let mut m = vec![0; n * n];
    for (i, &e) in entries.iter().enumerate() {
        m[i * n + i] = e;
    }
    m
}

pub fn mul_into(f: &FiniteField, n: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0;
            for t in 0..n {
                let x = a[i * n + t];
                if x != 0 {
                    acc = f.add(acc, f.mul(x, b[t * n + j]));
                }
            }
            out[i * n + j] = acc;
        }
    }
}

pub fn mul(f: &FiniteField, n: usize, a: &[u32], b: &[u32]) -> Matrix {
    let mut out = vec![0; n * n];
    mul_into(f, n, a, b, &mut out);
    out
}

pub fn scale(f: &FiniteField, c: u32, a: &[u32]) -> Matrix {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// Row-reduce in place; returns the pivot columns.
pub fn row_reduce(f: &FiniteField, rows: usize, cols: usize, m: &mut [u32]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            m[r * cols + j] = f.mul(inv, m[r * cols + j]);
        }
        for i in 0..rows {
            let t = m[i * cols + c];
            if i != r && t != 0 {
                let nt = f.neg(t);
                for j in 0..cols {
                    let v = f.mul(nt, m[r * cols + j]);
                    m[i * cols + j] = f.add(m[i * cols + j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space of a `rows x cols` matrix.
pub fn nullspace(f: &FiniteField, rows: usize, cols: usize, m: &[u32]) -> Vec<Vec<u32>> {
    let mut work = m.to_vec();
    let pivots = row_reduce(f, rows, cols, &mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work[r * cols + fc]);
            }
            v
        })
        .collect()
}

pub fn det(f: &FiniteField, n: usize, a: &[u32]) -> u32 {
    let mut m = a.to_vec();
    let mut d = 1u32;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i * n + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in 0..n {
                m.swap(piv * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let pv = m[c * n + c];
        d = f.mul(d, pv);
        let inv = f.inv(pv).expect("pivot is nonzero");
        for i in c + 1..n {
            let t = f.mul(m[i * n + c], inv);
            if t != 0 {
                let nt = f.neg(t);
                for j in c..n {
                    let v = f.mul(nt, m[c * n + j]);
                    m[i * n + j] = f.add(m[i * n + j], v);
                }
            }
        }
    }
    d
}

pub fn inverse(f: &FiniteField, n: usize, a: &[u32]) -> Option<Matrix> {
    let cols = 2 * n;
    let mut aug = vec![0u32; n * cols];
    for i in 0..n {
        aug[i * cols..i * cols + n].copy_from_slice(&a[i * n..i * n + n]);
        aug[i * cols + n + i] = 1;
    }
    let pivots = row_reduce(f, n, cols, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        out[i * n..i * n + n].copy_from_slice(&aug[i * cols + n..i * cols + cols]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = make_field(5, 1).unwrap();
        let a = vec![1, 2, 3, 4];
        assert_eq!(det(&f, 2, &a), f.from_int(-2));
        let inv = inverse(&f, 2, &a).unwrap();
        assert_eq!(mul(&f, 2, &a, &inv), identity(2));
        assert!(inverse(&f, 2, &[1, 2, 2, 4]).is_none());
        let ns = nullspace(&f, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(ns, vec![vec![3, 1]]);
    }
}
