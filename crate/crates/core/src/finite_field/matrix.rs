//! Dense square matrices over a [`Field`], stored row-major as flat slices.

use super::{Field, FieldPoly};

pub fn identity(n: usize) -> Vec<u32> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub fn scalar(n: usize, c: u32) -> Vec<u32> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = c;
    }
    m
}

pub fn diagonal(d: &[u32]) -> Vec<u32> {
    let n = d.len();
    let mut m = vec![0; n * n];
    for (i, &x) in d.iter().enumerate() {
        m[i * n + i] = x;
    }
    m
}

pub fn mat_mul(f: &Field, a: &[u32], b: &[u32], n: usize) -> Vec<u32> {
    let mut c = vec![0u32; n * n];
    mat_mul_into(f, a, b, n, &mut c);
    c
}

pub fn mat_mul_into(f: &Field, a: &[u32], b: &[u32], n: usize, out: &mut [u32]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0;
            for k in 0..n {
                let x = a[i * n + k];
                if x != 0 {
                    acc = f.add(acc, f.mul(x, b[k * n + j]));
                }
            }
            out[i * n + j] = acc;
        }
    }
}

pub fn mat_add(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn mat_sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn mat_neg(f: &Field, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| f.neg(x)).collect()
}

pub fn trace(f: &Field, a: &[u32], n: usize) -> u32 {
    (0..n).fold(0, |acc, i| f.add(acc, a[i * n + i]))
}

/// tr(AB) without forming the product.
pub fn trace_of_product(f: &Field, a: &[u32], b: &[u32], n: usize) -> u32 {
    let mut acc = 0;
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                acc = f.add(acc, f.mul(x, b[k * n + i]));
            }
        }
    }
    acc
}

/// Row-reduces a copy of `a` (rows × cols); returns (reduced, pivot columns).
pub fn rref(f: &Field, a: &[u32], rows: usize, cols: usize) -> (Vec<u32>, Vec<usize>) {
    let mut m = a.to_vec();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            m[r * cols + j] = f.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            let factor = m[i * cols + c];
            if i != r && factor != 0 {
                for j in 0..cols {
                    let t = f.mul(factor, m[r * cols + j]);
                    m[i * cols + j] = f.sub(m[i * cols + j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(f: &Field, a: &[u32], rows: usize, cols: usize) -> usize {
    rref(f, a, rows, cols).1.len()
}

/// Basis of {v : A v = 0} for a rows × cols matrix.
pub fn nullspace(f: &Field, a: &[u32], rows: usize, cols: usize) -> Vec<Vec<u32>> {
    let (m, pivots) = rref(f, a, rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[r * cols + fc]);
            }
            v
        })
        .collect()
}

pub fn inverse(f: &Field, a: &[u32], n: usize) -> Option<Vec<u32>> {
    let mut aug = vec![0u32; n * 2 * n];
    for i in 0..n {
        aug[i * 2 * n..i * 2 * n + n].copy_from_slice(&a[i * n..(i + 1) * n]);
        aug[i * 2 * n + n + i] = 1;
    }
    let (m, pivots) = rref(f, &aug, n, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        out[i * n..(i + 1) * n].copy_from_slice(&m[i * 2 * n + n..(i + 1) * 2 * n]);
    }
    Some(out)
}

pub fn is_invertible(f: &Field, a: &[u32], n: usize) -> bool {
    rank(f, a, n, n) == n
}

/// det(x·Id − A) as a monic polynomial.
///
/// Expansion over column subsets: row i is matched to an unused column and the
/// sign is tracked through the inversion count.
pub fn char_poly(f: &Field, a: &[u32], n: usize) -> FieldPoly {
    let entry = |i: usize, j: usize| -> FieldPoly {
        if i == j {
            FieldPoly::new(vec![f.neg(a[i * n + j]), 1])
        } else {
            FieldPoly::new(vec![f.neg(a[i * n + j])])
        }
    };
    let mut dp: Vec<FieldPoly> = vec![FieldPoly::zero(); 1 << n];
    dp[0] = FieldPoly::one();
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        let cur = dp[mask].clone();
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let e = entry(i, j);
            if e.is_zero() {
                continue;
            }
            let inversions = (mask >> (j + 1)).count_ones();
            let mut term = cur.mul(f, &e);
            if inversions % 2 == 1 {
                term = term.scale(f, f.neg(1));
            }
            let nm = mask | (1 << j);
            dp[nm] = dp[nm].add(f, &term);
        }
    }
    dp[(1 << n) - 1].clone()
}

pub fn det(f: &Field, a: &[u32], n: usize) -> u32 {
    let mut m = a.to_vec();
    let mut det = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| m[i * n + c] != 0) else {
            return 0;
        };
        if p != c {
            for j in 0..n {
                m.swap(p * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let piv = m[c * n + c];
        det = f.mul(det, piv);
        let inv = f.inv(piv).expect("nonzero pivot");
        for i in c + 1..n {
            let factor = f.mul(m[i * n + c], inv);
            if factor != 0 {
                for j in c..n {
                    let t = f.mul(factor, m[c * n + j]);
                    m[i * n + j] = f.sub(m[i * n + j], t);
                }
            }
        }
    }
    det
}

/// p(A) by Horner's rule.
pub fn poly_eval_matrix(f: &Field, p: &FieldPoly, a: &[u32], n: usize) -> Vec<u32> {
    let mut acc = vec![0u32; n * n];
    for &c in p.coeffs().iter().rev() {
        acc = mat_mul(f, &acc, a, n);
        for i in 0..n {
            acc[i * n + i] = f.add(acc[i * n + i], c);
        }
    }
    acc
}

pub fn is_zero_matrix(a: &[u32]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Monic polynomial of least degree annihilating A.
pub fn minimal_poly(f: &Field, a: &[u32], n: usize) -> FieldPoly {
    let cp = char_poly(f, a, n);
    // the minimal polynomial divides the characteristic polynomial and has the
    // same irreducible factors, so search over exponent vectors
    let fac = cp.factor(f);
    let mut best = cp.clone();
    let mut exps: Vec<usize> = fac.iter().map(|_| 1).collect();
    loop {
        let cand = fac
            .iter()
            .zip(&exps)
            .fold(FieldPoly::one(), |acc, ((p, _), &e)| {
                (0..e).fold(acc, |a2, _| a2.mul(f, p))
            });
        if cand.degree() < best.degree() && is_zero_matrix(&poly_eval_matrix(f, &cand, a, n)) {
            best = cand;
        }
        let mut k = 0;
        loop {
            if k == exps.len() {
                return best;
            }
            if exps[k] < fac[k].1 {
                exps[k] += 1;
                break;
            }
            exps[k] = 1;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = Field::new(5, 1).unwrap();
        let a = vec![1, 2, 3, 4];
        let inv = inverse(&f, &a, 2).unwrap();
        assert_eq!(mat_mul(&f, &a, &inv, 2), identity(2));
        // det = 4 - 6 = -2 = 3
        assert_eq!(det(&f, &a, 2), 3);
        assert!(inverse(&f, &[1, 2, 2, 4], 2).is_none());
        assert_eq!(det(&f, &[0, 1, 1, 0], 2), 4);
    }

    #[test]
    fn char_poly_matches_trace_and_det() {
        let f = Field::new(7, 1).unwrap();
        let a = vec![1, 2, 0, 3, 4, 5, 6, 0, 1];
        let cp = char_poly(&f, &a, 3);
        assert_eq!(cp.degree(), Some(3));
        assert_eq!(cp.leading(), 1);
        assert_eq!(cp.coeffs()[2], f.neg(trace(&f, &a, 3)));
        assert_eq!(cp.coeffs()[0], f.neg(det(&f, &a, 3)));
        // Cayley–Hamilton
        assert!(is_zero_matrix(&poly_eval_matrix(&f, &cp, &a, 3)));
    }

    #[test]
    fn minimal_poly_of_scalar_and_jordan_block() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(minimal_poly(&f, &scalar(2, 2), 2), FieldPoly::linear(&f, 2));
        let j = vec![1, 1, 0, 1];
        assert_eq!(minimal_poly(&f, &j, 2).degree(), Some(2));
    }

    #[test]
    fn nullspace_dimension() {
        let f = Field::new(2, 1).unwrap();
        let a = vec![1, 1, 0, 0, 0, 0, 0, 0, 1];
        let ns = nullspace(&f, &a, 3, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![1, 1, 0]);
    }
}
