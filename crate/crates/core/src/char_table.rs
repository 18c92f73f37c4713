//! Exact character tables by the Burnside–Dixon–Schneider method.
//!
//! Central characters are found as common eigenvectors of the class
//! multiplication matrices over a prime field F_ℓ with ℓ ≡ 1 (mod exponent),
//! then lifted to Z[ζ_m] through eigenvalue multiplicities on power maps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_num::{CycInt, DotAccumulator};
use crate::finite_field::{is_prime, prime_factors};
use crate::matrix_group::{ClassData, GroupTable};

pub const CLASS_CAP: usize = 256;

const PRIME_SEARCH_LIMIT: u64 = 10_000_000;

/// Reduction of the table modulo ℓ, with ζ_m ↦ `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularTable {
    pub prime: u64,
    pub root: u64,
    pub values: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub conductor: u64,
    pub degrees: Vec<u64>,
    /// `values[i][k]` is χ_i on class k.
    pub values: Vec<Vec<CycInt>>,
    pub class_sizes: Vec<u64>,
    pub group_order: u64,
    pub modular: Option<ModularTable>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroReport {
    pub zero_entries: u64,
    pub total_entries: u64,
    pub ratio: BigRational,
    pub per_character_zero_counts: Vec<u64>,
}

impl ZeroReport {
    pub fn nonzero_ratio(&self) -> BigRational {
        BigRational::from_integer(1.into()) - &self.ratio
    }
}

fn pow_mod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % l as u128) as u64;
        }
        b = (b as u128 * b as u128 % l as u128) as u64;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, l: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(l));
    pow_mod(a, l - 2, l)
}

/// Least prime ℓ ≡ 1 (mod m) with ℓ² > 4·order.
pub fn dixon_prime(m: u64, order: u64) -> Result<u64> {
    let mut k = 1u64;
    while k <= PRIME_SEARCH_LIMIT {
        let l = k * m + 1;
        if (l as u128) * (l as u128) > 4 * order as u128 && is_prime(l) {
            return Ok(l);
        }
        k += 1;
    }
    Err(Error::NoSuitablePrime(m))
}

fn primitive_root(l: u64) -> u64 {
    let fs = prime_factors(l - 1);
    (2..l)
        .find(|&g| fs.iter().all(|&r| pow_mod(g, (l - 1) / r, l) != 1))
        .unwrap_or(1)
}

/// Linear algebra over F_ℓ on row-major matrices.
struct ModP {
    l: u64,
}

impl ModP {
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.l as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.l - b) % self.l
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.l
    }

    /// Reduced row echelon form of a list of row vectors; drops zero rows.
    fn rref_rows(&self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(p, r);
            let inv = inv_mod(rows[r][c], self.l);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                let f = row[c];
                if i != r && f != 0 {
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        pivots
    }

    /// Null space of a d × d matrix, as row vectors.
    fn nullspace(&self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let d = a.len();
        let mut rows = a.to_vec();
        let pivots = self.rref_rows(&mut rows);
        (0..d)
            .filter(|c| !pivots.contains(c))
            .map(|fc| {
                let mut v = vec![0u64; d];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.sub(0, rows[r][fc]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial via reduction to Hessenberg form.
    fn char_poly(&self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = a.len();
        let mut h: Vec<Vec<u64>> = a.to_vec();
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| h[i][c] != 0) else {
                continue;
            };
            if p != c + 1 {
                h.swap(p, c + 1);
                for row in h.iter_mut() {
                    row.swap(p, c + 1);
                }
            }
            let inv = inv_mod(h[c + 1][c], self.l);
            for i in c + 2..n {
                let f = self.mul(h[i][c], inv);
                if f == 0 {
                    continue;
                }
                // row_i -= f row_{c+1}; col_{c+1} += f col_i
                let pivot = h[c + 1].clone();
                for (x, &y) in h[i].iter_mut().zip(&pivot) {
                    *x = self.sub(*x, self.mul(f, y));
                }
                for row in h.iter_mut() {
                    let t = self.mul(f, row[i]);
                    row[c + 1] = self.add(row[c + 1], t);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j-1}) p_{i-1}
        let mut ps: Vec<Vec<u64>> = vec![vec![1]];
        for k in 0..n {
            let prev = &ps[k];
            let mut next = vec![0u64; k + 2];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = self.add(next[d + 1], c);
                next[d] = self.sub(next[d], self.mul(h[k][k], c));
            }
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = self.mul(prod, h[i + 1][i]);
                if prod == 0 {
                    break;
                }
                let coef = self.mul(h[i][k], prod);
                if coef == 0 {
                    continue;
                }
                for (d, &c) in ps[i].iter().enumerate() {
                    next[d] = self.sub(next[d], self.mul(coef, c));
                }
            }
            ps.push(next);
        }
        ps.pop().expect("nonempty")
    }

    fn eval(&self, p: &[u64], x: u64) -> u64 {
        p.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn roots(&self, p: &[u64]) -> Vec<u64> {
        let deg = p.len() - 1;
        let mut out = vec![];
        for x in 0..self.l {
            if self.eval(p, x) == 0 {
                out.push(x);
                if out.len() == deg {
                    break;
                }
            }
        }
        out
    }
}

/// a[r][i] = |{x ∈ C_j : x⁻¹ z_i ∈ C_r}|, reduced mod ℓ.
fn class_matrix(g: &GroupTable, c: &ClassData, members: &[u32], l: u64) -> Vec<Vec<u64>> {
    let k = c.len();
    let mut a = vec![vec![0u64; k]; k];
    for &x in members {
        let xi = g.inv(x);
        for (i, &z) in c.class_reps.iter().enumerate() {
            let r = c.class_of[g.mul(xi, z) as usize] as usize;
            a[r][i] += 1;
        }
    }
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x %= l;
        }
    }
    a
}

/// Common eigenvectors of the class matrices, normalized at the identity class.
fn central_characters(g: &GroupTable, c: &ClassData, l: u64) -> Result<Vec<Vec<u64>>> {
    let k = c.len();
    let f = ModP { l };
    let mut members = vec![vec![]; k];
    for (x, &cls) in c.class_of.iter().enumerate() {
        members[cls as usize].push(x as u32);
    }
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect()];
    for class in members.iter().take(k).skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(g, c, class, l);
        let mut next = vec![];
        for space in spaces {
            let d = space.len();
            if d == 1 {
                next.push(space);
                continue;
            }
            let mut basis = space;
            let pivots = f.rref_rows(&mut basis);
            // restriction: column s holds the coordinates of M b_s
            let mut restricted = vec![vec![0u64; d]; d];
            for (s, b) in basis.iter().enumerate() {
                let image: Vec<u64> = (0..k)
                    .map(|r| (0..k).fold(0, |acc, i| f.add(acc, f.mul(m[r][i], b[i]))))
                    .collect();
                for (t, &pc) in pivots.iter().enumerate() {
                    restricted[t][s] = image[pc];
                }
            }
            let cp = f.char_poly(&restricted);
            let roots = f.roots(&cp);
            if roots.len() == 1 {
                next.push(basis);
                continue;
            }
            let mut total = 0;
            for lam in roots {
                let shifted: Vec<Vec<u64>> = restricted
                    .iter()
                    .enumerate()
                    .map(|(t, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(s, &x)| if s == t { f.sub(x, lam) } else { x })
                            .collect()
                    })
                    .collect();
                let ns = f.nullspace(&shifted);
                total += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|coef| {
                        let mut v = vec![0u64; k];
                        for (s, &cs) in coef.iter().enumerate() {
                            if cs != 0 {
                                for (x, &y) in v.iter_mut().zip(&basis[s]) {
                                    *x = f.add(*x, f.mul(cs, y));
                                }
                            }
                        }
                        v
                    })
                    .collect();
                next.push(sub);
            }
            if total != d {
                return Err(Error::DegenerateEigenspace);
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::DegenerateEigenspace);
    }
    spaces
        .into_iter()
        .map(|s| {
            let v = &s[0];
            if v[0] == 0 {
                return Err(Error::DegenerateEigenspace);
            }
            let inv = inv_mod(v[0], l);
            Ok(v.iter().map(|&x| f.mul(x, inv)).collect())
        })
        .collect()
}

pub fn dixon_character_table(g: &GroupTable, c: &ClassData) -> Result<CharacterTable> {
    let k = c.len();
    if k > CLASS_CAP {
        return Err(Error::TooManyClasses(k, CLASS_CAP));
    }
    let n = g.order() as u64;
    let m = c.exponent;
    let l = dixon_prime(m, n)?;
    let f = ModP { l };
    let root = pow_mod(primitive_root(l), (l - 1) / m, l);
    log::info!("dixon: {k} classes, exponent {m}, prime {l}");

    let omegas = central_characters(g, c, l)?;
    let inv_sizes: Vec<u64> = c.class_sizes.iter().map(|&s| inv_mod(s % l, l)).collect();
    let inverse_class: Vec<usize> = (0..k).map(|i| c.inverse_class(i) as usize).collect();
    let mut modular: Vec<(u64, Vec<u64>)> = omegas
        .iter()
        .map(|w| {
            let s = (0..k).fold(0, |acc, i| {
                f.add(acc, f.mul(f.mul(w[i], w[inverse_class[i]]), inv_sizes[i]))
            });
            let d2 = f.mul(n % l, inv_mod(s, l));
            let d = (1..)
                .take_while(|d| d * d <= n)
                .find(|d| d * d % l == d2)
                .ok_or_else(|| Error::Internal("no degree fits the modular norm".into()))?;
            let theta = (0..k)
                .map(|i| f.mul(f.mul(d % l, w[i]), inv_sizes[i]))
                .collect();
            Ok((d, theta))
        })
        .collect::<Result<_>>()?;
    modular.sort();

    let zpow: Vec<u64> = (0..m).map(|t| pow_mod(root, t, l)).collect();
    let values: Vec<Vec<CycInt>> = modular
        .par_iter()
        .map(|(d, theta)| {
            (0..k)
                .map(|i| lift_value(&f, c, i, *d, theta, &zpow, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let degrees: Vec<u64> = modular.iter().map(|(d, _)| *d).collect();
    if degrees.iter().map(|d| d * d).sum::<u64>() != n {
        return Err(Error::Internal(
            "degrees do not account for the group order".into(),
        ));
    }
    Ok(CharacterTable {
        conductor: m,
        degrees,
        values,
        class_sizes: c.class_sizes.clone(),
        group_order: n,
        modular: Some(ModularTable {
            prime: l,
            root,
            values: modular.into_iter().map(|(_, t)| t).collect(),
        }),
    })
}

/// χ(z_i) = Σ_s μ_s ζ_o^s with μ_s = (1/o) Σ_l χ(z_i^l) ζ_o^{-sl}.
fn lift_value(
    f: &ModP,
    c: &ClassData,
    i: usize,
    degree: u64,
    theta: &[u64],
    zpow: &[u64],
    m: u64,
) -> Result<CycInt> {
    let o = c.rep_orders[i];
    let step = m / o;
    let inv_o = inv_mod(o % f.l, f.l);
    let mut terms = BTreeMap::new();
    let mut total = 0u64;
    for s in 0..o {
        let mut acc = 0u64;
        for lpow in 0..o {
            let t = theta[c.power_map(i, lpow) as usize];
            let e = (m - (step * s % m) * lpow % m) % m;
            acc = f.add(acc, f.mul(t, zpow[e as usize]));
        }
        let mu = f.mul(acc, inv_o);
        if mu > degree {
            return Err(Error::Internal(format!(
                "eigenvalue multiplicity {mu} exceeds degree {degree}"
            )));
        }
        total += mu;
        if mu != 0 {
            terms.insert(step * s, mu as i64);
        }
    }
    if total != degree {
        return Err(Error::Internal(
            "eigenvalue multiplicities do not sum to the degree".into(),
        ));
    }
    CycInt::from_exponents(m, &terms)
}

pub fn zero_census(t: &CharacterTable) -> ZeroReport {
    let per: Vec<u64> = t
        .values
        .iter()
        .map(|row| row.iter().filter(|v| v.is_zero()).count() as u64)
        .collect();
    let zeros: u64 = per.iter().sum();
    let k = t.class_sizes.len() as u64;
    let total = k * k;
    ZeroReport {
        zero_entries: zeros,
        total_entries: total,
        ratio: BigRational::new(BigInt::from(zeros), BigInt::from(total.max(1))),
        per_character_zero_counts: per,
    }
}

/// Row and column orthogonality, exactly.
pub fn verify_orthogonality(t: &CharacterTable) -> bool {
    let k = t.class_sizes.len();
    if t.values.len() != k || t.values.iter().any(|r| r.len() != k) {
        return false;
    }
    let m = t.conductor;
    let expect = |v: u64| CycInt::from_int(m, v as i64).expect("conductor is positive");
    let rows_ok = (0..k).into_par_iter().all(|i| {
        (i..k).all(|j| {
            let mut acc = DotAccumulator::new(m).expect("conductor is positive");
            for c in 0..k {
                acc.add_product_conj(t.class_sizes[c] as i64, &t.values[i][c], &t.values[j][c]);
            }
            acc.finish() == expect(if i == j { t.group_order } else { 0 })
        })
    });
    if !rows_ok {
        return false;
    }
    (0..k).into_par_iter().all(|a| {
        (a..k).all(|b| {
            let mut acc = DotAccumulator::new(m).expect("conductor is positive");
            for row in &t.values {
                acc.add_product_conj(1, &row[a], &row[b]);
            }
            let want = if a == b {
                t.group_order / t.class_sizes[a]
            } else {
                0
            };
            acc.finish() == expect(want)
        })
    })
}

/// Reducing every value mod ℓ reproduces the modular table.
pub fn check_modular_consistency(t: &CharacterTable) -> bool {
    let Some(md) = &t.modular else {
        return false;
    };
    t.values.iter().zip(&md.values).all(|(row, mrow)| {
        row.iter()
            .zip(mrow)
            .all(|(v, &x)| v.reduce_mod(md.prime, md.root) == x)
    })
}

/// Table of G for a group and its classes in one call.
pub fn character_table_of(g: &GroupTable) -> Result<(ClassData, CharacterTable)> {
    let c = crate::matrix_group::conjugacy_classes(g);
    let t = dixon_character_table(g, &c)?;
    Ok((c, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::Field;
    use crate::matrix_group::{general_linear, symmetric_group};
    use std::sync::Arc;

    fn table(n: usize, q: u64) -> CharacterTable {
        let g = general_linear(n, Arc::new(Field::from_order(q).unwrap())).unwrap();
        character_table_of(&g).unwrap().1
    }

    #[test]
    fn prime_choice() {
        // m = 2, |G| = 6: need ℓ ≡ 1 mod 2 with ℓ² > 24
        assert_eq!(dixon_prime(2, 6).unwrap(), 5);
        assert_eq!(dixon_prime(6, 6).unwrap(), 7);
        assert_eq!(dixon_prime(24, 48).unwrap(), 73);
    }

    #[test]
    fn hessenberg_char_poly() {
        let f = ModP { l: 101 };
        let a = vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]];
        let cp = f.char_poly(&a);
        // trace 9, det 2(12-1) - 1(4) = 18
        assert_eq!(cp[3], 1);
        assert_eq!(cp[2], 101 - 9);
        assert_eq!(cp[0], 101 - 18);
    }

    #[test]
    fn s3_table() {
        let t = table(2, 2);
        assert_eq!(t.degrees, vec![1, 1, 2]);
        assert!(t.values[0].iter().all(|v| v.as_integer() == Some(1)));
        let z = zero_census(&t);
        assert_eq!((z.zero_entries, z.total_entries), (1, 9));
        assert!(verify_orthogonality(&t));
        assert!(check_modular_consistency(&t));
    }

    #[test]
    fn gl2_f3_table() {
        let t = table(2, 3);
        let mut d = t.degrees.clone();
        d.sort();
        assert_eq!(d, vec![1, 1, 2, 2, 2, 3, 3, 4]);
        assert!(verify_orthogonality(&t));
        assert!(check_modular_consistency(&t));
        // 10 zeros occur for every q; the sign character of F_3^× adds 5 more
        let z = zero_census(&t);
        assert_eq!((z.zero_entries, z.total_entries), (15, 64));
    }

    #[test]
    fn gl3_f2_table() {
        let t = table(3, 2);
        assert_eq!(t.degrees, vec![1, 3, 3, 6, 7, 8]);
        assert!(verify_orthogonality(&t));
    }

    #[test]
    fn mutation_breaks_orthogonality() {
        let mut t = table(2, 2);
        t.values[2][1] = t.values[2][1].add(&CycInt::from_int(t.conductor, 1).unwrap());
        assert!(!verify_orthogonality(&t));
    }

    #[test]
    fn symmetric_group_s4() {
        let g = symmetric_group(4, Arc::new(Field::new(2, 1).unwrap())).unwrap();
        let (_, t) = character_table_of(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2, 3, 3]);
        assert!(verify_orthogonality(&t));
        // S4 has 4 zero entries
        assert_eq!(zero_census(&t).zero_entries, 4);
    }
}
