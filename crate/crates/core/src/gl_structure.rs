//! Structure of GL_n(F_q): maximal tori indexed by partitions, regular
//! element counts, general-position characters and closed-form zero ratios.
//!
//! The torus T_λ^F = Π F_{q^{λ_i}}^× is handled through discrete logarithms:
//! all factors embed in the cyclic group F_{q^L}^× with L = lcm(λ), where the
//! Frobenius acts as multiplication of exponents by q.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact_num::{poly_fit_and_check_monic, IntPoly, PolyFit, RatFunc};
use crate::finite_field::{matrix as fm, prime_power, Field};
use crate::matrix_group::{conjugacy_classes, general_linear};
use crate::weyl_stats::{partitions, sym_centralizer_order};

/// Largest torus enumerated element by element.
pub const TORUS_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlDescriptor {
    pub n: usize,
    pub q: u64,
    pub rank: usize,
    pub semisimple_rank: usize,
    pub center_order: u64,
    pub positive_roots: usize,
    pub class_count: BigInt,
}

/// Number of conjugacy classes of GL_n(F_q): [x^n] Π_k (1 − x^k)/(1 − q x^k).
pub fn gl_class_count(n: usize, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let mut s = vec![BigInt::from(0); n + 1];
    s[0] = BigInt::from(1);
    for k in 1..=n {
        // multiply by (1 - x^k)
        for d in (k..=n).rev() {
            let t = s[d - k].clone();
            s[d] -= t;
        }
        // divide by (1 - q x^k)
        for d in k..=n {
            let t = &s[d - k] * &q;
            s[d] += t;
        }
    }
    s[n].clone()
}

pub fn gl_descriptor(n: usize, q: u64) -> Result<GlDescriptor> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if n == 0 {
        return Err(Error::UnsupportedN(n));
    }
    Ok(GlDescriptor {
        n,
        q,
        rank: n,
        semisimple_rank: n - 1,
        center_order: q - 1,
        positive_roots: n * (n - 1) / 2,
        class_count: gl_class_count(n, q),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRecord {
    pub partition: Vec<u32>,
    pub torus_order: IntPoly,
    pub torus_order_value: u64,
    pub c_lambda: u64,
    pub f_lambda: u64,
    pub regular_class_count: u64,
    /// Regular classes of the dual torus; GL_n is self-dual, so this equals
    /// the regular class count.
    pub dual_regular_count: u64,
}

/// The cyclic group F_{q^L}^× by exponents, with subgroups of order q^d − 1.
struct TorusFactors {
    q: u64,
    modulus: u64,
    parts: Vec<u32>,
}

impl TorusFactors {
    fn new(parts: &[u32], q: u64) -> Result<Self> {
        let l = parts
            .iter()
            .fold(1u64, |acc, &p| num_integer::lcm(acc, p as u64));
        let modulus = q
            .checked_pow(l as u32)
            .ok_or_else(|| Error::BudgetExceeded(format!("q^{l} overflows")))?
            - 1;
        Ok(TorusFactors {
            q,
            modulus,
            parts: parts.to_vec(),
        })
    }

    fn factor_order(&self, d: u32) -> u64 {
        self.q.pow(d) - 1
    }

    /// Exponent in F_{q^L}^× of the k-th element of F_{q^d}^×.
    fn embed(&self, d: u32, k: u64) -> u64 {
        k * (self.modulus / self.factor_order(d))
    }

    /// Galois orbit of an exponent: its size and least member.
    fn orbit(&self, e: u64) -> (u32, u64) {
        let mut x = e;
        let mut min = e;
        let mut size = 0;
        loop {
            size += 1;
            x = (x as u128 * self.q as u128 % self.modulus as u128) as u64;
            min = min.min(x);
            if x == e {
                return (size, min);
            }
        }
    }

    fn order(&self) -> u64 {
        self.parts.iter().map(|&d| self.factor_order(d)).product()
    }
}

/// Number of regular elements of T_λ^F, counted element by element.
pub fn regular_element_count(parts: &[u32], q: u64) -> Result<u64> {
    let tf = TorusFactors::new(parts, q)?;
    let total = tf.order();
    if total > TORUS_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "torus of order {total} exceeds {TORUS_BUDGET}"
        )));
    }
    // per factor: Some(orbit representative) when the element has full degree
    let tables: Vec<Vec<Option<u64>>> = parts
        .iter()
        .map(|&d| {
            (0..tf.factor_order(d))
                .map(|k| {
                    let (size, rep) = tf.orbit(tf.embed(d, k));
                    (size == d).then_some(rep)
                })
                .collect()
        })
        .collect();
    let mut count = 0u64;
    let mut idx = vec![0usize; parts.len()];
    let mut reps = vec![0u64; parts.len()];
    'outer: loop {
        let mut regular = true;
        for (i, t) in tables.iter().enumerate() {
            match t[idx[i]] {
                Some(r) => reps[i] = r,
                None => {
                    regular = false;
                    break;
                }
            }
        }
        if regular {
            // orbits of different sizes are disjoint; equal sizes must differ
            'check: for i in 0..parts.len() {
                for j in 0..i {
                    if parts[i] == parts[j] && reps[i] == reps[j] {
                        regular = false;
                        break 'check;
                    }
                }
            }
        }
        if regular {
            count += 1;
        }
        for i in (0..parts.len()).rev() {
            idx[i] += 1;
            if idx[i] < tables[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    Ok(count)
}

fn torus_record(parts: &[u32], q: u64) -> Result<TorusRecord> {
    let torus_order = parts.iter().fold(IntPoly::one(), |acc, &k| {
        &acc * &IntPoly::q_pow_minus_one(k as usize)
    });
    let torus_order_value = parts.iter().map(|&k| q.pow(k) - 1).product();
    let c_lambda = sym_centralizer_order(parts)
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded("centralizer order".into()))?;
    let f_lambda = regular_element_count(parts, q)?;
    if f_lambda % c_lambda != 0 {
        return Err(Error::Internal(format!(
            "c_λ = {c_lambda} does not divide f_λ = {f_lambda} for λ = {parts:?}"
        )));
    }
    Ok(TorusRecord {
        partition: parts.to_vec(),
        torus_order,
        torus_order_value,
        c_lambda,
        f_lambda,
        regular_class_count: f_lambda / c_lambda,
        dual_regular_count: f_lambda / c_lambda,
    })
}

pub fn torus_inventory(n: usize, q: u64) -> Result<Vec<TorusRecord>> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if n == 0 || n > 6 || q > 16 {
        return Err(Error::BudgetExceeded(format!(
            "torus inventory supports n ≤ 6 and q ≤ 16 (got n = {n}, q = {q})"
        )));
    }
    partitions(n as u32)
        .iter()
        .map(|p| torus_record(p, q))
        .collect()
}

/// Σ_λ f_λ / c_λ.
pub fn regular_ss_class_count(n: usize, q: u64) -> Result<u64> {
    Ok(torus_inventory(n, q)?
        .iter()
        .map(|r| r.regular_class_count)
        .sum())
}

/// Classes of GL_n(F_q) whose representative has a squarefree characteristic
/// polynomial, from an enumerated group.
pub fn brute_regular_ss_class_count(n: usize, q: u64) -> Result<u64> {
    let field = Arc::new(Field::from_order(q)?);
    let g = general_linear(n, field.clone())?;
    let c = conjugacy_classes(&g);
    let mg = g.as_matrix_group().expect("matrix group");
    Ok(c.class_reps
        .iter()
        .filter(|&&r| fm::char_poly(&field, mg.matrix(r), n).is_squarefree(&field))
        .count() as u64)
}

/// Orbits of C_W(w) on the characters of T_λ^F with trivial stabilizer.
///
/// A character is a tuple of exponents j_i mod q^{λ_i} − 1. The centralizer
/// Π (Z/d ≀ S_{m_d}) acts by permuting equal-size factors and applying
/// powers of Frobenius (j ↦ j·q) on each.
pub fn general_position_count(parts: &[u32], q: u64) -> Result<u64> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let mut parts = parts.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let orders: Vec<u64> = parts
        .iter()
        .map(|&d| q.checked_pow(d).map(|x| x - 1))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::BudgetExceeded("torus order overflows".into()))?;
    let total: u64 = orders.iter().product();
    let c_lambda = sym_centralizer_order(&parts)
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded("centralizer order".into()))?;
    if total.saturating_mul(c_lambda) > 50 * TORUS_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{total} characters × {c_lambda} centralizer elements"
        )));
    }
    let group = centralizer_elements(&parts);
    debug_assert_eq!(group.len() as u64, c_lambda);
    let mut general = 0u64;
    let mut theta = vec![0u64; parts.len()];
    let mut image = vec![0u64; parts.len()];
    'outer: loop {
        let trivial_stabilizer = group.iter().skip(1).all(|(perm, shifts)| {
            for (t, (&target, &a)) in perm.iter().zip(shifts).enumerate() {
                let m = orders[t];
                let qa = (0..a).fold(1u64, |acc, _| acc * q % m.max(1));
                image[target] = (theta[t] as u128 * qa as u128 % m.max(1) as u128) as u64;
            }
            image != theta
        });
        if trivial_stabilizer {
            general += 1;
        }
        for i in (0..parts.len()).rev() {
            theta[i] += 1;
            if theta[i] < orders[i] {
                continue 'outer;
            }
            theta[i] = 0;
        }
        break;
    }
    if !general.is_multiple_of(c_lambda) {
        return Err(Error::Internal(
            "general-position characters do not form free orbits".into(),
        ));
    }
    Ok(general / c_lambda)
}

/// Elements of Π_d (Z/d ≀ S_{m_d}) as (target position, Frobenius power)
/// per factor; the identity comes first. `parts` must be sorted.
fn centralizer_elements(parts: &[u32]) -> Vec<(Vec<usize>, Vec<u32>)> {
    let k = parts.len();
    // blocks of equal parts
    let mut blocks: Vec<(usize, usize)> = vec![];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j < k && parts[j] == parts[i] {
            j += 1;
        }
        blocks.push((i, j));
        i = j;
    }
    let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
    for &(s, e) in &blocks {
        let local = permutations(e - s);
        perms = perms
            .into_iter()
            .flat_map(|p| {
                local.iter().map(move |lp| {
                    let mut q = p.clone();
                    for (off, &t) in lp.iter().enumerate() {
                        q[s + off] = s + t;
                    }
                    q
                })
            })
            .collect();
    }
    let mut shifts: Vec<Vec<u32>> = vec![vec![]];
    for &d in parts {
        shifts = shifts
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    let mut out = vec![];
    for p in &perms {
        for s in &shifts {
            out.push((p.clone(), s.clone()));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The displayed zero ratios for GL_2 and GL_3 as rational functions of q.
pub fn gln_zero_ratio_ratfunc(n: usize) -> Result<RatFunc> {
    match n {
        2 => RatFunc::new(
            IntPoly::from_i64(&[2, -2, 1]),
            IntPoly::from_i64(&[2, 4, 2]),
        ),
        3 => RatFunc::new(
            IntPoly::from_i64(&[-18, -45, 14, -2, 11]),
            IntPoly::from_i64(&[0, 0, 18, 36, 18]),
        ),
        _ => Err(Error::UnsupportedN(n)),
    }
}

pub fn gln_zero_ratio_formula(n: usize, q: u64) -> Result<BigRational> {
    gln_zero_ratio_ratfunc(n)?
        .eval_int(q as i64)
        .ok_or_else(|| Error::InvalidArgument(format!("formula undefined at q = {q}")))
}

/// Fits f_λ(q) over the sample values of q to a monic polynomial of degree n.
pub fn f_lambda_polynomial(parts: &[u32], qs: &[u64]) -> Result<PolyFit> {
    let n: u32 = parts.iter().sum();
    let samples = qs
        .iter()
        .map(|&q| {
            Ok((
                BigInt::from(q),
                BigInt::from(regular_element_count(parts, q)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    poly_fit_and_check_monic(&samples, n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_count_polynomials() {
        assert_eq!(gl_class_count(2, 3), BigInt::from(8));
        assert_eq!(gl_class_count(3, 2), BigInt::from(6));
        assert_eq!(gl_class_count(3, 3), BigInt::from(24));
        assert_eq!(gl_class_count(2, 5), BigInt::from(24));
        assert_eq!(gl_class_count(1, 7), BigInt::from(6));
    }

    #[test]
    fn torus_records_n2_q3() {
        let inv = torus_inventory(2, 3).unwrap();
        let split = inv.iter().find(|r| r.partition == vec![1, 1]).unwrap();
        assert_eq!(
            (
                split.torus_order_value,
                split.f_lambda,
                split.regular_class_count
            ),
            (4, 2, 1)
        );
        let ell = inv.iter().find(|r| r.partition == vec![2]).unwrap();
        assert_eq!(
            (ell.torus_order_value, ell.f_lambda, ell.regular_class_count),
            (8, 6, 3)
        );
        assert_eq!(regular_ss_class_count(2, 3).unwrap(), 4);
        assert_eq!(regular_ss_class_count(2, 2).unwrap(), 1);
    }

    #[test]
    fn split_torus_has_no_regular_elements_over_f2() {
        assert_eq!(regular_element_count(&[1, 1], 2).unwrap(), 0);
        for q in [3, 4, 5, 7] {
            assert_eq!(
                regular_element_count(&[1, 1], q).unwrap(),
                (q - 1) * (q - 2)
            );
        }
    }

    #[test]
    fn rss_counts_match_brute_force() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)] {
            assert_eq!(
                regular_ss_class_count(n, q).unwrap(),
                brute_regular_ss_class_count(n, q).unwrap(),
                "GL{n}({q})"
            );
        }
    }

    #[test]
    fn general_position_examples() {
        assert_eq!(general_position_count(&[1, 1], 5).unwrap(), 6);
        assert_eq!(general_position_count(&[2], 3).unwrap(), 3);
        assert_eq!(general_position_count(&[1, 1], 2).unwrap(), 0);
    }

    #[test]
    fn centralizer_sizes() {
        assert_eq!(centralizer_elements(&[1, 1, 1]).len(), 6);
        assert_eq!(centralizer_elements(&[2, 1]).len(), 2);
        assert_eq!(centralizer_elements(&[2, 2]).len(), 8);
        assert_eq!(centralizer_elements(&[3]).len(), 3);
    }

    #[test]
    fn formulas() {
        assert_eq!(
            gln_zero_ratio_formula(2, 2).unwrap(),
            BigRational::new(1.into(), 9.into())
        );
        assert_eq!(
            gln_zero_ratio_formula(2, 3).unwrap(),
            BigRational::new(5.into(), 32.into())
        );
        assert_eq!(
            gln_zero_ratio_formula(3, 3).unwrap(),
            BigRational::new(5.into(), 16.into())
        );
        assert!(gln_zero_ratio_formula(4, 3).is_err());
    }

    #[test]
    fn f_lambda_is_monic_polynomial() {
        for parts in partitions(3) {
            let fit = f_lambda_polynomial(&parts, &[2, 3, 4, 5, 7, 8]).unwrap();
            assert!(fit.monic_of_degree, "{parts:?}");
        }
    }
}
