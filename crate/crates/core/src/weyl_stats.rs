//! Conjugacy classes of Weyl groups: centralizer orders, the conjugacy
//! probability Σ 1/c², and torus orders det(q·Id − w).
//!
//! Classical types come from partition combinatorics. G2, F4 and E6 are
//! enumerated as integer reflection groups on the root lattice.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::exact_num::IntPoly;

/// Largest rank for which class lists are built by default.
pub const DEFAULT_RANK_CAP: usize = 60;

/// Class lists longer than this are refused (the moment sums remain available).
pub const CLASS_COUNT_CAP: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G2,
    F4,
    E6,
}

impl CartanType {
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            CartanType::A | CartanType::B | CartanType::C | CartanType::D
        )
    }

    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            CartanType::G2 => Some(2),
            CartanType::F4 => Some(4),
            CartanType::E6 => Some(6),
            _ => None,
        }
    }

    fn check_rank(self, rank: usize) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidRank {
                kind: self.to_string(),
                rank,
                reason: reason.to_string(),
            })
        };
        match self {
            CartanType::A if rank < 1 => bad("type A needs rank at least 1"),
            CartanType::B | CartanType::C if rank < 2 => bad("types B and C need rank at least 2"),
            CartanType::D if rank < 4 => bad("type D needs rank at least 4"),
            t => match t.fixed_rank() {
                Some(r) if r != rank => bad(&format!("type {t} has rank {r}")),
                _ => Ok(()),
            },
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::G2 => "G2",
            CartanType::F4 => "F4",
            CartanType::E6 => "E6",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "G2" | "G" => Ok(CartanType::G2),
            "F4" | "F" => Ok(CartanType::F4),
            "E6" => Ok(CartanType::E6),
            "E7" | "E8" => Err(Error::UnsupportedType(format!(
                "{s}: Weyl group too large for exhaustive enumeration (supported: A, B, C, D, G2, F4, E6)"
            ))),
            _ => Err(Error::UnsupportedType(format!(
                "{s} (supported: A, B, C, D, G2, F4, E6)"
            ))),
        }
    }
}

/// Lattice used for type A torus orders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TypeALattice {
    /// Permutation lattice of rank r+1, as for GL_{r+1}.
    #[default]
    Gl,
    /// Reflection lattice of rank r, as for SL_{r+1}.
    Sl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassShape {
    /// Cycle type, parts in decreasing order.
    Partition(Vec<u32>),
    /// Signed cycle type: positive and negative cycles. `split` marks the two
    /// halves of a type D class that splits (`Some(true)` for "+").
    Signed {
        pos: Vec<u32>,
        neg: Vec<u32>,
        split: Option<bool>,
    },
    /// Exceptional type: characteristic polynomial of a representative.
    Matrix(IntPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylClass {
    pub label: String,
    pub shape: ClassShape,
    pub class_size: BigInt,
    pub centralizer_order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylClassTable {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub lattice: TypeALattice,
    pub group_order: BigInt,
    pub classes: Vec<WeylClass>,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Partitions of n with parts in decreasing order, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(n, n, &mut vec![], &mut out);
    out
}

fn multiplicities(parts: &[u32]) -> Vec<(u32, u64)> {
    let mut out: Vec<(u32, u64)> = vec![];
    for &p in parts {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Π i^{m_i} m_i!, the centralizer order of cycle type `parts` in S_n.
pub fn sym_centralizer_order(parts: &[u32]) -> BigInt {
    multiplicities(parts)
        .into_iter()
        .fold(BigInt::one(), |acc, (i, m)| {
            acc * BigInt::from(i).pow(m as u32) * factorial(m)
        })
}

/// Π (2i)^{m_i} m_i! for one half of a signed cycle type.
fn hyperoctahedral_half(parts: &[u32]) -> BigInt {
    multiplicities(parts)
        .into_iter()
        .fold(BigInt::one(), |acc, (i, m)| {
            acc * BigInt::from(2 * i).pow(m as u32) * factorial(m)
        })
}

fn parts_label(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    inner.join(",")
}

impl WeylClass {
    /// det(q·Id − w) on the lattice of the table.
    pub fn char_poly(&self, lattice: TypeALattice) -> IntPoly {
        match &self.shape {
            ClassShape::Partition(parts) => {
                let full = parts.iter().fold(IntPoly::one(), |acc, &k| {
                    &acc * &IntPoly::q_pow_minus_one(k as usize)
                });
                match lattice {
                    TypeALattice::Gl => full,
                    TypeALattice::Sl => full
                        .div_exact(&IntPoly::q_pow_minus_one(1))
                        .expect("q - 1 divides every torus order"),
                }
            }
            ClassShape::Signed { pos, neg, .. } => {
                let a = pos.iter().fold(IntPoly::one(), |acc, &k| {
                    &acc * &IntPoly::q_pow_minus_one(k as usize)
                });
                neg.iter()
                    .fold(a, |acc, &k| &acc * &IntPoly::q_pow_plus_one(k as usize))
            }
            ClassShape::Matrix(p) => p.clone(),
        }
    }
}

impl WeylClassTable {
    pub fn tau(&self) -> usize {
        self.classes.len()
    }

    pub fn lattice_rank(&self) -> usize {
        match (self.cartan_type, self.lattice) {
            (CartanType::A, TypeALattice::Gl) => self.rank + 1,
            _ => self.rank,
        }
    }

    pub fn class(&self, label: &str) -> Result<&WeylClass> {
        self.classes
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownClass(label.to_string()))
    }

    pub fn sum_inv_c(&self) -> BigRational {
        self.classes
            .par_iter()
            .map(|c| BigRational::new(BigInt::one(), c.centralizer_order.clone()))
            .reduce(BigRational::zero, |a, b| a + b)
    }

    pub fn sum_inv_c_sq(&self) -> BigRational {
        conjugacy_probability(self)
    }
}

fn type_a_table(rank: usize, lattice: TypeALattice) -> WeylClassTable {
    let n = rank as u32 + 1;
    let group_order = factorial(n as u64);
    let classes = partitions(n)
        .into_par_iter()
        .map(|parts| {
            let c = sym_centralizer_order(&parts);
            WeylClass {
                label: format!("({})", parts_label(&parts)),
                class_size: &group_order / &c,
                centralizer_order: c,
                shape: ClassShape::Partition(parts),
            }
        })
        .collect();
    WeylClassTable {
        cartan_type: CartanType::A,
        rank,
        lattice,
        group_order,
        classes,
    }
}

fn signed_table(t: CartanType, rank: usize) -> WeylClassTable {
    let r = rank as u32;
    let b_order = BigInt::from(2).pow(r) * factorial(rank as u64);
    let mut pairs = vec![];
    for k in (0..=r).rev() {
        for pos in partitions(k) {
            for neg in partitions(r - k) {
                pairs.push((pos.clone(), neg));
            }
        }
    }
    let is_d = t == CartanType::D;
    let group_order = if is_d { &b_order / 2 } else { b_order.clone() };
    let classes: Vec<Vec<WeylClass>> = pairs
        .into_par_iter()
        .filter(|(_, neg)| !is_d || neg.len() % 2 == 0)
        .map(|(pos, neg)| {
            let c_b = hyperoctahedral_half(&pos) * hyperoctahedral_half(&neg);
            let base = format!("({}|{})", parts_label(&pos), parts_label(&neg));
            let splits = is_d && neg.is_empty() && pos.iter().all(|p| p % 2 == 0);
            if splits {
                [true, false]
                    .into_iter()
                    .map(|sign| WeylClass {
                        label: format!("{base}{}", if sign { "+" } else { "-" }),
                        class_size: &group_order / &c_b,
                        centralizer_order: c_b.clone(),
                        shape: ClassShape::Signed {
                            pos: pos.clone(),
                            neg: neg.clone(),
                            split: Some(sign),
                        },
                    })
                    .collect()
            } else {
                let c = if is_d { &c_b / 2 } else { c_b };
                vec![WeylClass {
                    label: base,
                    class_size: &group_order / &c,
                    centralizer_order: c,
                    shape: ClassShape::Signed {
                        pos,
                        neg,
                        split: None,
                    },
                }]
            }
        })
        .collect();
    WeylClassTable {
        cartan_type: t,
        rank,
        lattice: TypeALattice::default(),
        group_order,
        classes: classes.into_iter().flatten().collect(),
    }
}

fn cartan_matrix(t: CartanType) -> Vec<Vec<i64>> {
    match t {
        CartanType::G2 => vec![vec![2, -1], vec![-3, 2]],
        CartanType::F4 => vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -2, 0],
            vec![0, -1, 2, -1],
            vec![0, 0, -1, 2],
        ],
        CartanType::E6 => {
            // Bourbaki labels: chain 1-3-4-5-6 with 2 attached to 4.
            let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            let mut a = vec![vec![0i64; 6]; 6];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            a
        }
        _ => unreachable!("classical types are combinatorial"),
    }
}

type Mat = Vec<i64>;

fn mat_mul(a: &Mat, b: &Mat, n: usize) -> Mat {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

/// det(λ·Id − A) by Faddeev–LeVerrier; exact for integer matrices.
pub fn integer_char_poly(a: &[i64], n: usize) -> IntPoly {
    let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![0i128; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let x = a[i * n + l];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] += x * m[l * n + j];
                }
            }
            next[i * n + i] += coeffs[n - k + 1];
        }
        m = next;
        let mut tr = 0i128;
        for i in 0..n {
            for l in 0..n {
                tr += a[i * n + l] * m[l * n + i];
            }
        }
        debug_assert_eq!(tr % k as i128, 0);
        coeffs[n - k] = -tr / k as i128;
    }
    IntPoly::new(coeffs.into_iter().map(BigInt::from).collect())
}

fn exceptional_table(t: CartanType) -> WeylClassTable {
    let a = cartan_matrix(t);
    let n = a.len();
    let mut gens: Vec<Mat> = (0..n)
        .map(|i| {
            let mut m = vec![0i64; n * n];
            for j in 0..n {
                m[j * n + j] = 1;
                m[i * n + j] -= a[i][j];
            }
            m
        })
        .collect();
    gens.sort();
    let id: Mat = (0..n * n).map(|k| i64::from(k % (n + 1) == 0)).collect();
    let mut elems = vec![id.clone()];
    let mut index: FxHashMap<Mat, usize> = FxHashMap::default();
    index.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let x = mat_mul(&elems[i], g, n);
            if !index.contains_key(&x) {
                index.insert(x.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(x);
            }
        }
    }
    let order = elems.len();
    let mut class_of = vec![usize::MAX; order];
    let mut reps = vec![];
    let mut sizes = vec![];
    for start in 0..order {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cls = reps.len();
        class_of[start] = cls;
        let mut size = 1u64;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in &gens {
                // generators are involutions, so g·x·g is conjugation
                let y = mat_mul(&mat_mul(g, &elems[i], n), g, n);
                let j = index[&y];
                if class_of[j] == usize::MAX {
                    class_of[j] = cls;
                    size += 1;
                    stack.push(j);
                }
            }
        }
        reps.push(start);
        sizes.push(size);
    }
    let group_order = BigInt::from(order);
    let classes = reps
        .iter()
        .zip(&sizes)
        .enumerate()
        .map(|(k, (&rep, &size))| WeylClass {
            label: format!("c{}", k + 1),
            shape: ClassShape::Matrix(integer_char_poly(&elems[rep], n)),
            class_size: BigInt::from(size),
            centralizer_order: BigInt::from(order as u64 / size),
        })
        .collect();
    WeylClassTable {
        cartan_type: t,
        rank: n,
        lattice: TypeALattice::default(),
        group_order,
        classes,
    }
}

pub fn weyl_classes(t: CartanType, rank: usize) -> Result<WeylClassTable> {
    weyl_classes_with(t, rank, TypeALattice::default(), DEFAULT_RANK_CAP)
}

pub fn weyl_classes_with(
    t: CartanType,
    rank: usize,
    lattice: TypeALattice,
    rank_cap: usize,
) -> Result<WeylClassTable> {
    t.check_rank(rank)?;
    if rank > rank_cap {
        return Err(Error::BudgetExceeded(format!(
            "rank {rank} exceeds the enumeration cap {rank_cap}"
        )));
    }
    if t.is_classical() {
        let tau = class_moments(t, rank)?.tau;
        if tau > BigInt::from(CLASS_COUNT_CAP) {
            return Err(Error::BudgetExceeded(format!(
                "{t}{rank} has {tau} classes (cap {CLASS_COUNT_CAP})"
            )));
        }
    }
    Ok(match t {
        CartanType::A => type_a_table(rank, lattice),
        CartanType::B | CartanType::C | CartanType::D => signed_table(t, rank),
        _ => exceptional_table(t),
    })
}

/// Σ 1/c_i² over the classes of the table.
pub fn conjugacy_probability(t: &WeylClassTable) -> BigRational {
    t.classes
        .par_iter()
        .map(|c| BigRational::new(BigInt::one(), &c.centralizer_order * &c.centralizer_order))
        .reduce(BigRational::zero, |a, b| a + b)
}

pub fn torus_order_poly(t: &WeylClassTable, label: &str) -> Result<IntPoly> {
    Ok(t.class(label)?.char_poly(t.lattice))
}

/// Class count and the sums Σ 1/c, Σ 1/c² of a classical Weyl group,
/// obtained from generating functions instead of a class list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylMoments {
    pub tau: BigInt,
    pub sum_inv_c: BigRational,
    pub sum_inv_c_sq: BigRational,
}

/// Coefficients up to x^n of Π_{i∈parts} Σ_a w(i,a) x^{ia}.
fn product_series(
    n: usize,
    parts: impl Iterator<Item = usize>,
    w: impl Fn(usize, usize) -> BigRational,
) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); n + 1];
    s[0] = BigRational::one();
    for i in parts {
        let weights: Vec<BigRational> = (0..=n / i).map(|a| w(i, a)).collect();
        let mut next = vec![BigRational::zero(); n + 1];
        for (d, slot) in next.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for (a, wa) in weights.iter().enumerate() {
                if a * i > d {
                    break;
                }
                if !s[d - a * i].is_zero() {
                    acc += wa * &s[d - a * i];
                }
            }
            *slot = acc;
        }
        s = next;
    }
    s
}

fn coeff_of_product(a: &[BigRational], b: &[BigRational], n: usize) -> BigRational {
    (0..=n).fold(BigRational::zero(), |acc, k| acc + &a[k] * &b[n - k])
}

/// Weight 1/(base^a a!)^k, optionally with sign (−1)^a.
fn weight(base: usize, a: usize, k: u32, alternate: bool) -> BigRational {
    let denom = (BigInt::from(base).pow(a as u32) * factorial(a as u64)).pow(k);
    let sign = if alternate && a % 2 == 1 { -1 } else { 1 };
    BigRational::new(BigInt::from(sign), denom)
}

fn moment(t: CartanType, rank: usize, k: u32) -> BigRational {
    match t {
        CartanType::A => {
            let n = rank + 1;
            product_series(n, 1..=n, |i, a| weight(i, a, k, false))[n].clone()
        }
        CartanType::B | CartanType::C => {
            let f = product_series(rank, 1..=rank, |i, a| weight(2 * i, a, k, false));
            coeff_of_product(&f, &f, rank)
        }
        CartanType::D => {
            let f = product_series(rank, 1..=rank, |i, a| weight(2 * i, a, k, false));
            let g = product_series(rank, 1..=rank, |i, a| weight(2 * i, a, k, true));
            let two = BigRational::from_integer(BigInt::from(2));
            // sum over B-classes with an even number of negative cycles
            let even = (coeff_of_product(&f, &f, rank) + coeff_of_product(&f, &g, rank)) / &two;
            // B-classes that split in D: no negative cycles, all cycles even
            let split = product_series(rank, (2..=rank).step_by(2), |i, a| {
                weight(2 * i, a, k, false)
            })[rank]
                .clone();
            let pow2 = BigRational::from_integer(BigInt::from(2).pow(k));
            &pow2 * even - (pow2 - two) * split
        }
        _ => unreachable!("exceptional types are enumerated"),
    }
}

pub fn class_moments(t: CartanType, rank: usize) -> Result<WeylMoments> {
    t.check_rank(rank)?;
    if !t.is_classical() {
        let table = exceptional_table(t);
        return Ok(WeylMoments {
            tau: BigInt::from(table.tau()),
            sum_inv_c: table.sum_inv_c(),
            sum_inv_c_sq: conjugacy_probability(&table),
        });
    }
    let tau = moment(t, rank, 0);
    debug_assert!(tau.is_integer());
    Ok(WeylMoments {
        tau: tau.to_integer(),
        sum_inv_c: moment(t, rank, 1),
        sum_inv_c_sq: moment(t, rank, 2),
    })
}

/// Σ 1/c² over S_n.
pub fn symmetric_conjugacy_probability(n: usize) -> BigRational {
    if n <= 1 {
        return BigRational::one();
    }
    moment(CartanType::A, n - 1, 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbwCheck {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub probability: BigRational,
    pub bound: BigRational,
    pub pass: bool,
    /// Σ 1/c² over S_rank, for the types with a quotient onto it.
    pub symmetric_probability: Option<BigRational>,
    pub quotient_pass: Option<bool>,
}

pub fn bbw_bound_check(t: CartanType, rank: usize) -> Result<BbwCheck> {
    if !t.is_classical() {
        return Err(Error::UnsupportedType(format!(
            "{t}: bound applies to classical types"
        )));
    }
    if rank < 9 {
        return Err(Error::InvalidRank {
            kind: t.to_string(),
            rank,
            reason: "the bound is stated for rank at least 9".into(),
        });
    }
    let probability = class_moments(t, rank)?.sum_inv_c_sq;
    let bound = BigRational::new(BigInt::from(6), BigInt::from(rank * rank));
    let pass = probability <= bound;
    let (symmetric_probability, quotient_pass) = if t == CartanType::A {
        (None, None)
    } else {
        let s = symmetric_conjugacy_probability(rank);
        let ok = probability <= s;
        (Some(s), Some(ok))
    };
    Ok(BbwCheck {
        cartan_type: t,
        rank,
        probability,
        bound,
        pass,
        symmetric_probability,
        quotient_pass,
    })
}
