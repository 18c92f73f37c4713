//! Cyclotomic integers in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
//!
//! Every value is kept reduced modulo the m-th cyclotomic polynomial, so two
//! values are equal exactly when their coefficient vectors are equal. The
//! zero test used by every census in this crate is therefore a plain scan of
//! integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Reduction data for a fixed conductor.
#[derive(Debug)]
pub struct CyclotomicBasis {
    conductor: u64,
    phi: usize,
    cyclotomic_poly: Vec<i64>,
    // Row e holds the canonical coordinates of ζ^e, for 0 <= e < m.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicBasis {
    fn build(m: u64) -> Self {
        let poly = cyclotomic_polynomial(m);
        let phi = poly.len() - 1;
        let mut powers: Vec<Vec<i64>> = Vec::with_capacity(m as usize);
        for e in 0..m as usize {
            if e < phi {
                let mut row = vec![0; phi];
                row[e] = 1;
                powers.push(row);
            } else {
                // x * x^{e-1}, folding the x^phi term back with the monic relation.
                let prev = &powers[e - 1];
                let top = prev[phi - 1];
                let mut row = vec![0i64; phi];
                for i in (1..phi).rev() {
                    row[i] = prev[i - 1];
                }
                for (i, c) in poly[..phi].iter().enumerate() {
                    row[i] = row[i]
                        .checked_sub(top.checked_mul(*c).expect("cyclotomic reduction overflow"))
                        .expect("cyclotomic reduction overflow");
                }
                powers.push(row);
            }
        }
        CyclotomicBasis {
            conductor: m,
            phi,
            cyclotomic_poly: poly,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Coefficients of Φ_m, lowest degree first.
    pub fn cyclotomic_poly(&self) -> &[i64] {
        &self.cyclotomic_poly
    }

    /// Fold a vector indexed by exponents mod m into canonical coordinates.
    fn reduce_cyclic(&self, buf: &[i128]) -> Vec<i64> {
        let mut acc = vec![0i128; self.phi];
        for (e, &c) in buf.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if e < self.phi {
                acc[e] += c;
            } else {
                for (a, &r) in acc.iter_mut().zip(&self.powers[e]) {
                    if r != 0 {
                        *a += c * r as i128;
                    }
                }
            }
        }
        acc.into_iter()
            .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds 64 bits"))
            .collect()
    }
}

fn basis_cache() -> &'static Mutex<FxHashMap<u64, Arc<CyclotomicBasis>>> {
    static CACHE: OnceLock<Mutex<FxHashMap<u64, Arc<CyclotomicBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(FxHashMap::default()))
}

/// Shared reduction data for conductor `m`.
pub fn basis(m: u64) -> Result<Arc<CyclotomicBasis>> {
    if m == 0 {
        return Err(Error::ZeroConductor);
    }
    let mut cache = basis_cache().lock().expect("basis cache poisoned");
    Ok(cache
        .entry(m)
        .or_insert_with(|| Arc::new(CyclotomicBasis::build(m)))
        .clone())
}

/// Φ_m as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m > 0);
    let divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut known: FxHashMap<u64, Vec<i64>> = FxHashMap::default();
    for &d in &divisors {
        // x^d - 1 divided by Φ_e for every proper divisor e of d.
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for &e in divisors.iter().take_while(|&&e| e < d) {
            if d % e == 0 {
                num = exact_monic_div(&num, &known[&e]);
            }
        }
        known.insert(d, num);
    }
    known.remove(&m).expect("m divides itself")
}

fn exact_monic_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// An element of Z[ζ_m] in canonical coordinates.
#[derive(Clone)]
pub struct CycInt {
    basis: Arc<CyclotomicBasis>,
    coeffs: Vec<i64>,
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            return self.coeffs == other.coeffs;
        }
        let l = self.conductor().lcm(&other.conductor());
        self.lift(l).expect("lcm conductor").coeffs == other.lift(l).expect("lcm conductor").coeffs
    }
}

impl Eq for CycInt {}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(m={}, {})", self.conductor(), self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "z")?,
                (1, _) => write!(f, "{a}*z")?,
                (_, 1) => write!(f, "z^{i}")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl CycInt {
    /// Reduce `Σ c_e ζ_m^e` to canonical form. Exponents are taken mod m.
    pub fn from_exponents(m: u64, terms: &BTreeMap<u64, i64>) -> Result<Self> {
        let b = basis(m)?;
        let mut buf = vec![0i128; m as usize];
        for (&e, &c) in terms {
            buf[(e % m) as usize] += c as i128;
        }
        let coeffs = b.reduce_cyclic(&buf);
        Ok(CycInt { basis: b, coeffs })
    }

    pub fn zero(m: u64) -> Result<Self> {
        let b = basis(m)?;
        let coeffs = vec![0; b.phi];
        Ok(CycInt { basis: b, coeffs })
    }

    pub fn from_int(m: u64, k: i64) -> Result<Self> {
        let mut z = Self::zero(m)?;
        z.coeffs[0] = k;
        Ok(z)
    }

    /// ζ_m^e.
    pub fn root_of_unity(m: u64, e: u64) -> Result<Self> {
        let b = basis(m)?;
        let coeffs = b.powers[(e % m) as usize].clone();
        Ok(CycInt { basis: b, coeffs })
    }

    /// Build from canonical coordinates; a shorter vector is zero-padded.
    pub fn from_coeffs(m: u64, coeffs: &[i64]) -> Result<Self> {
        let b = basis(m)?;
        if coeffs.len() > b.phi {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients exceed phi({m}) = {}",
                coeffs.len(),
                b.phi
            )));
        }
        let mut c = coeffs.to_vec();
        c.resize(b.phi, 0);
        Ok(CycInt {
            basis: b,
            coeffs: c,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.basis.conductor
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Rational integer value, if the element lies in Z.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-express in conductor `l`, which must be a multiple of the current one.
    pub fn lift(&self, l: u64) -> Result<Self> {
        let m = self.conductor();
        if l == m {
            return Ok(self.clone());
        }
        if l == 0 || !l.is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "conductor {l} is not a multiple of {m}"
            )));
        }
        let step = l / m;
        let terms: BTreeMap<u64, i64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as u64 * step, c))
            .collect();
        Self::from_exponents(l, &terms)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.conductor() == other.conductor() {
            (self.clone(), other.clone())
        } else {
            let l = self.conductor().lcm(&other.conductor());
            (self.lift(l).expect("lift"), other.lift(l).expect("lift"))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other);
            return a.add(&b);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).expect("cyclotomic coefficient overflow"))
            .collect();
        CycInt {
            basis: self.basis.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        CycInt {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        CycInt {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.checked_mul(k).expect("cyclotomic coefficient overflow"))
                .collect(),
        }
    }

    /// Exact division by a rational integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coeffs.iter().any(|c| c % k != 0) {
            return None;
        }
        Some(CycInt {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        let m = self.conductor() as usize;
        let mut buf = vec![0i128; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    buf[(i + j) % m] += a as i128 * b as i128;
                }
            }
        }
        CycInt {
            basis: self.basis.clone(),
            coeffs: self.basis.reduce_cyclic(&buf),
        }
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let m = self.conductor() as usize;
        let mut buf = vec![0i128; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            buf[(m - i) % m] += a as i128;
        }
        CycInt {
            basis: self.basis.clone(),
            coeffs: self.basis.reduce_cyclic(&buf),
        }
    }

    /// Image under Z[ζ_m] → F_ℓ, ζ_m ↦ `root` (an element of order m mod ℓ).
    pub fn reduce_mod(&self, modulus: u64, root: u64) -> u64 {
        let l = modulus as i128;
        let mut acc: i128 = 0;
        let mut pw: i128 = 1;
        for &c in &self.coeffs {
            acc = (acc + (c as i128).rem_euclid(l) * pw) % l;
            pw = pw * root as i128 % l;
        }
        acc as u64
    }

    /// Sum over a slice; the empty sum is zero of conductor `m`.
    pub fn sum<'a>(m: u64, items: impl IntoIterator<Item = &'a CycInt>) -> Result<Self> {
        let mut acc = Self::zero(m)?;
        for it in items {
            acc = acc.add(it);
        }
        Ok(acc)
    }
}

/// Accumulates `Σ a_k b_k` with one reduction at the end.
pub struct DotAccumulator {
    basis: Arc<CyclotomicBasis>,
    buf: Vec<i128>,
}

impl DotAccumulator {
    pub fn new(m: u64) -> Result<Self> {
        let b = basis(m)?;
        let buf = vec![0i128; m as usize];
        Ok(DotAccumulator { basis: b, buf })
    }

    /// Adds `weight * a * b`; operands must share the accumulator's conductor.
    pub fn add_product(&mut self, weight: i64, a: &CycInt, b: &CycInt) {
        let m = self.buf.len();
        debug_assert_eq!(a.conductor() as usize, m);
        debug_assert_eq!(b.conductor() as usize, m);
        let w = weight as i128;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let wx = w * x as i128;
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    self.buf[(i + j) % m] += wx * y as i128;
                }
            }
        }
    }

    /// Adds `weight * a * conj(b)`.
    pub fn add_product_conj(&mut self, weight: i64, a: &CycInt, b: &CycInt) {
        let m = self.buf.len();
        let w = weight as i128;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let wx = w * x as i128;
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    self.buf[(i + m - j) % m] += wx * y as i128;
                }
            }
        }
    }

    pub fn finish(self) -> CycInt {
        let coeffs = self.basis.reduce_cyclic(&self.buf);
        CycInt {
            basis: self.basis,
            coeffs,
        }
    }
}
