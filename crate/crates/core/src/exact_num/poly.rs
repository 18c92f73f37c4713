use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial in q, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate q.
    pub fn q() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// q^k - 1.
    pub fn q_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::from(-1);
        c[k] += BigInt::one();
        Self::new(c)
    }

    /// q^k + 1.
    pub fn q_pow_plus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::one();
        c[k] += BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = IntPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact quotient in Z[q], or `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        int_div_exact(self, d)
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c))
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}q", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}q^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;
    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        v.iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(IntPoly::new)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

// Rational-coefficient helpers used for gcd and interpolation.

pub(crate) fn rat_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn rat_divrem(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = rat_trim(den.to_vec());
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = rat_trim(num.to_vec());
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let dl = den.len() - 1;
    let mut quot = vec![BigRational::zero(); rem.len() - dl];
    let lead = den[dl].clone();
    while rem.len() > dl && !rem.is_empty() {
        let k = rem.len() - 1 - dl;
        let c = &rem[rem.len() - 1] / &lead;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c * d;
        }
        quot[k] = c;
        rem = rat_trim(rem);
    }
    (rat_trim(quot), rem)
}

pub(crate) fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = rat_trim(a.to_vec());
    let mut y = rat_trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = rat_divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Scale a rational polynomial to a primitive integer polynomial with positive leading coefficient.
pub(crate) fn rat_to_primitive(p: &[BigRational]) -> IntPoly {
    let p = rat_trim(p.to_vec());
    if p.is_empty() {
        return IntPoly::zero();
    }
    let lcm_den = p.iter().fold(BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm_den.clone())).to_integer())
        .collect();
    let poly = IntPoly::new(ints);
    let mut g = poly.content();
    if poly.leading().is_some_and(|l| l.is_negative()) {
        g = -g;
    }
    IntPoly::new(poly.coeffs.iter().map(|c| c / &g).collect())
}

/// Exact division of integer polynomials; `None` if not exact over Z.
pub(crate) fn int_div_exact(num: &IntPoly, den: &IntPoly) -> Option<IntPoly> {
    let (q, r) = rat_divrem(&num.to_rational(), &den.to_rational());
    if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(IntPoly::new(
        q.into_iter().map(|c| c.to_integer()).collect(),
    ))
}

/// Result of fitting an integer polynomial through sample points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFit {
    pub poly: IntPoly,
    pub monic_of_degree: bool,
}

/// Interpolate through `samples`, insisting on an integer polynomial of degree at most `degree`
/// that fits every sample, and report whether it is monic of exactly that degree.
pub fn poly_fit_and_check_monic(samples: &[(BigInt, BigInt)], degree: usize) -> Result<PolyFit> {
    let mut distinct: Vec<&(BigInt, BigInt)> = Vec::new();
    for s in samples {
        if let Some(prev) = distinct.iter().find(|d| d.0 == s.0) {
            if prev.1 != s.1 {
                return Err(Error::SamplesNotFit(degree));
            }
        } else {
            distinct.push(s);
        }
    }
    if distinct.len() < degree + 1 {
        return Err(Error::InsufficientSamples {
            needed: degree + 1,
            got: distinct.len(),
        });
    }
    // Newton divided differences on the first degree+1 points.
    let pts = &distinct[..degree + 1];
    let xs: Vec<BigRational> = pts
        .iter()
        .map(|p| BigRational::from_integer(p.0.clone()))
        .collect();
    let mut dd: Vec<BigRational> = pts
        .iter()
        .map(|p| BigRational::from_integer(p.1.clone()))
        .collect();
    for level in 1..=degree {
        for i in (level..=degree).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly: Vec<BigRational> = vec![];
    for i in (0..=degree).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &xs[i];
        }
        next[0] += &dd[i];
        poly = rat_trim(next);
    }
    if poly.iter().any(|c| !c.is_integer()) {
        return Err(Error::NonIntegerInterpolant);
    }
    let poly = IntPoly::new(poly.into_iter().map(|c| c.to_integer()).collect());
    if distinct.iter().any(|(x, y)| &poly.eval(x) != y) {
        return Err(Error::SamplesNotFit(degree));
    }
    let monic_of_degree = poly.degree() == Some(degree) && poly.is_monic();
    Ok(PolyFit {
        poly,
        monic_of_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(i64) -> i64, xs: &[i64]) -> Vec<(BigInt, BigInt)> {
        xs.iter()
            .map(|&x| (BigInt::from(x), BigInt::from(f(x))))
            .collect()
    }

    #[test]
    fn fit_cubic() {
        let fit = poly_fit_and_check_monic(&samples(|q| q * q * q, &[2, 3, 4, 5]), 3).unwrap();
        assert_eq!(fit.poly, IntPoly::from_i64(&[0, 0, 0, 1]));
        assert!(fit.monic_of_degree);
    }

    #[test]
    fn fit_zero_samples() {
        let fit = poly_fit_and_check_monic(&samples(|_| 0, &[1, 2, 3]), 2).unwrap();
        assert!(fit.poly.is_zero());
        assert!(!fit.monic_of_degree);
    }

    #[test]
    fn fit_rejects_too_few_points() {
        let err = poly_fit_and_check_monic(&samples(|q| q, &[2, 2, 3]), 2).unwrap_err();
        assert_eq!(err, Error::InsufficientSamples { needed: 3, got: 2 });
    }

    #[test]
    fn fit_rejects_non_integer() {
        // q(q-1)/2 takes integer values but has half-integer coefficients.
        let err =
            poly_fit_and_check_monic(&samples(|q| q * (q - 1) / 2, &[2, 3, 4]), 2).unwrap_err();
        assert_eq!(err, Error::NonIntegerInterpolant);
    }

    #[test]
    fn fit_rejects_extra_point_off_curve() {
        let mut s = samples(|q| q * q, &[1, 2, 3]);
        s.push((BigInt::from(4), BigInt::from(17)));
        assert_eq!(
            poly_fit_and_check_monic(&s, 2).unwrap_err(),
            Error::SamplesNotFit(2)
        );
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(IntPoly::from_i64(&[2, -2, 1]).to_string(), "q^2 - 2*q + 2");
        assert_eq!(IntPoly::q_pow_minus_one(3).to_string(), "q^3 - 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn gcd_over_q() {
        let a = IntPoly::from_i64(&[-1, 0, 1]).to_rational(); // q^2 - 1
        let b = IntPoly::from_i64(&[1, 2, 1]).to_rational(); // (q+1)^2
        assert_eq!(
            rat_to_primitive(&rat_gcd(&a, &b)),
            IntPoly::from_i64(&[1, 1])
        );
    }
}
