//! Exact arithmetic substrate: cyclotomic integers, integer polynomials in q,
//! rational functions and exact rationals. Nothing in here takes a tolerance.

mod cyclotomic;
mod poly;
mod ratfunc;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use cyclotomic::{basis, cyclotomic_polynomial, CycInt, CyclotomicBasis, DotAccumulator};
pub use poly::{poly_fit_and_check_monic, IntPoly, PolyFit};
pub use ratfunc::{ratfunc_limit_at_infinity, ExtRational, RatFunc};

use crate::error::Result;

/// Canonical reduction of `Σ c_e ζ_m^e`.
pub fn cyc_make(m: u64, exponents: &BTreeMap<u64, i64>) -> Result<CycInt> {
    CycInt::from_exponents(m, exponents)
}

pub fn cyc_is_zero(v: &CycInt) -> bool {
    v.is_zero()
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// "num/den" with no decimal point; integers still carry "/1" only when asked.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`rational_string`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}
