use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{int_div_exact, rat_gcd, rat_to_primitive, IntPoly};
use crate::error::{Error, Result};

/// A rational, or a signed infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    Finite(BigRational),
    PosInfinity,
    NegInfinity,
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{}", crate::exact_num::rational_string(r)),
            ExtRational::PosInfinity => write!(f, "+inf"),
            ExtRational::NegInfinity => write!(f, "-inf"),
        }
    }
}

/// Rational function in q in lowest terms; denominator has positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: IntPoly::one(),
            });
        }
        let g = rat_to_primitive(&rat_gcd(&num.to_rational(), &den.to_rational()));
        let mut num = int_div_exact(&num, &g).expect("gcd divides numerator");
        let mut den = int_div_exact(&den, &g).expect("gcd divides denominator");
        let c = num_integer::Integer::gcd(&num.content(), &den.content());
        let sign = if den.leading().is_some_and(|l| l.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let k = c * sign;
        num = IntPoly::new(num.coeffs().iter().map(|x| x / &k).collect());
        den = IntPoly::new(den.coeffs().iter().map(|x| x / &k).collect());
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    /// Value at q = x, or `None` where the denominator vanishes.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }

    pub fn eval_int(&self, x: i64) -> Option<BigRational> {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("nonzero denominator")
    }

    /// Limit as q → +∞.
    pub fn limit_at_infinity(&self) -> ExtRational {
        let Some(dn) = self.num.degree() else {
            return ExtRational::Finite(BigRational::zero());
        };
        let dd = self.den.degree().expect("denominator is nonzero");
        let ln = self.num.leading().expect("nonzero").clone();
        let ld = self.den.leading().expect("nonzero").clone();
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => ExtRational::Finite(BigRational::zero()),
            std::cmp::Ordering::Equal => ExtRational::Finite(BigRational::new(ln, ld)),
            std::cmp::Ordering::Greater => {
                if ln.is_positive() == ld.is_positive() {
                    ExtRational::PosInfinity
                } else {
                    ExtRational::NegInfinity
                }
            }
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.leading().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Free-function form used by the CLI and tests.
pub fn ratfunc_limit_at_infinity(f: &RatFunc) -> ExtRational {
    f.limit_at_infinity()
}
