//! Small finite fields F_{p^e} with table-driven arithmetic.
//!
//! An element is stored as the integer `Σ c_i p^i`, where `Σ c_i α^i` is its
//! expansion in powers of a root α of the defining modulus. The modulus is the
//! least monic irreducible of degree e in the order of those same integers,
//! so encodings are identical across runs and platforms.

mod fpoly;
pub mod matrix;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact_num::CycInt;

pub use fpoly::FieldPoly;

pub const DEFAULT_FIELD_CAP: u64 = 1_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, e)` with `q = p^e`, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut e = 0;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub struct Field {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.q, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

// Digit-vector helpers over F_p used only during construction.

fn digits(x: u64, p: u64, e: usize) -> Vec<u64> {
    let mut out = vec![0; e];
    let mut r = x;
    for d in out.iter_mut() {
        *d = r % p;
        r /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mod_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // modulus is monic: x^e = -Σ m_i x^i
        for i in 0..e {
            prod[k - e + i] = (prod[k - e + i] + (p - c) * modulus[i]) % p;
        }
        prod[k] = 0;
    }
    prod.truncate(e);
    prod
}

fn poly_rem_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    // den monic
    let mut r = num.to_vec();
    let dl = den.len() - 1;
    while r.len() > dl {
        let c = *r.last().expect("nonempty");
        let k = r.len() - 1 - dl;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                r[k + j] = (r[k + j] + (p - c) * d % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

fn is_irreducible(monic: &[u64], p: u64) -> bool {
    let e = monic.len() - 1;
    if e <= 1 {
        return true;
    }
    for d in 1..=e / 2 {
        for low in 0..p.pow(d as u32) {
            let mut cand = digits(low, p, d);
            cand.push(1);
            if poly_rem_is_zero(monic, &cand, p) {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_cap(p, e, DEFAULT_FIELD_CAP)
    }

    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn with_cap(p: u64, e: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument(
                "extension degree must be positive".into(),
            ));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge {
                size: p.saturating_pow(e),
                cap,
            })?;
        let eu = e as usize;
        let modulus: Vec<u64> = (0..p.pow(e))
            .map(|low| {
                let mut m = digits(low, p, eu);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let mul_digits = |a: u64, b: u64| -> u64 {
            undigits(
                &poly_mod_mul(&digits(a, p, eu), &digits(b, p, eu), &modulus, p),
                p,
            )
        };
        let pow_digits = |a: u64, mut k: u64| -> u64 {
            let mut base = a;
            let mut acc = 1u64;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul_digits(acc, base);
                }
                base = mul_digits(base, base);
                k >>= 1;
            }
            acc
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| factors.iter().all(|&r| pow_digits(g, order / r) != 1))
                .expect("multiplicative group is cyclic")
        };
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for k in 0..order {
            exp.push(x as u32);
            log[x as usize] = k as u32;
            x = mul_digits(x, generator);
        }
        debug_assert_eq!(x, 1);

        let add_digits = |a: u64, b: u64| -> u64 {
            let (da, db) = (digits(a, p, eu), digits(b, p, eu));
            let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p)
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u64> = digits(a, p, eu).iter().map(|&x| (p - x) % p).collect();
                undigits(&d, p) as u32
            })
            .collect();
        let add_table = (q <= 1024).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b) as u32;
                }
            }
            t
        });

        let mut field = Field {
            p,
            e,
            q,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: generator as u32,
            exp,
            log,
            add_table,
            neg,
            trace: vec![],
        };
        field.trace = (0..q as u32)
            .map(|x| {
                let mut acc = 0;
                let mut y = x;
                for _ in 0..e {
                    acc = field.add(acc, y);
                    y = field.frobenius(y);
                }
                debug_assert!((acc as u64) < p);
                acc
            })
            .collect();
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Defining modulus, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A primitive element (generator of the multiplicative group).
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// The element α whose powers give the encoding basis (index p), or 0 when e = 1.
    pub fn alpha(&self) -> u32 {
        if self.e == 1 {
            0
        } else {
            self.p as u32
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    /// Image of the integer k under Z → F_p ⊂ F.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => {
                if self.e == 1 {
                    return ((a as u64 + b as u64) % self.p) as u32;
                }
                let (mut x, mut y) = (a as u64, b as u64);
                let mut out = 0u64;
                let mut place = 1u64;
                for _ in 0..self.e {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                out as u32
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let k = (n - self.log[a as usize] as u64) % n;
        Some(self.exp[k as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q - 1;
        let j = (self.log[a as usize] as u64 % n) * (k % n) % n;
        self.exp[j as usize]
    }

    /// Discrete logarithm to the base of [`Field::generator`].
    pub fn log(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    /// x ↦ x^p.
    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(n / num_integer::gcd(n, l))
    }

    pub fn trace_to_prime(&self, x: u32) -> u32 {
        self.trace[x as usize]
    }

    /// ψ(x) = ζ_p^{Tr(x)}.
    pub fn additive_character(&self, x: u32) -> CycInt {
        CycInt::root_of_unity(self.p, self.trace_to_prime(x) as u64).expect("p > 0")
    }

    /// Σ_x counts[x] ψ(x), aggregated through the trace map.
    pub fn character_sum(&self, counts: &[u64]) -> CycInt {
        let mut by_trace: BTreeMap<u64, i64> = BTreeMap::new();
        for (x, &c) in counts.iter().enumerate() {
            if c != 0 {
                *by_trace.entry(self.trace[x] as u64).or_default() += c as i64;
            }
        }
        CycInt::from_exponents(self.p, &by_trace).expect("p > 0")
    }
}

/// Free-function forms mirroring the field operations.
pub fn field_make(p: u64, e: u32) -> Result<Field> {
    Field::new(p, e)
}

pub fn trace_to_prime(f: &Field, x: u32) -> u32 {
    f.trace_to_prime(x)
}

pub fn additive_character(f: &Field, x: u32) -> CycInt {
    f.additive_character(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_trace() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // α + α² = 1
        assert_eq!(f.trace_to_prime(f.alpha()), 1);
        assert_eq!(f.trace_to_prime(0), 0);
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f9_modulus() {
        // Oracle: enumerate monic quadratics over F_3 in order and test for roots.
        let mut first = None;
        'outer: for low in 0..9u64 {
            let (b, a) = (low % 3, low / 3);
            for x in 0..3u64 {
                if (x * x + a * x + b) % 3 == 0 {
                    continue 'outer;
                }
            }
            first = Some(vec![b as u32, a as u32, 1]);
            break;
        }
        let f = Field::new(3, 2).unwrap();
        assert_eq!(Some(f.modulus().to_vec()), first);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.trace_to_prime(1), 2);
    }

    #[test]
    fn rejects_composite_and_oversize() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            Field::with_cap(2, 21, 1 << 20).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert_eq!(Field::from_order(6).unwrap_err(), Error::NotPrimePower(6));
    }

    #[test]
    fn additive_character_values() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.additive_character(1).as_integer(), Some(-1));
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.additive_character(0).as_integer(), Some(1));
        let f4 = Field::new(2, 2).unwrap();
        let total = CycInt::sum(
            2,
            f4.elements()
                .map(|x| f4.additive_character(x))
                .collect::<Vec<_>>()
                .iter(),
        )
        .unwrap();
        assert!(total.is_zero());
    }

    #[test]
    fn field_axioms_on_small_fields() {
        for (p, e) in [(2, 1), (2, 3), (3, 2), (5, 1), (7, 2), (2, 4)] {
            let f = Field::new(p, e).unwrap();
            let q = f.order() as u32;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                // Frobenius^e = id
                let mut y = a;
                for _ in 0..e {
                    y = f.frobenius(y);
                }
                assert_eq!(y, a);
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Frobenius is additive
                    assert_eq!(
                        f.frobenius(f.add(a, b)),
                        f.add(f.frobenius(a), f.frobenius(b))
                    );
                }
            }
            // fixed points of Frobenius are exactly F_p
            let fixed: Vec<u32> = (0..q).filter(|&a| f.frobenius(a) == a).collect();
            assert_eq!(fixed, (0..p as u32).collect::<Vec<_>>());
            assert_eq!(f.element_order(f.generator()), Some(f.order() - 1));
        }
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(2, 11).unwrap();
        assert_eq!(f.order(), 2048);
        let a = 1234;
        assert_eq!(f.add(a, a), 0);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        let f = Field::new(1031, 1).unwrap();
        assert_eq!(f.add(1000, 100), 69);
    }
}
