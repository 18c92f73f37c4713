use super::Field;

/// Polynomial over a [`Field`], lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldPoly(pub Vec<u32>);

impl FieldPoly {
    pub fn new(mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FieldPoly(c)
    }

    pub fn zero() -> Self {
        FieldPoly(vec![])
    }

    pub fn one() -> Self {
        FieldPoly(vec![1])
    }

    /// x - a
    pub fn linear(f: &Field, a: u32) -> Self {
        FieldPoly(vec![f.neg(a), 1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn leading(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn add(&self, f: &Field, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.0.get(i).copied().unwrap_or(0),
                    o.0.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        FieldPoly::new(c)
    }

    pub fn sub(&self, f: &Field, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| {
                f.sub(
                    self.0.get(i).copied().unwrap_or(0),
                    o.0.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        FieldPoly::new(c)
    }

    pub fn scale(&self, f: &Field, k: u32) -> Self {
        FieldPoly::new(self.0.iter().map(|&c| f.mul(c, k)).collect())
    }

    pub fn mul(&self, f: &Field, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0u32; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        FieldPoly::new(c)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, f: &Field, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![0u32; r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            quo[k] = c;
            if c != 0 {
                for (j, &dj) in d.0.iter().enumerate() {
                    r[k + j] = f.sub(r[k + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        (FieldPoly::new(quo), FieldPoly::new(r))
    }

    pub fn rem(&self, f: &Field, d: &Self) -> Self {
        self.divrem(f, d).1
    }

    pub fn monic(&self, f: &Field) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(f, f.inv(self.leading()).expect("nonzero"))
    }

    pub fn gcd(&self, f: &Field, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Self {
        FieldPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, f: &Field, x: u32) -> u32 {
        self.0
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// No repeated irreducible factor (over the algebraic closure).
    pub fn is_squarefree(&self, f: &Field) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        let g = self.gcd(f, &self.derivative(f));
        g.degree() == Some(0)
    }

    /// Monic irreducible factors with multiplicity, sorted.
    ///
    /// Trial division by monic polynomials of increasing degree; meant for
    /// the small degrees that occur for matrices of size at most a handful.
    pub fn factor(&self, f: &Field) -> Vec<(FieldPoly, usize)> {
        let mut rest = self.monic(f);
        let mut out = vec![];
        let q = f.order();
        let mut d = 1usize;
        while rest.degree().unwrap_or(0) >= 2 * d {
            let count = q.pow(d as u32);
            for low in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut r = low;
                for _ in 0..d {
                    c.push((r % q) as u32);
                    r /= q;
                }
                c.push(1);
                let cand = FieldPoly(c);
                let mut mult = 0;
                loop {
                    let (quo, r) = rest.divrem(f, &cand);
                    if !r.is_zero() {
                        break;
                    }
                    rest = quo;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) >= 1 {
            match out.iter_mut().find(|(p, _)| *p == rest) {
                Some(e) => e.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self, f: &Field) -> Self {
        self.factor(f)
            .into_iter()
            .fold(Self::one(), |acc, (p, _)| acc.mul(f, &p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let f = Field::new(5, 1).unwrap();
        // (x-1)(x-2) and (x-1)(x-3)
        let a = FieldPoly::linear(&f, 1).mul(&f, &FieldPoly::linear(&f, 2));
        let b = FieldPoly::linear(&f, 1).mul(&f, &FieldPoly::linear(&f, 3));
        assert_eq!(a.gcd(&f, &b), FieldPoly::linear(&f, 1));
        let (qq, r) = a.divrem(&f, &FieldPoly::linear(&f, 2));
        assert!(r.is_zero());
        assert_eq!(qq, FieldPoly::linear(&f, 1));
    }

    #[test]
    fn factorization_and_squarefree() {
        let f = Field::new(3, 1).unwrap();
        // (x^2+1)^2 (x-1)
        let irr = FieldPoly::new(vec![1, 0, 1]);
        let p = irr.mul(&f, &irr).mul(&f, &FieldPoly::linear(&f, 1));
        assert!(!p.is_squarefree(&f));
        let fac = p.factor(&f);
        assert_eq!(
            fac,
            vec![
                (FieldPoly::new(vec![1, 0, 1]), 2),
                (FieldPoly::linear(&f, 1), 1)
            ]
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>()
        );
        assert_eq!(p.radical(&f).degree(), Some(3));
        assert!(irr.is_squarefree(&f));
    }

    #[test]
    fn inseparable_power_is_not_squarefree() {
        let f = Field::new(2, 1).unwrap();
        // x^2 + 1 = (x+1)^2 in characteristic 2
        let p = FieldPoly::new(vec![1, 0, 1]);
        assert!(!p.is_squarefree(&f));
        assert_eq!(p.factor(&f), vec![(FieldPoly::linear(&f, 1), 2)]);
    }
}
