//! Finite matrix groups over a [`Field`]: enumeration by closure, conjugacy
//! classes with power maps, and direct products.

use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::finite_field::matrix as fm;
use crate::finite_field::Field;

pub const DEFAULT_GROUP_CAP: usize = 5_000_000;

/// Environment variable overriding [`DEFAULT_GROUP_CAP`].
pub const GROUP_CAP_ENV: &str = "VANISH_GROUP_CAP";

pub fn default_group_cap() -> usize {
    std::env::var(GROUP_CAP_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_GROUP_CAP)
}

/// Group of invertible matrices, elements indexed in discovery order.
#[derive(Debug)]
pub struct MatrixGroup {
    field: Arc<Field>,
    dim: usize,
    bits: u32,
    entries: Vec<u32>,
    index: FxHashMap<u128, u32>,
    generators: Vec<u32>,
}

#[derive(Debug)]
enum Kind {
    Matrix(MatrixGroup),
    /// Element (i, j) has index i·|B| + j.
    Product(Box<GroupTable>, Box<GroupTable>),
}

#[derive(Debug)]
pub struct GroupTable {
    kind: Kind,
    order: usize,
    inverse: Vec<u32>,
}

fn entry_bits(q: u64) -> u32 {
    64 - (q - 1).leading_zeros()
}

fn encode(m: &[u32], bits: u32) -> u128 {
    m.iter().fold(0u128, |acc, &x| (acc << bits) | x as u128)
}

impl MatrixGroup {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, i: u32) -> &[u32] {
        let s = self.dim * self.dim;
        &self.entries[i as usize * s..(i as usize + 1) * s]
    }

    pub fn index_of(&self, m: &[u32]) -> Option<u32> {
        self.index.get(&encode(m, self.bits)).copied()
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let n = self.dim;
        let mut buf = [0u32; 64];
        let out = &mut buf[..n * n];
        fm::mat_mul_into(&self.field, self.matrix(a), self.matrix(b), n, out);
        self.index[&encode(out, self.bits)]
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            Kind::Matrix(m) => m.mul(a, b),
            Kind::Product(x, y) => {
                let nb = y.order as u32;
                let (a1, a2) = (a / nb, a % nb);
                let (b1, b2) = (b / nb, b % nb);
                x.mul(a1, b1) * nb + y.mul(a2, b2)
            }
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// g·x·g⁻¹
    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> Vec<u32> {
        match &self.kind {
            Kind::Matrix(m) => m.generators.clone(),
            Kind::Product(x, y) => {
                let nb = y.order as u32;
                let mut g: Vec<u32> = x.generators().into_iter().map(|a| a * nb).collect();
                g.extend(y.generators());
                g
            }
        }
    }

    pub fn as_matrix_group(&self) -> Option<&MatrixGroup> {
        match &self.kind {
            Kind::Matrix(m) => Some(m),
            Kind::Product(..) => None,
        }
    }

    pub fn factors(&self) -> Option<(&GroupTable, &GroupTable)> {
        match &self.kind {
            Kind::Product(a, b) => Some((a, b)),
            Kind::Matrix(_) => None,
        }
    }

    /// Matrix of element i: the block-diagonal matrix for products over a
    /// common field, otherwise `None`.
    pub fn matrix(&self, i: u32) -> Option<Vec<u32>> {
        match &self.kind {
            Kind::Matrix(m) => Some(m.matrix(i).to_vec()),
            Kind::Product(a, b) => {
                let nb = b.order as u32;
                let (ma, mb) = (a.matrix(i / nb)?, b.matrix(i % nb)?);
                let (fa, fb) = (a.field()?, b.field()?);
                if fa != fb {
                    return None;
                }
                let (da, db) = (a.dim(), b.dim());
                let d = da + db;
                let mut out = vec![0u32; d * d];
                for r in 0..da {
                    out[r * d..r * d + da].copy_from_slice(&ma[r * da..(r + 1) * da]);
                }
                for r in 0..db {
                    out[(da + r) * d + da..(da + r) * d + d]
                        .copy_from_slice(&mb[r * db..(r + 1) * db]);
                }
                Some(out)
            }
        }
    }

    /// Matrix size (sum of block sizes for products).
    pub fn dim(&self) -> usize {
        match &self.kind {
            Kind::Matrix(m) => m.dim,
            Kind::Product(a, b) => a.dim() + b.dim(),
        }
    }

    pub fn field(&self) -> Option<&Arc<Field>> {
        match &self.kind {
            Kind::Matrix(m) => Some(&m.field),
            Kind::Product(a, b) => {
                let fa = a.field()?;
                (Some(fa) == b.field()).then_some(fa)
            }
        }
    }

    /// |{g : g x = x g}| by direct count.
    pub fn centralizer_order(&self, x: u32) -> usize {
        (0..self.order as u32)
            .filter(|&g| self.mul(g, x) == self.mul(x, g))
            .count()
    }
}

/// Closure of `generators` under multiplication.
///
/// Indices follow breadth-first discovery from the identity, right-multiplying
/// by the generators in sorted order.
pub fn enumerate_group(
    generators: &[Vec<u32>],
    field: Arc<Field>,
    dim: usize,
) -> Result<GroupTable> {
    enumerate_group_with_cap(generators, field, dim, default_group_cap())
}

pub fn enumerate_group_with_cap(
    generators: &[Vec<u32>],
    field: Arc<Field>,
    dim: usize,
    cap: usize,
) -> Result<GroupTable> {
    let bits = entry_bits(field.order());
    if dim == 0 || dim * dim * bits as usize > 128 || dim > 8 {
        return Err(Error::EncodingOverflow {
            dim,
            q: field.order(),
        });
    }
    for g in generators {
        if g.len() != dim * dim {
            return Err(Error::InvalidArgument("generator has wrong size".into()));
        }
        if !fm::is_invertible(&field, g, dim) {
            return Err(Error::SingularGenerator);
        }
    }
    let mut gens: Vec<Vec<u32>> = generators.to_vec();
    gens.sort_by_key(|g| encode(g, bits));
    gens.dedup();
    let id = fm::identity(dim);
    let s = dim * dim;
    let mut entries = id.clone();
    let mut index = FxHashMap::default();
    index.insert(encode(&id, bits), 0u32);
    let mut queue = VecDeque::from([0usize]);
    let mut buf = vec![0u32; s];
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            fm::mat_mul_into(&field, &entries[i * s..(i + 1) * s], g, dim, &mut buf);
            let key = encode(&buf, bits);
            if !index.contains_key(&key) {
                let k = index.len();
                if k >= cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                index.insert(key, k as u32);
                entries.extend_from_slice(&buf);
                queue.push_back(k);
                if k % 1_000_000 == 0 {
                    log::info!("enumerated {k} elements");
                }
            }
        }
    }
    let generators = gens.iter().map(|g| index[&encode(g, bits)]).collect();
    let mg = MatrixGroup {
        field,
        dim,
        bits,
        entries,
        index,
        generators,
    };
    let order = mg.len();
    let inverse = (0..order as u32)
        .map(|i| {
            let inv =
                fm::inverse(&mg.field, mg.matrix(i), dim).expect("group elements are invertible");
            mg.index_of(&inv).expect("closure contains inverses")
        })
        .collect();
    Ok(GroupTable {
        kind: Kind::Matrix(mg),
        order,
        inverse,
    })
}

/// Elementary matrix Id + c·E_{ij}.
fn elementary(n: usize, i: usize, j: usize, c: u32) -> Vec<u32> {
    let mut m = fm::identity(n);
    m[i * n + j] = c;
    m
}

/// An F_p-basis of the field: 1, α, α², ...
fn additive_basis(f: &Field) -> Vec<u32> {
    let p = f.characteristic() as u32;
    (0..f.degree()).map(|k| p.pow(k)).collect()
}

fn transvections(n: usize, f: &Field) -> Vec<Vec<u32>> {
    let mut gens = vec![];
    for b in additive_basis(f) {
        for i in 0..n.saturating_sub(1) {
            gens.push(elementary(n, i, i + 1, b));
            gens.push(elementary(n, i + 1, i, b));
        }
    }
    gens
}

/// Generators of GL_n: a primitive diagonal element with the transvections.
pub fn gl_generators(n: usize, f: &Field) -> Vec<Vec<u32>> {
    let mut gens = transvections(n, f);
    let mut d = fm::identity(n);
    d[0] = f.generator();
    gens.push(d);
    gens
}

pub fn sl_generators(n: usize, f: &Field) -> Vec<Vec<u32>> {
    let gens = transvections(n, f);
    if gens.is_empty() {
        vec![fm::identity(n)]
    } else {
        gens
    }
}

pub fn general_linear(n: usize, field: Arc<Field>) -> Result<GroupTable> {
    let gens = gl_generators(n, &field);
    enumerate_group(&gens, field, n)
}

pub fn special_linear(n: usize, field: Arc<Field>) -> Result<GroupTable> {
    let gens = sl_generators(n, &field);
    enumerate_group(&gens, field, n)
}

/// S_n as permutation matrices over `field`.
pub fn symmetric_group(n: usize, field: Arc<Field>) -> Result<GroupTable> {
    let mut gens = vec![];
    for i in 0..n.saturating_sub(1) {
        let mut m = fm::identity(n);
        m[i * n + i] = 0;
        m[(i + 1) * n + i + 1] = 0;
        m[i * n + i + 1] = 1;
        m[(i + 1) * n + i] = 1;
        gens.push(m);
    }
    if gens.is_empty() {
        gens.push(fm::identity(n));
    }
    enumerate_group(&gens, field, n)
}

pub fn trivial_group(field: Arc<Field>) -> Result<GroupTable> {
    enumerate_group(&[fm::identity(1)], field, 1)
}

/// |GL_n(F_q)|, or None past u128.
pub fn gl_order(n: u32, q: u64) -> Option<u128> {
    let qn = (q as u128).checked_pow(n)?;
    (0..n).try_fold(1u128, |acc, i| acc.checked_mul(qn - (q as u128).pow(i)))
}

/// A × B with elements as index pairs.
pub fn direct_product(a: GroupTable, b: GroupTable) -> Result<GroupTable> {
    direct_product_with_cap(a, b, default_group_cap())
}

pub fn direct_product_with_cap(a: GroupTable, b: GroupTable, cap: usize) -> Result<GroupTable> {
    let order = a
        .order
        .checked_mul(b.order)
        .filter(|&o| o <= cap)
        .ok_or(Error::GroupTooLarge(cap))?;
    let nb = b.order as u32;
    let inverse = (0..order as u32)
        .map(|i| a.inv(i / nb) * nb + b.inv(i % nb))
        .collect();
    Ok(GroupTable {
        kind: Kind::Product(Box::new(a), Box::new(b)),
        order,
        inverse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub class_reps: Vec<u32>,
    pub class_sizes: Vec<u64>,
    pub class_of: Vec<u32>,
    /// Order of the elements of each class.
    pub rep_orders: Vec<u64>,
    /// `power_classes[c][l]` is the class of rep^l for 0 ≤ l < order.
    pub power_classes: Vec<Vec<u32>>,
    pub exponent: u64,
}

impl ClassData {
    pub fn len(&self) -> usize {
        self.class_reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_reps.is_empty()
    }

    /// Class of the k-th powers of class c.
    pub fn power_map(&self, c: usize, k: u64) -> u32 {
        let o = self.rep_orders[c];
        self.power_classes[c][(k % o) as usize]
    }

    /// Class of inverses.
    pub fn inverse_class(&self, c: usize) -> u32 {
        self.power_map(c, self.rep_orders[c] - 1)
    }

    pub fn centralizer_order(&self, group_order: usize, c: usize) -> u64 {
        group_order as u64 / self.class_sizes[c]
    }
}

/// Conjugacy classes by orbit expansion under conjugation by generators.
///
/// Classes are numbered by their least element index, so class 0 holds the
/// identity.
pub fn conjugacy_classes(g: &GroupTable) -> ClassData {
    let gens = g.generators();
    let gen_pairs: Vec<(u32, u32)> = gens.iter().map(|&s| (s, g.inv(s))).collect();
    let n = g.order();
    let mut class_of = vec![u32::MAX; n];
    let mut reps = vec![];
    let mut sizes = vec![];
    let mut stack = vec![];
    for start in 0..n as u32 {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let cls = reps.len() as u32;
        class_of[start as usize] = cls;
        let mut size = 1u64;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for &(s, si) in &gen_pairs {
                let y = g.mul(g.mul(s, x), si);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = cls;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        reps.push(start);
        sizes.push(size);
    }
    let mut rep_orders = vec![];
    let mut power_classes = vec![];
    for &r in &reps {
        let mut pcs = vec![class_of[0]];
        let mut x = r;
        while x != g.identity() {
            pcs.push(class_of[x as usize]);
            x = g.mul(x, r);
        }
        rep_orders.push(pcs.len() as u64);
        power_classes.push(pcs);
    }
    let exponent = rep_orders
        .iter()
        .fold(1u64, |acc, &o| num_integer::lcm(acc, o));
    ClassData {
        class_reps: reps,
        class_sizes: sizes,
        class_of,
        rep_orders,
        power_classes,
        exponent,
    }
}

/// Compares |class|·|C(rep)| with |G| on up to `limit` classes spread over the list.
pub fn spot_check_centralizers(g: &GroupTable, c: &ClassData, limit: usize) -> bool {
    let k = c.len();
    let step = k.div_ceil(limit.max(1)).max(1);
    (0..k)
        .step_by(step)
        .all(|i| g.centralizer_order(c.class_reps[i]) as u64 * c.class_sizes[i] == g.order() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<Field> {
        Arc::new(Field::from_order(q).unwrap())
    }

    #[test]
    fn small_general_linear_orders() {
        assert_eq!(general_linear(2, field(2)).unwrap().order(), 6);
        assert_eq!(general_linear(2, field(3)).unwrap().order(), 48);
        assert_eq!(general_linear(3, field(2)).unwrap().order(), 168);
        assert_eq!(general_linear(2, field(4)).unwrap().order(), 180);
        assert_eq!(special_linear(2, field(5)).unwrap().order(), 120);
        assert_eq!(gl_order(2, 4), Some(180));
        assert_eq!(gl_order(100, 1000), None);
    }

    #[test]
    fn class_counts() {
        for (n, q, k) in [(2, 2, 3), (2, 3, 8), (3, 2, 6), (2, 4, 15), (2, 5, 24)] {
            let g = general_linear(n, field(q)).unwrap();
            let c = conjugacy_classes(&g);
            assert_eq!(c.len(), k, "GL{n}({q})");
            assert_eq!(c.class_sizes.iter().sum::<u64>(), g.order() as u64);
            assert!(spot_check_centralizers(&g, &c, 10));
            assert_eq!(c.class_reps[0], 0);
            for i in 0..c.len() {
                assert_eq!(c.power_map(i, 1), i as u32);
            }
        }
    }

    #[test]
    fn exponent_of_gl2_f3() {
        let g = general_linear(2, field(3)).unwrap();
        let c = conjugacy_classes(&g);
        // element orders 1, 2, 3, 4, 6, 8
        assert_eq!(c.exponent, 24);
    }

    #[test]
    fn products() {
        let s3 = symmetric_group(3, field(2)).unwrap();
        let s3b = symmetric_group(3, field(2)).unwrap();
        let p = direct_product(s3, s3b).unwrap();
        assert_eq!(p.order(), 36);
        assert_eq!(conjugacy_classes(&p).len(), 9);
        let a = general_linear(2, field(2)).unwrap();
        let b = general_linear(2, field(3)).unwrap();
        let p = direct_product(a, b).unwrap();
        assert_eq!(p.order(), 288);
        let c = conjugacy_classes(&p);
        assert_eq!(c.len(), 24);
        assert!(spot_check_centralizers(&p, &c, 10));
        assert!(p.matrix(5).is_none());
        let g = general_linear(2, field(3)).unwrap();
        let p = direct_product(g, trivial_group(field(3)).unwrap()).unwrap();
        assert_eq!(conjugacy_classes(&p).len(), 8);
        assert_eq!(p.matrix(1).unwrap().len(), 9);
    }

    #[test]
    fn deterministic_indexing() {
        let a = general_linear(2, field(3)).unwrap();
        let b = general_linear(2, field(3)).unwrap();
        let (ma, mb) = (a.as_matrix_group().unwrap(), b.as_matrix_group().unwrap());
        for i in 0..48 {
            assert_eq!(ma.matrix(i), mb.matrix(i));
        }
    }

    #[test]
    fn errors() {
        let f = field(3);
        assert_eq!(
            enumerate_group(&[vec![1, 1, 1, 1]], f.clone(), 2).unwrap_err(),
            Error::SingularGenerator
        );
        assert_eq!(
            enumerate_group_with_cap(&gl_generators(2, &f), f, 2, 10).unwrap_err(),
            Error::GroupTooLarge(10)
        );
    }
}
