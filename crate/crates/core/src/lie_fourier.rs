//! Adjoint orbits of gl_n(F_q), the trace-form Fourier transform of orbit
//! indicators, Green functions, Harish-Chandra induction from the split
//! Cartan subalgebra, and the Kazhdan–Letellier identity.
//!
//! Matrices are indexed by `Σ_t a_t q^t` over row-major positions t.

use std::sync::Arc;

use rayon::prelude::*;

use crate::char_table::ZeroReport;
use crate::error::{Error, Result};
use crate::exact_num::CycInt;
use crate::finite_field::{matrix as fm, Field, FieldPoly};
use crate::matrix_group::{general_linear, GroupTable};

/// Largest algebra enumerated element by element.
pub const ALGEBRA_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointOrbit {
    pub rep: u64,
    pub rep_matrix: Vec<u32>,
    pub size: u64,
    pub char_poly: FieldPoly,
    pub is_semisimple: bool,
    pub is_regular_semisimple: bool,
    /// Degrees of the irreducible factors of the characteristic polynomial,
    /// for regular semisimple orbits.
    pub cartan_partition: Option<Vec<u32>>,
    /// Orbit of the semisimple part of the representative.
    pub semisimple_class: u32,
    /// Jordan block sizes of the nilpotent part.
    pub nilpotent_type: Vec<u32>,
}

pub struct OrbitTable {
    pub field: Arc<Field>,
    pub n: usize,
    pub orbits: Vec<AdjointOrbit>,
    pub orbit_of: Vec<u32>,
    pub total: u64,
    group: GroupTable,
}

impl std::fmt::Debug for OrbitTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "gl_{}(F_{}) with {} orbits",
            self.n,
            self.field.order(),
            self.orbits.len()
        )
    }
}

pub fn encode_matrix(m: &[u32], q: u64) -> u64 {
    m.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64)
}

pub fn decode_matrix(mut idx: u64, q: u64, n: usize, out: &mut [u32]) {
    for x in out.iter_mut().take(n * n) {
        *x = (idx % q) as u32;
        idx /= q;
    }
}

/// Semisimple part of X by Newton iteration on the radical of its
/// characteristic polynomial.
pub fn jordan_decomposition(f: &Field, x: &[u32], n: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    let r = fm::char_poly(f, x, n).radical(f);
    let dr = r.derivative(f);
    let mut s = x.to_vec();
    for _ in 0..=2 * n + 2 {
        let rs = fm::poly_eval_matrix(f, &r, &s, n);
        if fm::is_zero_matrix(&rs) {
            let nil = fm::mat_sub(f, x, &s);
            return Ok((s, nil));
        }
        let ds = fm::poly_eval_matrix(f, &dr, &s, n);
        let inv = fm::inverse(f, &ds, n)
            .ok_or_else(|| Error::Internal("derivative of the radical is singular".into()))?;
        let step = fm::mat_mul(f, &rs, &inv, n);
        s = fm::mat_sub(f, &s, &step);
    }
    Err(Error::Internal(
        "Newton iteration for the semisimple part did not converge".into(),
    ))
}

/// Block sizes of a nilpotent matrix from the ranks of its powers.
pub fn nilpotent_jordan_type(f: &Field, nil: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut ranks = vec![n];
    let mut pw = fm::identity(n);
    for _ in 0..n {
        pw = fm::mat_mul(f, &pw, nil, n);
        ranks.push(fm::rank(f, &pw, n, n));
    }
    if *ranks.last().expect("nonempty") != 0 {
        return Err(Error::NotUnipotent);
    }
    // number of blocks of size ≥ k is ranks[k-1] - ranks[k]
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut sizes = vec![];
    for k in (1..=n).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k as u32, exact));
    }
    Ok(sizes)
}

fn conjugation_pairs(g: &GroupTable) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mg = g.as_matrix_group().expect("matrix group");
    g.generators()
        .into_iter()
        .map(|s| (mg.matrix(s).to_vec(), mg.matrix(g.inv(s)).to_vec()))
        .collect()
}

pub fn adjoint_orbits(n: usize, field: Arc<Field>) -> Result<OrbitTable> {
    let q = field.order();
    let total = (n * n) as u32;
    let total = q
        .checked_pow(total)
        .filter(|&t| t <= ALGEBRA_BUDGET)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("gl_{n}(F_{q}) exceeds {ALGEBRA_BUDGET} elements"))
        })?;
    let group = general_linear(n, field.clone())?;
    let pairs = conjugation_pairs(&group);
    let f = &*field;
    let mut orbit_of = vec![u32::MAX; total as usize];
    let mut reps = vec![];
    let mut sizes = vec![];
    let mut x = vec![0u32; n * n];
    let mut stack = vec![];
    for start in 0..total {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        orbit_of[start as usize] = id;
        let mut size = 1u64;
        stack.push(start);
        while let Some(i) = stack.pop() {
            decode_matrix(i, q, n, &mut x);
            for (s, si) in &pairs {
                let y = fm::mat_mul(f, &fm::mat_mul(f, s, &x, n), si, n);
                let j = encode_matrix(&y, q);
                if orbit_of[j as usize] == u32::MAX {
                    orbit_of[j as usize] = id;
                    size += 1;
                    stack.push(j);
                }
            }
        }
        reps.push(start);
        sizes.push(size);
    }
    let mut orbits = Vec::with_capacity(reps.len());
    for (&rep, &size) in reps.iter().zip(&sizes) {
        let mut m = vec![0u32; n * n];
        decode_matrix(rep, q, n, &mut m);
        let cp = fm::char_poly(f, &m, n);
        let (s, nil) = jordan_decomposition(f, &m, n)?;
        let is_semisimple = fm::is_zero_matrix(&nil);
        let is_regular_semisimple = cp.is_squarefree(f);
        let cartan_partition = is_regular_semisimple.then(|| {
            let mut d: Vec<u32> = cp
                .factor(f)
                .iter()
                .map(|(p, _)| p.degree().expect("nonconstant") as u32)
                .collect();
            d.sort_unstable_by(|a, b| b.cmp(a));
            d
        });
        orbits.push(AdjointOrbit {
            rep,
            rep_matrix: m,
            size,
            char_poly: cp,
            is_semisimple,
            is_regular_semisimple,
            cartan_partition,
            semisimple_class: orbit_of[encode_matrix(&s, q) as usize],
            nilpotent_type: nilpotent_jordan_type(f, &nil, n)?,
        });
    }
    Ok(OrbitTable {
        field,
        n,
        orbits,
        orbit_of,
        total,
        group,
    })
}

impl OrbitTable {
    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn orbit_of_matrix(&self, m: &[u32]) -> u32 {
        self.orbit_of[encode_matrix(m, self.q()) as usize]
    }

    pub fn semisimple_count(&self) -> usize {
        self.orbits.iter().filter(|o| o.is_semisimple).count()
    }

    pub fn regular_semisimple_count(&self) -> usize {
        self.orbits
            .iter()
            .filter(|o| o.is_regular_semisimple)
            .count()
    }

    /// Orbit of −X for X in orbit i.
    pub fn negated(&self, i: usize) -> u32 {
        let m = fm::mat_neg(&self.field, &self.orbits[i].rep_matrix);
        self.orbit_of_matrix(&m)
    }

    /// Members of an orbit in increasing index order.
    pub fn members(&self, i: usize) -> Vec<u64> {
        (0..self.total)
            .filter(|&x| self.orbit_of[x as usize] == i as u32)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    pub conductor: u64,
    /// `values[s][t]` = F(1_{O_s}) at the representative of O_t.
    pub values: Vec<Vec<CycInt>>,
    pub orbit_sizes: Vec<u64>,
}

/// Σ_{y ∈ O_s} ψ(c·tr(x·y)) for every source orbit s, as trace histograms.
fn histograms_at(o: &OrbitTable, x: &[u32], c: u32) -> Vec<Vec<u64>> {
    let f = &*o.field;
    let (n, q) = (o.n, o.q());
    let k = o.orbits.len();
    let mut hist = vec![vec![0u64; q as usize]; k];
    let mut y = vec![0u32; n * n];
    let cx: Vec<u32> = x.iter().map(|&v| f.mul(v, c)).collect();
    for idx in 0..o.total {
        decode_matrix(idx, q, n, &mut y);
        let t = fm::trace_of_product(f, &cx, &y, n);
        hist[o.orbit_of[idx as usize] as usize][t as usize] += 1;
    }
    hist
}

pub fn fourier_table(o: &OrbitTable) -> FourierTable {
    fourier_table_scaled(o, 1)
}

/// Fourier table for the additive character ψ(c·).
pub fn fourier_table_scaled(o: &OrbitTable, c: u32) -> FourierTable {
    let f = &*o.field;
    let k = o.orbits.len();
    let columns: Vec<Vec<CycInt>> = (0..k)
        .into_par_iter()
        .map(|t| {
            histograms_at(o, &o.orbits[t].rep_matrix, c)
                .iter()
                .map(|h| f.character_sum(h))
                .collect()
        })
        .collect();
    let values = (0..k)
        .map(|s| (0..k).map(|t| columns[t][s].clone()).collect())
        .collect();
    FourierTable {
        conductor: f.characteristic(),
        values,
        orbit_sizes: o.orbits.iter().map(|x| x.size).collect(),
    }
}

/// Recomputes the column of up to `limit` orbits at their largest-index member.
pub fn check_representative_independence(o: &OrbitTable, t: &FourierTable, limit: usize) -> bool {
    let f = &*o.field;
    let k = o.orbits.len();
    let step = k.div_ceil(limit.max(1)).max(1);
    (0..k).step_by(step).all(|col| {
        let other = *o.members(col).last().expect("orbit is nonempty");
        let mut m = vec![0u32; o.n * o.n];
        decode_matrix(other, o.q(), o.n, &mut m);
        histograms_at(o, &m, 1)
            .iter()
            .enumerate()
            .all(|(s, h)| f.character_sum(h) == t.values[s][col])
    })
}

pub fn fourier_zero_census(t: &FourierTable) -> ZeroReport {
    let per: Vec<u64> = t
        .values
        .iter()
        .map(|row| row.iter().filter(|v| v.is_zero()).count() as u64)
        .collect();
    let zeros: u64 = per.iter().sum();
    let k = t.orbit_sizes.len() as u64;
    ZeroReport {
        zero_entries: zeros,
        total_entries: k * k,
        ratio: num_rational::BigRational::new(zeros.into(), (k * k).max(1).into()),
        per_character_zero_counts: per,
    }
}

/// F(F(1_O)) = q^{n²}·1_{−O} for every orbit O.
pub fn verify_double_transform(o: &OrbitTable, t: &FourierTable) -> bool {
    let k = o.orbits.len();
    let m = t.conductor;
    (0..k).into_par_iter().all(|s| {
        let neg = o.negated(s) as usize;
        (0..k).all(|u| {
            let mut acc = crate::exact_num::DotAccumulator::new(m).expect("p > 0");
            for v in 0..k {
                acc.add_product(1, &t.values[s][v], &t.values[v][u]);
            }
            let want = if u == neg { o.total as i64 } else { 0 };
            acc.finish() == CycInt::from_int(m, want).expect("p > 0")
        })
    })
}

/// Restriction of A to an A-stable subspace spanned by `basis` rows.
fn restrict(f: &Field, a: &[u32], n: usize, basis: &[Vec<u32>]) -> Vec<u32> {
    let d = basis.len();
    let flat: Vec<u32> = basis.iter().flatten().copied().collect();
    let (red, pivots) = fm::rref(f, &flat, d, n);
    let mut out = vec![0u32; d * d];
    for (s, row) in red.chunks(n).take(d).enumerate() {
        // image of the s-th reduced basis vector
        let image: Vec<u32> = (0..n)
            .map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(a[i * n + j], row[j]))))
            .collect();
        for (t, &pc) in pivots.iter().enumerate() {
            out[t * d + s] = image[pc];
        }
    }
    out
}

/// Complete flags stable under A, counted by choosing a stable line and
/// recursing on the quotient.
pub fn stable_flag_count(f: &Field, a: &[u32], n: usize) -> u64 {
    if n <= 1 {
        return 1;
    }
    let q = f.order();
    let mut total = 0u64;
    for lam in f.elements() {
        let shifted = fm::mat_sub(f, a, &fm::scalar(n, lam));
        let ns = fm::nullspace(f, &shifted, n, n);
        let d = ns.len();
        if d == 0 {
            continue;
        }
        // enumerate lines in the eigenspace through normalized vectors
        for combo in 1..q.pow(d as u32) {
            let mut coef = vec![0u32; d];
            let mut r = combo;
            for c in coef.iter_mut() {
                *c = (r % q) as u32;
                r /= q;
            }
            if coef.iter().rev().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            let mut v = vec![0u32; n];
            for (c, b) in coef.iter().zip(&ns) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(*c, y));
                }
            }
            let pivot = v.iter().position(|&x| x != 0).expect("nonzero vector");
            // basis [v, e_j (j ≠ pivot)] as columns
            let mut b = vec![0u32; n * n];
            for i in 0..n {
                b[i * n] = v[i];
            }
            let mut col = 1;
            for j in 0..n {
                if j != pivot {
                    b[j * n + col] = 1;
                    col += 1;
                }
            }
            let binv = fm::inverse(f, &b, n).expect("basis is invertible");
            let conj = fm::mat_mul(f, &fm::mat_mul(f, &binv, a, n), &b, n);
            let m = n - 1;
            let mut quotient = vec![0u32; m * m];
            for i in 0..m {
                for j in 0..m {
                    quotient[i * m + j] = conj[(i + 1) * n + j + 1];
                }
            }
            total += stable_flag_count(f, &quotient, m);
        }
    }
    total
}

/// Q(u) = number of complete flags fixed by the unipotent matrix u.
pub fn green_function(n: usize, field: &Field, u: &[u32]) -> Result<u64> {
    let nil = fm::mat_sub(field, u, &fm::identity(n));
    let mut pw = fm::identity(n);
    for _ in 0..n {
        pw = fm::mat_mul(field, &pw, &nil, n);
    }
    if !fm::is_zero_matrix(&pw) {
        return Err(Error::NotUnipotent);
    }
    Ok(stable_flag_count(field, u, n))
}

/// `num / den` with num ∈ Z[ζ_p].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcValue {
    pub num: CycInt,
    pub den: u64,
}

impl HcValue {
    /// Compares k·F with this value for an integer scale k.
    pub fn equals_scaled(&self, value: &CycInt, scale: u64) -> bool {
        value.scale(self.den as i64) == self.num.scale(scale as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

fn is_diagonal(m: &[u32], n: usize) -> bool {
    (0..n).all(|i| (0..n).all(|j| i == j || m[i * n + j] == 0))
}

/// R_t^g(f_X)(Y) for the split Cartan t of diagonal matrices, summed over
/// the whole group with f_X = ψ(tr(·X)).
pub fn hc_induction_split(o: &OrbitTable, x: &[u32], y: &[u32]) -> Result<HcValue> {
    let f = &*o.field;
    let n = o.n;
    if !is_diagonal(x, n) || (0..n).any(|i| (0..i).any(|j| x[i * n + i] == x[j * n + j])) {
        return Err(Error::NotRegularSplit);
    }
    let (ys, yn) = jordan_decomposition(f, y, n)?;
    let g = &o.group;
    let mg = g.as_matrix_group().expect("matrix group");
    let mut hist = vec![0u64; f.order() as usize];
    let mut centralizer = 0u64;
    for e in 0..g.order() as u32 {
        let gm = mg.matrix(e);
        let gi = mg.matrix(g.inv(e));
        let z = fm::mat_mul(f, &fm::mat_mul(f, gm, &ys, n), gi, n);
        if z == ys {
            centralizer += 1;
        }
        if is_diagonal(&z, n) {
            hist[fm::trace_of_product(f, &z, x, n) as usize] += 1;
        }
    }
    let sum = f.character_sum(&hist);
    if sum.is_zero() && hist.iter().all(|&c| c == 0) {
        return Ok(HcValue { num: sum, den: 1 });
    }
    // Borel subgroups of C(Y_s) = Π GL(E_λ) fixed by u = 1 + Y_n
    let u = fm::mat_add(f, &fm::identity(n), &yn);
    let mut green = 1u64;
    for lam in f.elements() {
        let shifted = fm::mat_sub(f, &ys, &fm::scalar(n, lam));
        let basis = fm::nullspace(f, &shifted, n, n);
        if basis.is_empty() {
            continue;
        }
        let ur = restrict(f, &u, n, &basis);
        green *= stable_flag_count(f, &ur, basis.len());
    }
    Ok(HcValue {
        num: sum.scale(green as i64),
        den: centralizer,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlReport {
    pub n: usize,
    pub q: u64,
    pub pairs_checked: usize,
    pub violations: Vec<(u32, u32)>,
}

impl KlReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.pairs_checked > 0
    }
}

/// Checks F(1_{O_X})(Y) = q^{|Φ⁺|}·R_t^g(f_X)(Y) for every regular diagonal X
/// (one per Weyl orbit) and every orbit representative Y.
pub fn kl_verify(o: &OrbitTable, t: &FourierTable) -> Result<KlReport> {
    let f = &*o.field;
    let p = f.characteristic();
    let n = o.n;
    if (n as u64).is_multiple_of(p) {
        return Err(Error::CharacteristicNotVeryGood(p));
    }
    let q = f.order();
    if q < n as u64 {
        return Err(Error::NotRegularSplit);
    }
    let scale = q.pow((n * (n - 1) / 2) as u32);
    // strictly increasing diagonals pick one point per Weyl orbit
    let mut diagonals = vec![];
    let mut cur = vec![];
    fn rec(q: u32, n: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in start..q {
            cur.push(v);
            rec(q, n, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(q as u32, n, 0, &mut cur, &mut diagonals);
    let checks: Vec<(u32, u32, bool)> = diagonals
        .par_iter()
        .flat_map_iter(|d| {
            let x = fm::diagonal(d);
            let ox = o.orbit_of_matrix(&x);
            (0..o.orbits.len()).map(move |yi| (x.clone(), ox, yi))
        })
        .map(|(x, ox, yi)| {
            let hc = hc_induction_split(o, &x, &o.orbits[yi].rep_matrix)?;
            let fv = &t.values[ox as usize][yi];
            Ok((ox, yi as u32, hc.equals_scaled(fv, scale)))
        })
        .collect::<Result<_>>()?;
    Ok(KlReport {
        n,
        q,
        pairs_checked: checks.len(),
        violations: checks
            .into_iter()
            .filter(|c| !c.2)
            .map(|(a, b, _)| (a, b))
            .collect(),
    })
}

/// Regular elements of the Cartan subalgebra t_λ^F = Π F_{q^{λ_i}}: every
/// coordinate generates its field over F_q and equal-size coordinates lie in
/// different Galois orbits.
pub fn regular_cartan_count(parts: &[u32], field: &Field) -> Result<u64> {
    let (p, e) = (field.characteristic(), field.degree());
    let q = field.order();
    let tables: Vec<Vec<Option<u32>>> = parts
        .iter()
        .map(|&d| {
            let big = Field::new(p, e * d)?;
            Ok(big
                .elements()
                .map(|x| {
                    let mut y = x;
                    let mut min = x;
                    let mut size = 0;
                    loop {
                        y = big.pow(y, q);
                        size += 1;
                        min = min.min(y);
                        if y == x {
                            break;
                        }
                    }
                    (size == d).then_some(min)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let total: u64 = tables.iter().map(|t| t.len() as u64).product();
    if total > ALGEBRA_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "Cartan subalgebra of size {total}"
        )));
    }
    let mut count = 0u64;
    let mut idx = vec![0usize; parts.len()];
    'outer: loop {
        let reps: Option<Vec<u32>> = idx.iter().zip(&tables).map(|(&i, t)| t[i]).collect();
        if let Some(r) = reps {
            let distinct =
                (0..parts.len()).all(|i| (0..i).all(|j| parts[i] != parts[j] || r[i] != r[j]));
            if distinct {
                count += 1;
            }
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

/// Pairs (X, Y) of regular semisimple orbits with different Cartan classes
/// whose Fourier value is nonzero; empty when the vanishing law holds.
pub fn cross_cartan_nonzero(o: &OrbitTable, t: &FourierTable) -> Vec<(u32, u32)> {
    let mut out = vec![];
    for (i, a) in o.orbits.iter().enumerate() {
        for (j, b) in o.orbits.iter().enumerate() {
            if let (Some(la), Some(lb)) = (&a.cartan_partition, &b.cartan_partition) {
                if la != lb && !t.values[i][j].is_zero() {
                    out.push((i as u32, j as u32));
                }
            }
        }
    }
    out
}
