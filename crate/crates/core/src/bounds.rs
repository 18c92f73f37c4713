//! Lower bounds for zero densities, the simple-group polynomials f₁, f₂,
//! threshold searches, class-count checks for SL_n and trend data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::char_table::{character_table_of, zero_census};
use crate::error::{Error, Result};
use crate::exact_num::IntPoly;
use crate::finite_field::{matrix as fm, prime_power, Field};
use crate::gl_structure::{gln_zero_ratio_formula, gln_zero_ratio_ratfunc, torus_inventory};
use crate::lie_fourier::{regular_cartan_count, OrbitTable};
use crate::matrix_group::{conjugacy_classes, general_linear, gl_order, GroupTable};
use crate::weyl_stats::{
    class_moments, partitions, sym_centralizer_order, symmetric_conjugacy_probability, CartanType,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundInput {
    pub n_rss: BigInt,
    pub n_rss_dual: BigInt,
    pub n_classes: BigInt,
    pub q: u64,
    pub r: usize,
    pub l: usize,
    pub z_order: u64,
    pub sum_inv_c_sq: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub raw: BigRational,
    pub clamped: BigRational,
}

impl LowerBound {
    pub fn is_vacuous(&self) -> bool {
        !self.raw.is_positive()
    }
}

/// n_rss·n_rss_dual/n_classes² − (q+1)^{2r}/(q^{2l}·|Z|²)·Σ1/c².
pub fn lower_bound_general(b: &BoundInput) -> Result<LowerBound> {
    if b.n_classes.is_zero() {
        return Err(Error::InvalidArgument("class count is zero".into()));
    }
    if b.z_order == 0 || b.q == 0 {
        return Err(Error::InvalidArgument("q and |Z| must be positive".into()));
    }
    let main = BigRational::new(&b.n_rss * &b.n_rss_dual, &b.n_classes * &b.n_classes);
    let num = BigInt::from(b.q + 1).pow(2 * b.r as u32);
    let den = BigInt::from(b.q).pow(2 * b.l as u32) * BigInt::from(b.z_order).pow(2);
    let raw = main - BigRational::new(num, den) * &b.sum_inv_c_sq;
    let clamped = if raw.is_negative() {
        BigRational::zero()
    } else {
        raw.clone()
    };
    Ok(LowerBound { raw, clamped })
}

/// Bound inputs for GL_n(F_q), with regular semisimple counts read off the
/// torus inventory.
pub fn gl_bound_input(n: usize, q: u64) -> Result<BoundInput> {
    let inv = torus_inventory(n, q)?;
    let n_rss: u64 = inv.iter().map(|t| t.regular_class_count).sum();
    let n_rss_dual: u64 = inv.iter().map(|t| t.dual_regular_count).sum();
    Ok(BoundInput {
        n_rss: n_rss.into(),
        n_rss_dual: n_rss_dual.into(),
        n_classes: crate::gl_structure::gl_class_count(n, q),
        q,
        r: n,
        l: n - 1,
        z_order: q - 1,
        sum_inv_c_sq: symmetric_conjugacy_probability(n),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveBound {
    /// |rss|²/|orbits|² − Σ g_i²/(c_i²·|orbits|²).
    pub exact: BigRational,
    /// |rss|²/|orbits|² − Σ 1/c_i².
    pub crude: BigRational,
    pub regular_counts: Vec<(Vec<u32>, u64)>,
}

/// Lower bounds for the Fourier zero ratio of gl_n(F_q).
pub fn additive_lower_bound(o: &OrbitTable) -> Result<AdditiveBound> {
    let k = BigInt::from(o.orbits.len());
    let rss = BigInt::from(o.regular_semisimple_count());
    let main = BigRational::new(&rss * &rss, &k * &k);
    let mut corr = BigRational::zero();
    let mut inv_c_sq = BigRational::zero();
    let mut regular_counts = vec![];
    for parts in partitions(o.n as u32) {
        let g = regular_cartan_count(&parts, &o.field)?;
        let c = sym_centralizer_order(&parts);
        corr += BigRational::new(BigInt::from(g).pow(2), &c * &c * &k * &k);
        inv_c_sq += BigRational::new(BigInt::one(), &c * &c);
        regular_counts.push((parts, g));
    }
    Ok(AdditiveBound {
        exact: &main - corr,
        crude: main - inv_c_sq,
        regular_counts,
    })
}

/// |[gl_n]| = q^n + C·(q^n − |rss orbits|) holds with C = 1.
pub fn orbit_count_identity(o: &OrbitTable) -> bool {
    let qr = o.q().pow(o.n as u32);
    let rss = o.regular_semisimple_count() as u64;
    qr >= rss && o.orbits.len() as u64 == qr + (qr - rss)
}

/// f₁ = ((x−1)^r − 3(x−1)^{r−1} − 2(x−1)^{r−2})², f₂ = (x^r + 40x^{r−1})².
pub fn simple_bound_polys(r: usize) -> Result<(IntPoly, IntPoly)> {
    if r < 2 {
        return Err(Error::InvalidRank {
            kind: "f-polynomials".into(),
            rank: r,
            reason: "rank must be at least 2".into(),
        });
    }
    let xm1 = IntPoly::from_i64(&[-1, 1]);
    let inner = &xm1.pow(r as u32 - 2) * &IntPoly::from_i64(&[2, -5, 1]);
    let f1 = &inner * &inner;
    let xr = IntPoly::q().pow(r as u32 - 1);
    let outer = &xr * &IntPoly::from_i64(&[40, 1]);
    let f2 = &outer * &outer;
    Ok((f1, f2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// ((q+1)/q)^{2r} < 1+ε
    First,
    /// 1 − f₁(q)/f₂(q) < ε
    Second,
    Both,
}

/// Growth function f(r) for the growing-rank search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Constant(u64),
    Linear,
    Quadratic,
}

impl Growth {
    pub fn eval(self, r: u64) -> u64 {
        match self {
            Growth::Constant(c) => c,
            Growth::Linear => r,
            Growth::Quadratic => r * r,
        }
    }
}

impl std::str::FromStr for Growth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" | "linear" => Ok(Growth::Linear),
            "r^2" | "quadratic" => Ok(Growth::Quadratic),
            _ => s
                .parse()
                .map(Growth::Constant)
                .map_err(|_| Error::InvalidArgument(format!("unknown growth function {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConfig {
    pub growth: Growth,
    pub epsilon: BigRational,
    pub r0: usize,
    pub which: Inequality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    FixedRank,
    GrowingRank,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub mode: SearchMode,
    pub value: u64,
    /// Whether the predicate fails at value − 1 (false when value is the
    /// start of the range).
    pub fails_below: bool,
    pub window: (u64, u64),
}

/// Upper end of the fixed-rank scan.
pub const Q_SEARCH_CAP: u64 = 10_000_000;
/// Window of consecutive values on which a threshold is certified.
pub const FIXED_RANK_WINDOW: u64 = 256;
pub const GROWING_RANK_WINDOW: u64 = 50;
pub const R_SEARCH_CAP: u64 = 2_000;

fn first_holds(q: u64, r: usize, eps: &BigRational) -> bool {
    let base = BigRational::new(BigInt::from(q + 1), BigInt::from(q));
    num_traits::pow(base, 2 * r) < BigRational::one() + eps
}

fn second_holds(q: u64, eps: &BigRational, polys: &(IntPoly, IntPoly)) -> bool {
    let x = BigInt::from(q);
    let f2 = polys.1.eval(&x);
    BigRational::one() - BigRational::new(polys.0.eval(&x), f2) < *eps
}

fn check_epsilon(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::InvalidArgument("epsilon must lie in (0, 1)".into()));
    }
    Ok(())
}

/// Least value v such that `pred` holds on [v, v + window], scanning from
/// `start` up to `cap`.
fn least_stable(
    start: u64,
    cap: u64,
    window: u64,
    pred: impl Fn(u64) -> bool,
) -> Result<Threshold> {
    let mut candidate = start;
    let mut v = start;
    while v <= cap {
        if !pred(v) {
            candidate = v + 1;
        } else if v - candidate >= window {
            return Ok(Threshold {
                mode: SearchMode::FixedRank,
                value: candidate,
                fails_below: candidate > start,
                window: (candidate, v),
            });
        }
        v += 1;
    }
    Err(Error::WindowExhausted(cap))
}

pub fn threshold_search(cfg: &BoundConfig, mode: SearchMode) -> Result<Threshold> {
    check_epsilon(&cfg.epsilon)?;
    let eps = &cfg.epsilon;
    match mode {
        SearchMode::FixedRank => {
            if cfg.r0 < 2 {
                return Err(Error::InvalidRank {
                    kind: "threshold search".into(),
                    rank: cfg.r0,
                    reason: "R0 must be at least 2".into(),
                });
            }
            let polys: Vec<_> = (2..=cfg.r0)
                .map(simple_bound_polys)
                .collect::<Result<_>>()?;
            let pred = |q: u64| {
                (2..=cfg.r0).zip(&polys).all(|(r, p)| {
                    let a = cfg.which == Inequality::Second || first_holds(q, r, eps);
                    a && (cfg.which == Inequality::First || second_holds(q, eps, p))
                })
            };
            least_stable(2, Q_SEARCH_CAP, FIXED_RANK_WINDOW, pred)
        }
        SearchMode::GrowingRank => {
            let pred = |r: u64| {
                let q = r * cfg.growth.eval(r);
                let ru = r as usize;
                let a = cfg.which == Inequality::Second || first_holds(q, ru, eps);
                a && (cfg.which == Inequality::First
                    || second_holds(q, eps, &simple_bound_polys(ru).expect("r ≥ 2")))
            };
            let mut t = least_stable(2, R_SEARCH_CAP, GROWING_RANK_WINDOW, pred)?;
            t.mode = SearchMode::GrowingRank;
            Ok(t)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlCheck {
    pub q: u64,
    pub rank: usize,
    pub rss_elements: u64,
    pub order: u64,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub pass: bool,
    pub class_count: u64,
    pub class_bound: BigInt,
    pub class_pass: bool,
}

/// Proportion of regular semisimple elements of SL_n(F_q) against
/// 1 − 3/(q−1) − 2/(q−1)², and |[SL_n]| against q^r + 40q^{r−1}.
pub fn guralnick_lubeck_check(g: &GroupTable) -> Result<GlCheck> {
    let mg = g
        .as_matrix_group()
        .ok_or_else(|| Error::InvalidArgument("expected a matrix group".into()))?;
    let f: &Field = mg.field();
    let n = mg.dim();
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    let q = f.order();
    let rank = n - 1;
    let rss = (0..g.order() as u32)
        .into_par_iter()
        .filter(|&i| fm::char_poly(f, mg.matrix(i), n).is_squarefree(f))
        .count() as u64;
    let order = g.order() as u64;
    let lhs = BigRational::new(rss.into(), order.into());
    let d = BigInt::from(q - 1);
    let rhs = BigRational::one()
        - BigRational::new(3.into(), d.clone())
        - BigRational::new(2.into(), &d * &d);
    let class_count = conjugacy_classes(g).len() as u64;
    let qb = BigInt::from(q);
    let class_bound = qb.pow(rank as u32) + 40 * qb.pow(rank as u32 - 1);
    Ok(GlCheck {
        q,
        rank,
        rss_elements: rss,
        order,
        pass: lhs > rhs,
        lhs,
        rhs,
        class_pass: BigInt::from(class_count) <= class_bound,
        class_count,
        class_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QRule {
    Fixed(u64),
    /// Least prime power ≥ k·n.
    Scaled(u64),
}

impl QRule {
    pub fn q_for(self, n: usize) -> u64 {
        match self {
            QRule::Fixed(q) => q,
            QRule::Scaled(k) => (k.max(1) * n as u64..)
                .find(|&q| q >= 2 && prime_power(q).is_some())
                .expect("prime powers are unbounded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendConfig {
    pub max_n: usize,
    pub q_rule: QRule,
    /// Brute-force columns only for groups of at most this order.
    pub brute_order_cap: u128,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            max_n: 61,
            q_rule: QRule::Fixed(3),
            brute_order_cap: 12_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendRow {
    pub n: usize,
    pub q: u64,
    pub sum_inv_c_sq: BigRational,
    /// 1 − Σ1/c² for S_n.
    pub weyl_limit: BigRational,
    pub below_bbw: Option<bool>,
    pub formula: Option<BigRational>,
    pub formula_limit: Option<BigRational>,
    pub brute: Option<BigRational>,
}

pub fn brute_gl_zero_ratio(n: usize, q: u64) -> Result<BigRational> {
    let g = general_linear(n, std::sync::Arc::new(Field::from_order(q)?))?;
    let (_, t) = character_table_of(&g)?;
    Ok(zero_census(&t).ratio)
}

pub fn trend_report(cfg: &TrendConfig) -> Result<Vec<TrendRow>> {
    let rows: Vec<Result<TrendRow>> = (1..=cfg.max_n)
        .into_par_iter()
        .map(|n| {
            let q = cfg.q_rule.q_for(n);
            let sum = if n == 1 {
                BigRational::one()
            } else {
                class_moments(CartanType::A, n - 1)?.sum_inv_c_sq
            };
            let r = n - 1;
            let below_bbw = (r >= 9).then(|| sum <= BigRational::new(6.into(), (r * r).into()));
            let formula = gln_zero_ratio_formula(n, q).ok();
            let formula_limit =
                gln_zero_ratio_ratfunc(n)
                    .ok()
                    .and_then(|f| match f.limit_at_infinity() {
                        crate::exact_num::ExtRational::Finite(v) => Some(v),
                        _ => None,
                    });
            let small = n <= 3 && gl_order(n as u32, q).is_some_and(|o| o <= cfg.brute_order_cap);
            let brute = if small {
                Some(brute_gl_zero_ratio(n, q)?)
            } else {
                None
            };
            Ok(TrendRow {
                n,
                q,
                weyl_limit: BigRational::one() - &sum,
                sum_inv_c_sq: sum,
                below_bbw,
                formula,
                formula_limit,
                brute,
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_num::rational;

    #[test]
    fn gl2_f5_bound_is_vacuous() {
        let b = gl_bound_input(2, 5).unwrap();
        assert_eq!(b.n_rss, BigInt::from(16));
        assert_eq!(b.n_classes, BigInt::from(24));
        let lb = lower_bound_general(&b).unwrap();
        assert_eq!(lb.raw, rational(-529, 450));
        assert!(lb.clamped.is_zero() && lb.is_vacuous());
    }

    #[test]
    fn torus_bound_is_vacuous() {
        for q in [2u64, 3, 7] {
            let b = gl_bound_input(1, q).unwrap();
            assert!(lower_bound_general(&b).unwrap().raw.is_negative());
        }
    }

    #[test]
    fn f_polys_at_ten() {
        let (f1, f2) = simple_bound_polys(2).unwrap();
        assert_eq!(f1.eval_i64(10), BigInt::from(2704));
        assert_eq!(f2.eval_i64(10), BigInt::from(250000));
        for r in [2, 5, 17] {
            let (a, b) = simple_bound_polys(r).unwrap();
            assert!(a.is_monic() && b.is_monic());
            assert_eq!(a.degree(), Some(2 * r));
            assert_eq!(b.degree(), Some(2 * r));
        }
        assert!(simple_bound_polys(1).is_err());
    }

    #[test]
    fn first_inequality_threshold() {
        let cfg = BoundConfig {
            growth: Growth::Linear,
            epsilon: rational(1, 10),
            r0: 8,
            which: Inequality::First,
        };
        let t = threshold_search(&cfg, SearchMode::FixedRank).unwrap();
        assert_eq!(t.value, 168);
        assert!(t.fails_below);
        assert!(!first_holds(167, 8, &cfg.epsilon));
        assert!(first_holds(168, 8, &cfg.epsilon));
    }

    #[test]
    fn sl2_checks() {
        let f = std::sync::Arc::new(Field::from_order(5).unwrap());
        let g = crate::matrix_group::special_linear(2, f).unwrap();
        let c = guralnick_lubeck_check(&g).unwrap();
        assert_eq!(c.rhs, rational(1, 8));
        assert!(c.pass && c.class_pass);
        assert_eq!(c.order, 120);
    }
}
