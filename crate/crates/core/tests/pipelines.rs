//! End-to-end behaviour of the Lie algebra, bounds and export pipelines.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use vanish_core::bounds::{
    additive_lower_bound, brute_gl_zero_ratio, gl_bound_input, lower_bound_general,
    simple_bound_polys, threshold_search, trend_report, BoundConfig, Growth, Inequality, QRule,
    SearchMode, TrendConfig,
};
use vanish_core::char_table::character_table_of;
use vanish_core::exact_num::{ExtRational, IntPoly, RatFunc};
use vanish_core::export::{
    character_table_from_value, character_table_value, is_float_free, rational_value,
};
use vanish_core::finite_field::{matrix as fm, Field};
use vanish_core::lie_fourier::{
    adjoint_orbits, fourier_table, fourier_table_scaled, fourier_zero_census, hc_induction_split,
    regular_cartan_count,
};
use vanish_core::matrix_group::general_linear;
use vanish_core::weyl_stats::sym_centralizer_order;
use vanish_core::Error;

fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::from_order(q).unwrap())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn gl2_f5_orbit_structure() {
    let o = adjoint_orbits(2, field(5)).unwrap();
    assert_eq!(o.orbits.len(), 30);
    assert_eq!(o.semisimple_count(), 25);
    assert_eq!(o.regular_semisimple_count(), 20);
    assert_eq!(o.orbits.iter().map(|x| x.size).sum::<u64>(), 625);
    for orb in &o.orbits {
        if !orb.is_semisimple {
            let ss = &o.orbits[orb.semisimple_class as usize];
            assert!(ss.is_semisimple && !ss.is_regular_semisimple);
        }
    }
}

#[test]
fn gl1_has_no_fourier_zeros() {
    for q in [2u64, 3, 5] {
        let o = adjoint_orbits(1, field(q)).unwrap();
        assert_eq!(o.orbits.len() as u64, q);
        assert!(o.orbits.iter().all(|x| x.is_semisimple));
        let z = fourier_zero_census(&fourier_table(&o));
        assert_eq!(z.zero_entries, 0);
    }
}

#[test]
fn zero_report_is_independent_of_the_character() {
    let o = adjoint_orbits(2, field(3)).unwrap();
    let base = fourier_zero_census(&fourier_table(&o));
    for c in 1..3 {
        let z = fourier_zero_census(&fourier_table_scaled(&o, c));
        assert_eq!(z.zero_entries, base.zero_entries);
        let mut a = z.per_character_zero_counts.clone();
        let mut b = base.per_character_zero_counts.clone();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }
}

#[test]
fn harish_chandra_induction_examples() {
    let o = adjoint_orbits(2, field(3)).unwrap();
    let t = fourier_table(&o);
    let x = fm::diagonal(&[0, 1]);
    let ox = o.orbit_of_matrix(&x) as usize;
    // Y = 0: q^{|Φ⁺|}·(q+1) = |O_X|
    let zero = hc_induction_split(&o, &x, &[0; 4]).unwrap();
    assert_eq!(o.orbits[ox].size, 12);
    assert!(zero.equals_scaled(&t.values[ox][o.orbit_of_matrix(&[0; 4]) as usize], 3));
    // Y elliptic regular: empty sum
    let ell = o
        .orbits
        .iter()
        .find(|x| x.cartan_partition.as_deref() == Some(&[2][..]))
        .unwrap();
    assert!(hc_induction_split(&o, &x, &ell.rep_matrix)
        .unwrap()
        .is_zero());
    // Y = X
    let same = hc_induction_split(&o, &x, &x).unwrap();
    assert!(same.equals_scaled(&t.values[ox][ox], 3));
    assert_eq!(
        hc_induction_split(&o, &fm::diagonal(&[1, 1]), &x).unwrap_err(),
        Error::NotRegularSplit
    );
}

#[test]
fn regular_cartan_counts_divide() {
    for q in [2u64, 3, 4] {
        let f = Field::from_order(q).unwrap();
        let o = adjoint_orbits(3, field(q)).unwrap();
        let mut total = 0u64;
        for parts in [vec![1u32, 1, 1], vec![2, 1], vec![3]] {
            let g = regular_cartan_count(&parts, &f).unwrap();
            let c = sym_centralizer_order(&parts);
            assert!((BigInt::from(g) % &c).is_zero());
            let orbits = o
                .orbits
                .iter()
                .filter(|x| x.cartan_partition.as_ref() == Some(&parts))
                .count() as u64;
            assert_eq!(BigInt::from(g), c * orbits);
            total += orbits;
        }
        assert_eq!(total as usize, o.regular_semisimple_count());
        assert_eq!(o.semisimple_count() as u64, q.pow(3));
    }
}

#[test]
fn additive_bounds_hold() {
    for q in [3u64, 5, 7] {
        let o = adjoint_orbits(2, field(q)).unwrap();
        let z = fourier_zero_census(&fourier_table(&o));
        let b = additive_lower_bound(&o).unwrap();
        assert!(b.exact <= z.ratio, "q={q}");
        assert!(b.crude <= b.exact);
    }
}

#[test]
fn general_bound_never_exceeds_brute_ratio() {
    for (n, q) in [
        (2usize, 2u64),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 7),
        (3, 2),
        (3, 3),
    ] {
        let lb = lower_bound_general(&gl_bound_input(n, q).unwrap()).unwrap();
        let brute = brute_gl_zero_ratio(n, q).unwrap();
        assert!(lb.raw <= brute && lb.clamped <= brute, "GL{n}(F{q})");
    }
}

#[test]
fn gl2_bound_limit_is_one_half() {
    // (q−1)^4 / (q^2−1)^2 · ... reduces to n_rss² / τ² with n_rss = q² − q
    // and τ = q² − 1 for GL_2; the correction term tends to 1/2
    let rss = IntPoly::from_i64(&[0, -1, 1]);
    let tau = IntPoly::from_i64(&[-1, 0, 1]);
    let main = RatFunc::new(&rss * &rss, &tau * &tau).unwrap();
    let half = RatFunc::new(IntPoly::one(), IntPoly::from_i64(&[2])).unwrap();
    assert_eq!(
        main.sub(&half).limit_at_infinity(),
        ExtRational::Finite(rat(1, 2))
    );
}

#[test]
fn simple_polys_gap_vanishes() {
    let (f1, f2) = simple_bound_polys(2).unwrap();
    let gap = RatFunc::from_poly(IntPoly::one()).sub(&RatFunc::new(f1, f2).unwrap());
    assert_eq!(
        gap.limit_at_infinity(),
        ExtRational::Finite(BigRational::zero())
    );
}

#[test]
fn threshold_searches() {
    let mut cfg = BoundConfig {
        growth: Growth::Linear,
        epsilon: rat(1, 10),
        r0: 8,
        which: Inequality::Both,
    };
    let fixed = threshold_search(&cfg, SearchMode::FixedRank).unwrap();
    assert!(fixed.value >= 168 && fixed.fails_below);
    let growing = threshold_search(&cfg, SearchMode::GrowingRank).unwrap();
    assert!(growing.fails_below);
    assert!(growing.window.1 - growing.window.0 >= 50);
    cfg.r0 = 1;
    assert!(threshold_search(&cfg, SearchMode::FixedRank).is_err());
    cfg.r0 = 8;
    cfg.epsilon = rat(3, 2);
    assert!(threshold_search(&cfg, SearchMode::FixedRank).is_err());
    // constant f keeps q bounded and the first inequality eventually fails
    cfg.epsilon = rat(1, 10);
    cfg.growth = Growth::Constant(1);
    assert_eq!(
        threshold_search(&cfg, SearchMode::GrowingRank).unwrap_err(),
        Error::WindowExhausted(vanish_core::bounds::R_SEARCH_CAP)
    );
}

#[test]
fn trend_rows() {
    let rows = trend_report(&TrendConfig {
        max_n: 61,
        q_rule: QRule::Fixed(3),
        brute_order_cap: 12_000,
    })
    .unwrap();
    assert_eq!(rows.len(), 61);
    let by_rank = |r: usize| &rows[r].sum_inv_c_sq;
    assert!(by_rank(10) > by_rank(20) && by_rank(20) > by_rank(40));
    for r in [10usize, 20, 40] {
        assert_eq!(rows[r].below_bbw, Some(true));
    }
    assert_eq!(rows[1].brute, Some(rat(15, 64)));
    assert_eq!(rows[1].formula, Some(rat(5, 32)));
    assert_eq!(rows[1].formula_limit, Some(rat(1, 2)));
    assert_eq!(rows[2].brute, Some(rat(53, 144)));
    assert!(rows[3].brute.is_none());
}

#[test]
fn character_table_json_round_trip() {
    for q in [2u64, 3, 4] {
        let g = general_linear(2, field(q)).unwrap();
        let (_, t) = character_table_of(&g).unwrap();
        let v = character_table_value(&t);
        assert!(is_float_free(&v));
        let text = serde_json::to_string(&v).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(character_table_from_value(&back).unwrap(), t);
    }
    assert_eq!(rational_value(&rat(1, 2)), serde_json::json!("1/2"));
    assert_eq!(rational_value(&BigRational::one()), serde_json::json!("1"));
}
