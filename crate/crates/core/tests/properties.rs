//! Property-based invariants of the exact substrate and the algorithms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use vanish_core::bounds::{lower_bound_general, simple_bound_polys, BoundInput};
use vanish_core::char_table::{character_table_of, verify_orthogonality, zero_census};
use vanish_core::exact_num::{parse_rational, rational_string, CycInt, IntPoly};
use vanish_core::export::{cyc_from_value, cyc_value};
use vanish_core::finite_field::{matrix as fm, Field};
use vanish_core::lie_fourier::{jordan_decomposition, nilpotent_jordan_type};
use vanish_core::matrix_group::{direct_product, general_linear, symmetric_group};

const CONDUCTORS: [u64; 6] = [1, 3, 4, 5, 8, 12];
const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn cyc(m: u64) -> impl Strategy<Value = CycInt> {
    prop::collection::vec((0..m, -5i64..=5), 0..6).prop_map(move |terms| {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0) += c;
        }
        CycInt::from_exponents(m, &map).unwrap()
    })
}

fn cyc_triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|m| (cyc(m), cyc(m), cyc(m)))
}

fn field_and_elems(k: usize) -> impl Strategy<Value = (Arc<Field>, Vec<u32>)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(move |q| {
        (
            Just(Arc::new(Field::from_order(q).unwrap())),
            prop::collection::vec(0..q as u32, k),
        )
    })
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 0..6).prop_map(|c| IntPoly::from_i64(&c))
}

proptest! {
    #[test]
    fn cyclotomic_ring_laws((a, b, c) in cyc_triple()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn cyclotomic_lift_preserves_value((a, b, _) in cyc_triple(), k in 1u64..4) {
        let m = a.conductor() * k;
        let (la, lb) = (a.lift(m).unwrap(), b.lift(m).unwrap());
        prop_assert_eq!(la.mul(&lb), a.mul(&b).lift(m).unwrap());
        prop_assert_eq!(la, a);
    }

    #[test]
    fn roots_of_unity_sum_to_zero(m in 2u64..30) {
        let terms: BTreeMap<u64, i64> = (0..m).map(|e| (e, 1)).collect();
        prop_assert!(CycInt::from_exponents(m, &terms).unwrap().is_zero());
    }

    #[test]
    fn cyc_json_round_trip((a, _, _) in cyc_triple()) {
        prop_assert_eq!(cyc_from_value(&cyc_value(&a)).unwrap(), a);
    }

    #[test]
    fn field_axioms((f, v) in field_and_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, f.order()), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        let t = f.trace_to_prime(f.add(a, b));
        prop_assert_eq!(t, (f.trace_to_prime(a) + f.trace_to_prime(b)) % f.characteristic() as u32);
    }

    #[test]
    fn determinant_is_multiplicative((f, v) in field_and_elems(18)) {
        let (a, b) = (&v[..9], &v[9..]);
        let ab = fm::mat_mul(&f, a, b, 3);
        prop_assert_eq!(fm::det(&f, &ab, 3), f.mul(fm::det(&f, a, 3), fm::det(&f, b, 3)));
        let cp = fm::char_poly(&f, a, 3);
        prop_assert!(fm::is_zero_matrix(&fm::poly_eval_matrix(&f, &cp, a, 3)));
    }

    #[test]
    fn jordan_decomposition_is_exact((f, v) in field_and_elems(9)) {
        let (s, nil) = jordan_decomposition(&f, &v, 3).unwrap();
        prop_assert_eq!(fm::mat_add(&f, &s, &nil), v.clone());
        prop_assert_eq!(fm::mat_mul(&f, &s, &nil, 3), fm::mat_mul(&f, &nil, &s, 3));
        prop_assert!(fm::minimal_poly(&f, &s, 3).is_squarefree(&f));
        let blocks = nilpotent_jordan_type(&f, &nil, 3).unwrap();
        prop_assert_eq!(blocks.iter().sum::<u32>(), 3);
    }

    #[test]
    fn int_poly_evaluation_is_a_ring_map(a in int_poly(), b in int_poly(), x in -10i64..10) {
        let xb = BigInt::from(x);
        prop_assert_eq!((&a * &b).eval(&xb), a.eval(&xb) * b.eval(&xb));
        prop_assert_eq!((&a + &b).eval(&xb), a.eval(&xb) + b.eval(&xb));
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        }
    }

    #[test]
    fn rational_strings_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = BigRational::new(n.into(), d.into());
        let s = rational_string(&r);
        prop_assert!(!s.contains('.'));
        prop_assert_eq!(parse_rational(&s), Some(r));
    }

    #[test]
    fn f_polys_are_monic(r in 2usize..40) {
        let (f1, f2) = simple_bound_polys(r).unwrap();
        prop_assert!(f1.is_monic() && f2.is_monic());
        prop_assert_eq!(f1.degree(), Some(2 * r));
        prop_assert_eq!(f2.degree(), Some(2 * r));
    }

    #[test]
    fn clamped_bound_is_nonnegative(
        rss in 0u64..50, extra in 1u64..50, q in 2u64..50, r in 1usize..4, num in 1i64..20,
    ) {
        let b = BoundInput {
            n_rss: rss.into(),
            n_rss_dual: rss.into(),
            n_classes: (rss + extra).into(),
            q,
            r,
            l: r - 1,
            z_order: q - 1,
            sum_inv_c_sq: BigRational::new(1.into(), num.into()),
        };
        let lb = lower_bound_general(&b).unwrap();
        prop_assert!(!lb.clamped.is_negative());
        prop_assert!(lb.raw <= BigRational::from_integer(1.into()));
        prop_assert!(lb.raw <= lb.clamped);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn products_multiply_nonzero_proportions(a in 1usize..4, b in 1usize..4, q in prop::sample::select(vec![2u64, 3])) {
        let f2 = Arc::new(Field::from_order(2).unwrap());
        let ga = symmetric_group(a, f2).unwrap();
        let gb = general_linear(b.min(2), Arc::new(Field::from_order(q).unwrap())).unwrap();
        let p = |g: &vanish_core::matrix_group::GroupTable| {
            let (_, t) = character_table_of(g).unwrap();
            assert!(verify_orthogonality(&t));
            zero_census(&t).nonzero_ratio()
        };
        let (pa, pb) = (p(&ga), p(&gb));
        let prod = direct_product(ga, gb).unwrap();
        prop_assert_eq!(p(&prod), pa * pb);
    }
}

#[test]
fn zero_ratio_never_exceeds_one() {
    for (n, q) in [(1usize, 2u64), (1, 5), (2, 2), (2, 3)] {
        let g = general_linear(n, Arc::new(Field::from_order(q).unwrap())).unwrap();
        let (_, t) = character_table_of(&g).unwrap();
        let z = zero_census(&t);
        assert!(z.ratio >= BigRational::zero() && z.ratio < BigRational::from_integer(1.into()));
    }
}
