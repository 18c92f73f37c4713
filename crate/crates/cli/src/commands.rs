//! Subcommand implementations. Each returns an [`Output`] or a [`CliError`].

use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};
use vanish_core::bounds::{
    additive_lower_bound, gl_bound_input, guralnick_lubeck_check, lower_bound_general,
    orbit_count_identity, simple_bound_polys, threshold_search, trend_report, BoundConfig, Growth,
    Inequality, QRule, SearchMode, TrendConfig,
};
use vanish_core::char_table::{character_table_of, verify_orthogonality, zero_census};
use vanish_core::exact_num::{parse_rational, rational_string, ExtRational, RatFunc};
use vanish_core::export::{character_table_value, rational_value, zero_report_value};
use vanish_core::finite_field::{prime_power, Field};
use vanish_core::gl_structure::{
    general_position_count, gl_descriptor, gln_zero_ratio_formula, regular_ss_class_count,
    torus_inventory,
};
use vanish_core::lie_fourier::{
    adjoint_orbits, check_representative_independence, cross_cartan_nonzero, fourier_table,
    fourier_zero_census, kl_verify, verify_double_transform,
};
use vanish_core::matrix_group::{
    direct_product, general_linear, special_linear, symmetric_group, GroupTable,
};
use vanish_core::weyl_stats::{
    bbw_bound_check, class_moments, weyl_classes_with, CartanType, ClassShape, TypeALattice,
    DEFAULT_RANK_CAP,
};
use vanish_core::Error;

use crate::output::{cell, Output};

#[derive(Debug)]
pub enum CliError {
    /// Invalid input; exit code 2.
    Usage(String),
    /// A failed internal check; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrimePower(q) | Error::NotPrime(q) => {
                CliError::Usage(format!("--q: q must be a prime power (got {q})"))
            }
            Error::Internal(m) => CliError::Failure(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn check_q(q: u64) -> CliResult<()> {
    if q < 2 || prime_power(q).is_none() {
        return Err(CliError::Usage(format!(
            "--q: q must be a prime power (got {q})"
        )));
    }
    Ok(())
}

fn field(q: u64) -> CliResult<Arc<Field>> {
    check_q(q)?;
    Ok(Arc::new(Field::from_order(q)?))
}

fn rat(r: &vanish_core::exact_num::ExtRational) -> Value {
    match r {
        ExtRational::Finite(v) => rational_value(v),
        other => Value::String(other.to_string()),
    }
}

fn opt_rat(r: &Option<num_rational::BigRational>) -> Value {
    r.as_ref().map_or(Value::Null, rational_value)
}

fn partition_label(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn weyl_stats(ty: &str, rank: usize, lattice: &str, list: bool) -> CliResult<Output> {
    let ty = match (ty.to_ascii_uppercase().as_str(), rank) {
        ("E", 6) | ("F", 4) | ("G", 2) => format!("{ty}{rank}"),
        _ => ty.to_string(),
    };
    let t = CartanType::from_str(&ty).map_err(|e| CliError::Usage(format!("--type: {e}")))?;
    let lattice = match lattice {
        "gl" => TypeALattice::Gl,
        "sl" => TypeALattice::Sl,
        other => {
            return Err(CliError::Usage(format!(
                "--lattice: expected gl or sl, got {other}"
            )))
        }
    };
    let table = if list || !t.is_classical() {
        Some(weyl_classes_with(t, rank, lattice, DEFAULT_RANK_CAP)?)
    } else {
        None
    };
    let (tau, s1, s2) = match &table {
        Some(tb) => (tb.tau().into(), tb.sum_inv_c(), tb.sum_inv_c_sq()),
        None => {
            let m = class_moments(t, rank)?;
            (m.tau, m.sum_inv_c, m.sum_inv_c_sq)
        }
    };
    let one = num_rational::BigRational::from_integer(1.into());
    let mut doc = json!({
        "type": t.to_string(),
        "rank": rank,
        "tau": tau.to_string(),
        "sum_inv_c": rational_value(&s1),
        "sum_inv_c_sq": rational_value(&s2),
        "one_minus_sum_inv_c_sq": rational_value(&(&one - &s2)),
    });
    if t.is_classical() && rank >= 9 {
        let b = bbw_bound_check(t, rank)?;
        doc["bbw"] = json!({
            "bound": rational_value(&b.bound),
            "pass": b.pass,
            "symmetric_sum": opt_rat(&b.symmetric_probability),
            "quotient_pass": b.quotient_pass,
        });
    }
    let Some(tb) = table.filter(|_| list) else {
        return Ok(Output::fields(doc));
    };
    doc["group_order"] = Value::String(tb.group_order.to_string());
    let mut rows = vec![];
    let mut classes = vec![];
    for c in &tb.classes {
        let torus = c.char_poly(tb.lattice).to_string();
        let shape = match &c.shape {
            ClassShape::Partition(p) => partition_label(p),
            _ => c.label.clone(),
        };
        classes.push(json!({
            "label": c.label,
            "class_size": c.class_size.to_string(),
            "centralizer_order": c.centralizer_order.to_string(),
            "torus_order": torus,
        }));
        rows.push(vec![
            shape,
            c.class_size.to_string(),
            c.centralizer_order.to_string(),
            torus,
        ]);
    }
    doc["classes"] = Value::Array(classes);
    Ok(Output::new(
        doc,
        &["class", "class_size", "centralizer_order", "torus_order"],
        rows,
    ))
}

pub fn torus_orders(n: usize, q: u64) -> CliResult<Output> {
    check_q(q)?;
    let inv = torus_inventory(n, q)?;
    let mut rows = vec![];
    let mut recs = vec![];
    for r in &inv {
        let gp = general_position_count(&r.partition, q).ok();
        recs.push(json!({
            "partition": r.partition,
            "torus_order": r.torus_order.to_string(),
            "torus_order_value": r.torus_order_value,
            "c_lambda": r.c_lambda,
            "f_lambda": r.f_lambda,
            "regular_classes": r.regular_class_count,
            "general_position": gp,
        }));
        rows.push(vec![
            partition_label(&r.partition),
            r.torus_order.to_string(),
            r.torus_order_value.to_string(),
            r.c_lambda.to_string(),
            r.f_lambda.to_string(),
            r.regular_class_count.to_string(),
            gp.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(Output::new(
        json!({ "n": n, "q": q, "tori": recs }),
        &[
            "partition",
            "torus_order",
            "value",
            "c_lambda",
            "f_lambda",
            "regular_classes",
            "general_position",
        ],
        rows,
    ))
}

pub fn gln_structure(n: usize, q: u64) -> CliResult<Output> {
    check_q(q)?;
    let d = gl_descriptor(n, q)?;
    let mut doc = json!({
        "n": n,
        "q": q,
        "rank": d.rank,
        "semisimple_rank": d.semisimple_rank,
        "center_order": d.center_order,
        "positive_roots": d.positive_roots,
        "classes": d.class_count.to_string(),
        "formula": gln_zero_ratio_formula(n, q).ok().map_or(Value::Null, |r| rational_value(&r)),
    });
    if let Ok(rss) = regular_ss_class_count(n, q) {
        doc["regular_semisimple_classes"] = rss.into();
        let lb = lower_bound_general(&gl_bound_input(n, q)?)?;
        doc["lower_bound"] = rational_value(&lb.raw);
        doc["lower_bound_clamped"] = rational_value(&lb.clamped);
    }
    Ok(Output::fields(doc))
}

/// A group named as `gl:n:q`, `sl:n:q` or `sym:n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Gl(usize, u64),
    Sl(usize, u64),
    Sym(usize),
}

impl GroupSpec {
    pub fn from_flags(kind: &str, n: usize, q: Option<u64>) -> CliResult<Self> {
        let need_q =
            || q.ok_or_else(|| CliError::Usage(format!("--q is required for --group {kind}")));
        match kind {
            "gl" => Ok(GroupSpec::Gl(n, need_q()?)),
            "sl" => Ok(GroupSpec::Sl(n, need_q()?)),
            "sym" => Ok(GroupSpec::Sym(n)),
            other => Err(CliError::Usage(format!(
                "--group: expected gl, sl or sym, got {other}"
            ))),
        }
    }

    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("--times: bad number {x:?} in {s:?}")))
        };
        match parts.as_slice() {
            [k, n] => GroupSpec::from_flags(k, num(n)? as usize, None),
            [k, n, q] => GroupSpec::from_flags(k, num(n)? as usize, Some(num(q)?)),
            _ => Err(CliError::Usage(format!(
                "--times: expected kind:n[:q], got {s:?}"
            ))),
        }
    }

    pub fn build(&self) -> CliResult<GroupTable> {
        Ok(match *self {
            GroupSpec::Gl(n, q) => general_linear(n, field(q)?)?,
            GroupSpec::Sl(n, q) => special_linear(n, field(q)?)?,
            GroupSpec::Sym(n) => symmetric_group(n, field(2)?)?,
        })
    }

    pub fn label(&self) -> String {
        match self {
            GroupSpec::Gl(n, q) => format!("GL{n}(F{q})"),
            GroupSpec::Sl(n, q) => format!("SL{n}(F{q})"),
            GroupSpec::Sym(n) => format!("S{n}"),
        }
    }
}

fn build_all(specs: &[GroupSpec]) -> CliResult<GroupTable> {
    let mut it = specs.iter();
    let mut g = it.next().expect("at least one group").build()?;
    for s in it {
        g = direct_product(g, s.build()?)?;
    }
    Ok(g)
}

fn label_all(specs: &[GroupSpec]) -> String {
    specs
        .iter()
        .map(GroupSpec::label)
        .collect::<Vec<_>>()
        .join(" x ")
}

pub fn char_table(specs: &[GroupSpec]) -> CliResult<Output> {
    let g = build_all(specs)?;
    let (classes, t) = character_table_of(&g)?;
    if !verify_orthogonality(&t) {
        return Err(CliError::Failure("orthogonality relations fail".into()));
    }
    let mut doc = character_table_value(&t);
    doc["group"] = Value::String(label_all(specs));
    doc["class_orders"] = json!(classes.rep_orders);
    doc["census"] = zero_report_value(&zero_census(&t));
    let rows = t
        .values
        .iter()
        .zip(&t.degrees)
        .map(|(row, d)| {
            std::iter::once(d.to_string())
                .chain(row.iter().map(|v| v.to_string()))
                .collect()
        })
        .collect();
    let mut header = vec!["degree".to_string()];
    header.extend((0..t.class_sizes.len()).map(|k| format!("class{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Output::new(doc, &header, rows))
}

pub fn zero_density(specs: &[GroupSpec]) -> CliResult<Output> {
    let g = build_all(specs)?;
    let (_, t) = character_table_of(&g)?;
    if !verify_orthogonality(&t) {
        return Err(CliError::Failure("orthogonality relations fail".into()));
    }
    let z = zero_census(&t);
    let mut doc = json!({
        "group": label_all(specs),
        "order": t.group_order,
        "classes": t.class_sizes.len(),
        "zeros": z.zero_entries,
        "entries": z.total_entries,
        "ratio": rational_value(&z.ratio),
        "orthogonality": true,
        "formula": Value::Null,
        "match": Value::Null,
    });
    if let [GroupSpec::Gl(n, q)] = specs {
        if let Ok(f) = gln_zero_ratio_formula(*n, *q) {
            doc["match"] = (f == z.ratio).into();
            doc["formula"] = rational_value(&f);
        }
        if let Ok(b) = gl_bound_input(*n, *q) {
            let lb = lower_bound_general(&b)?;
            doc["lower_bound"] = rational_value(&lb.raw);
            doc["lower_bound_clamped"] = rational_value(&lb.clamped);
        }
    }
    Ok(Output::fields(doc))
}

pub fn lie_fourier(n: usize, q: u64, full: bool) -> CliResult<Output> {
    let f = field(q)?;
    let o = adjoint_orbits(n, f)?;
    let t = fourier_table(&o);
    if !verify_double_transform(&o, &t) {
        return Err(CliError::Failure(
            "double Fourier transform is not q^{n²}·negation".into(),
        ));
    }
    if !check_representative_independence(&o, &t, 5) {
        return Err(CliError::Failure(
            "Fourier value depends on the representative".into(),
        ));
    }
    let z = fourier_zero_census(&t);
    let ab = additive_lower_bound(&o)?;
    let cross = cross_cartan_nonzero(&o, &t);
    let mut doc = json!({
        "n": n,
        "q": q,
        "elements": o.total,
        "orbits": o.orbits.len(),
        "semisimple_orbits": o.semisimple_count(),
        "regular_semisimple_orbits": o.regular_semisimple_count(),
        "zeros": z.zero_entries,
        "entries": z.total_entries,
        "ratio": rational_value(&z.ratio),
        "double_transform": true,
        "cross_cartan_vanishing": cross.is_empty(),
        "orbit_count_identity": orbit_count_identity(&o),
        "additive_bound": rational_value(&ab.exact),
        "additive_bound_crude": rational_value(&ab.crude),
        "cartan_classes": ab.regular_counts.iter().map(|(p, g)| json!({
            "partition": p,
            "regular_elements": g,
            "orbits": o.orbits.iter().filter(|x| x.cartan_partition.as_ref() == Some(p)).count(),
        })).collect::<Vec<_>>(),
    });
    let rows = o
        .orbits
        .iter()
        .enumerate()
        .map(|(i, x)| {
            vec![
                i.to_string(),
                format!("{:?}", x.rep_matrix),
                x.size.to_string(),
                x.is_semisimple.to_string(),
                x.is_regular_semisimple.to_string(),
                x.cartan_partition
                    .as_deref()
                    .map(partition_label)
                    .unwrap_or_default(),
                partition_label(&x.nilpotent_type),
                z.per_character_zero_counts[i].to_string(),
            ]
        })
        .collect();
    if full {
        doc["orbit_list"] = o
            .orbits
            .iter()
            .map(|x| {
                json!({
                    "representative": x.rep_matrix,
                    "size": x.size,
                    "semisimple": x.is_semisimple,
                    "regular_semisimple": x.is_regular_semisimple,
                    "cartan_partition": x.cartan_partition,
                    "semisimple_part": x.semisimple_class,
                    "nilpotent_type": x.nilpotent_type,
                })
            })
            .collect();
        doc["table"] = t
            .values
            .iter()
            .map(|r| {
                r.iter()
                    .map(vanish_core::export::cyc_value)
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(Output::new(
        doc,
        &[
            "orbit",
            "representative",
            "size",
            "semisimple",
            "regular_semisimple",
            "cartan",
            "nilpotent_type",
            "zero_values",
        ],
        rows,
    ))
}

pub fn kl(n: usize, q: u64) -> CliResult<Output> {
    let f = field(q)?;
    let p = f.characteristic();
    if (n as u64).is_multiple_of(p) {
        return Err(CliError::Usage(format!(
            "--q: characteristic {p} not very good for gl_{n} (requires p not dividing n)"
        )));
    }
    let o = adjoint_orbits(n, f)?;
    let t = fourier_table(&o);
    let r = kl_verify(&o, &t)?;
    let doc = json!({
        "n": n,
        "q": q,
        "pairs_checked": r.pairs_checked,
        "violations": r.violations,
        "pass": r.pass(),
    });
    if !r.pass() {
        return Err(CliError::Failure(format!(
            "identity fails on {} pairs: {doc}",
            r.violations.len()
        )));
    }
    Ok(Output::fields(doc))
}

pub fn bounds_lower(n: usize, q: u64) -> CliResult<Output> {
    check_q(q)?;
    let b = gl_bound_input(n, q)?;
    let lb = lower_bound_general(&b)?;
    Ok(Output::fields(json!({
        "n": n,
        "q": q,
        "n_rss": b.n_rss.to_string(),
        "n_rss_dual": b.n_rss_dual.to_string(),
        "n_classes": b.n_classes.to_string(),
        "sum_inv_c_sq": rational_value(&b.sum_inv_c_sq),
        "raw": rational_value(&lb.raw),
        "clamped": rational_value(&lb.clamped),
        "vacuous": lb.is_vacuous(),
    })))
}

pub fn bounds_polys(rank: usize, at: Option<i64>) -> CliResult<Output> {
    let (f1, f2) = simple_bound_polys(rank)?;
    let one = RatFunc::from_poly(vanish_core::exact_num::IntPoly::one());
    let quotient = RatFunc::new(f1.clone(), f2.clone())?;
    let gap = one.sub(&quotient);
    let mut doc = json!({
        "rank": rank,
        "f1": f1.to_string(),
        "f2": f2.to_string(),
        "degree": 2 * rank,
        "monic": f1.is_monic() && f2.is_monic(),
        "gap_limit": rat(&gap.limit_at_infinity()),
    });
    if let Some(x) = at {
        doc["x"] = x.into();
        doc["f1_at_x"] = Value::String(f1.eval_i64(x).to_string());
        doc["f2_at_x"] = Value::String(f2.eval_i64(x).to_string());
    }
    Ok(Output::fields(doc))
}

pub fn bounds_threshold(
    r0: usize,
    epsilon: &str,
    inequality: &str,
    mode: &str,
    growth: &str,
) -> CliResult<Output> {
    let eps = parse_rational(epsilon)
        .ok_or_else(|| CliError::Usage(format!("--epsilon: not a rational: {epsilon}")))?;
    let which = match inequality {
        "first" => Inequality::First,
        "second" => Inequality::Second,
        "both" => Inequality::Both,
        o => {
            return Err(CliError::Usage(format!(
                "--inequality: expected first, second or both, got {o}"
            )))
        }
    };
    let mode = match mode {
        "fixed" => SearchMode::FixedRank,
        "growing" => SearchMode::GrowingRank,
        o => {
            return Err(CliError::Usage(format!(
                "--mode: expected fixed or growing, got {o}"
            )))
        }
    };
    let growth = Growth::from_str(growth).map_err(|e| CliError::Usage(format!("--growth: {e}")))?;
    let cfg = BoundConfig {
        growth,
        epsilon: eps,
        r0,
        which,
    };
    let t = threshold_search(&cfg, mode)?;
    Ok(Output::fields(json!({
        "mode": if mode == SearchMode::FixedRank { "fixed" } else { "growing" },
        "epsilon": rational_string(&cfg.epsilon),
        "r0": r0,
        "inequality": inequality,
        "threshold": t.value,
        "fails_below": t.fails_below,
        "window_start": t.window.0,
        "window_end": t.window.1,
    })))
}

pub fn bounds_gl_check(n: usize, q: u64) -> CliResult<Output> {
    let g = special_linear(n, field(q)?)?;
    let c = guralnick_lubeck_check(&g)?;
    Ok(Output::fields(json!({
        "group": format!("SL{n}(F{q})"),
        "order": c.order,
        "rss_elements": c.rss_elements,
        "lhs": rational_value(&c.lhs),
        "rhs": rational_value(&c.rhs),
        "pass": c.pass,
        "classes": c.class_count,
        "class_bound": c.class_bound.to_string(),
        "class_pass": c.class_pass,
    })))
}

pub fn trend(
    max_n: usize,
    q: Option<u64>,
    q_scale: Option<u64>,
    brute_cap: u128,
) -> CliResult<Output> {
    let q_rule = match (q, q_scale) {
        (Some(q), None) => {
            check_q(q)?;
            QRule::Fixed(q)
        }
        (None, Some(k)) => QRule::Scaled(k),
        (None, None) => QRule::Fixed(3),
        _ => return Err(CliError::Usage("--q and --q-scale are exclusive".into())),
    };
    if max_n == 0 || max_n > DEFAULT_RANK_CAP + 1 {
        return Err(CliError::Usage(format!(
            "--max-n: must lie in 1..={}",
            DEFAULT_RANK_CAP + 1
        )));
    }
    let rows = trend_report(&TrendConfig {
        max_n,
        q_rule,
        brute_order_cap: brute_cap,
    })?;
    let docs: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "q": r.q,
                "sum_inv_c_sq": rational_value(&r.sum_inv_c_sq),
                "weyl_limit": rational_value(&r.weyl_limit),
                "below_bbw": r.below_bbw,
                "formula": opt_rat(&r.formula),
                "formula_limit": opt_rat(&r.formula_limit),
                "brute": opt_rat(&r.brute),
            })
        })
        .collect();
    let header = [
        "n",
        "q",
        "sum_inv_c_sq",
        "weyl_limit",
        "below_bbw",
        "formula",
        "formula_limit",
        "brute",
    ];
    let table = docs
        .iter()
        .map(|d| header.iter().map(|h| cell(&d[*h])).collect())
        .collect();
    Ok(Output::new(json!({ "rows": docs }), &header, table))
}
