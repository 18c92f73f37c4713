//! Exact JSON forms: rationals as "num/den" strings, cyclotomic integers as
//! coefficient objects, and character tables that parse back losslessly.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::char_table::{CharacterTable, ModularTable, ZeroReport};
use crate::error::{Error, Result};
use crate::exact_num::{parse_rational, rational_string, CycInt};

fn bad(what: &str) -> Error {
    Error::InvalidArgument(format!("malformed JSON: {what}"))
}

pub fn rational_value(r: &BigRational) -> Value {
    Value::String(rational_string(r))
}

pub fn rational_from_value(v: &Value) -> Result<BigRational> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| bad("rational"))
}

pub fn cyc_value(c: &CycInt) -> Value {
    let coeffs = c.coeffs();
    let end = coeffs.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    json!({
        "conductor": c.conductor(),
        "coeffs": &coeffs[..end],
        "is_zero": c.is_zero(),
    })
}

pub fn cyc_from_value(v: &Value) -> Result<CycInt> {
    let m = v["conductor"].as_u64().ok_or_else(|| bad("conductor"))?;
    let coeffs: Vec<i64> = v["coeffs"]
        .as_array()
        .ok_or_else(|| bad("coeffs"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| bad("coefficient")))
        .collect::<Result<_>>()?;
    CycInt::from_coeffs(m, &coeffs)
}

fn u64_list(v: &Value, what: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| bad(what))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| bad(what)))
        .collect()
}

pub fn character_table_value(t: &CharacterTable) -> Value {
    let values: Vec<Vec<Value>> = t
        .values
        .iter()
        .map(|row| row.iter().map(cyc_value).collect())
        .collect();
    let modular = t
        .modular
        .as_ref()
        .map(|m| json!({ "prime": m.prime, "root": m.root, "values": m.values }));
    json!({
        "conductor": t.conductor,
        "group_order": t.group_order,
        "class_sizes": t.class_sizes,
        "degrees": t.degrees,
        "values": values,
        "modular": modular,
    })
}

pub fn character_table_from_value(v: &Value) -> Result<CharacterTable> {
    let values = v["values"]
        .as_array()
        .ok_or_else(|| bad("values"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("row"))?
                .iter()
                .map(cyc_from_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let modular = match &v["modular"] {
        Value::Null => None,
        m => Some(ModularTable {
            prime: m["prime"].as_u64().ok_or_else(|| bad("prime"))?,
            root: m["root"].as_u64().ok_or_else(|| bad("root"))?,
            values: m["values"]
                .as_array()
                .ok_or_else(|| bad("modular values"))?
                .iter()
                .map(|r| u64_list(r, "modular row"))
                .collect::<Result<_>>()?,
        }),
    };
    Ok(CharacterTable {
        conductor: v["conductor"].as_u64().ok_or_else(|| bad("conductor"))?,
        degrees: u64_list(&v["degrees"], "degrees")?,
        values,
        class_sizes: u64_list(&v["class_sizes"], "class_sizes")?,
        group_order: v["group_order"]
            .as_u64()
            .ok_or_else(|| bad("group_order"))?,
        modular,
    })
}

pub fn zero_report_value(z: &ZeroReport) -> Value {
    let mut m = Map::new();
    m.insert("zeros".into(), z.zero_entries.into());
    m.insert("entries".into(), z.total_entries.into());
    m.insert("ratio".into(), rational_value(&z.ratio));
    m.insert("nonzero_ratio".into(), rational_value(&z.nonzero_ratio()));
    m.insert("per_row_zeros".into(), json!(z.per_character_zero_counts));
    Value::Object(m)
}

/// True when no JSON number in `v` is a float.
pub fn is_float_free(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(is_float_free),
        Value::Object(o) => o.values().all(is_float_free),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_num::rational;

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rational_value(&rational(1, 2)), json!("1/2"));
        assert_eq!(
            rational_from_value(&json!("-3/4")).unwrap(),
            rational(-3, 4)
        );
    }

    #[test]
    fn cyc_zero_is_explicit() {
        let z = CycInt::zero(5).unwrap();
        assert_eq!(
            cyc_value(&z),
            json!({"conductor": 5, "coeffs": [], "is_zero": true})
        );
        let w = CycInt::root_of_unity(5, 2).unwrap();
        assert_eq!(cyc_from_value(&cyc_value(&w)).unwrap(), w);
    }
}
