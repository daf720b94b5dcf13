//! Serde helpers writing rationals as `"p/q"` strings.

use serde::ser::{SerializeSeq, Serializer};

use crate::exact::Rational;

pub fn rational<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_string())
}

pub fn rationals<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(values.iter().map(|v| v.to_string()))
}

pub fn rational_rows<S: Serializer>(rows: &[Vec<Rational>], ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub fn rational_pairs<S: Serializer>(pairs: &[(Rational, Rational)], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(pairs.iter().map(|(lo, hi)| [lo.to_string(), hi.to_string()]))
}
