//! JSON rendering of probabilities as fixed-point numbers.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Decimal places for probabilities in JSON output.
pub const JSON_DECIMALS: usize = 9;

/// A probability rendered with exactly [`JSON_DECIMALS`] places.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prob(pub f64);

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        prob(&self.0, s)
    }
}

pub fn fixed(x: f64) -> String {
    let x = if x.abs() < 0.5e-9 { 0.0 } else { x };
    format!("{x:.JSON_DECIMALS$}")
}

pub fn prob<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let raw = RawValue::from_string(fixed(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

pub fn prob_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => prob(x, s),
        None => s.serialize_none(),
    }
}

pub fn prob_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &Prob(*v))?;
    }
    map.end()
}

pub fn prob_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Prob(*x))?;
    }
    seq.end()
}
