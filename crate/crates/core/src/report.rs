//! Serialization helpers shared by the JSON reports.

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

fn as_number<S: Serializer>(digits: String, s: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = digits.parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

pub fn biguint_as_number<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    as_number(v.to_string(), s)
}

pub fn bigint_as_number<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    as_number(v.to_string(), s)
}
