//! Serde adapters writing big integers as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

use crate::intpoly::IntPoly;

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let text = String::deserialize(d)?;
    BigInt::from_str(&text).map_err(D::Error::custom)
}

/// Polynomial as a list of decimal strings, leading coefficient first.
pub mod poly {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(f: &IntPoly, s: S) -> Result<S::Ok, S::Error> {
        let desc = f.descending();
        let mut seq = s.serialize_seq(Some(desc.len()))?;
        for c in desc {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntPoly, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        let coeffs = items
            .iter()
            .map(|t| BigInt::from_str(t).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::from_descending_big(&coeffs))
    }
}

/// A list of polynomials, each as in [`poly`].
pub mod poly_list {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(fs: &[IntPoly], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            fs.iter().map(|f| f.descending().iter().map(|c| c.to_string()).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<IntPoly>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|items| {
                let coeffs = items
                    .iter()
                    .map(|t| BigInt::from_str(t).map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(IntPoly::from_descending_big(&coeffs))
            })
            .collect()
    }
}
