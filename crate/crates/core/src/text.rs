//! Text and JSON encodings.
//!
//! Coefficient lists are ascending: `"1,0,1"` or `"[1,0,1]"` is `1 + x^2`.
//! In JSON, field elements are strings so rationals stay exact; counts are
//! plain integers.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::DenseMatrix;
use crate::poly::Polynomial;

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tag = String::deserialize(d)?;
        tag.parse().map_err(de::Error::custom)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs().len()))?;
        for c in self.coeffs() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

/// A coefficient as it appears in a JSON document: a string (`"-1/2"`) or
/// a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawCoeff {
    Int(i64),
    Text(String),
}

impl RawCoeff {
    pub fn to_scalar(&self, field: FieldSpec) -> Result<Scalar> {
        match self {
            RawCoeff::Int(v) => Ok(field.from_i64(*v)),
            RawCoeff::Text(s) => Scalar::parse(field, s),
        }
    }
}

/// Parses one coefficient list, with or without surrounding brackets.
pub fn parse_coeffs(field: FieldSpec, text: &str) -> Result<Vec<Scalar>> {
    let t = text.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|c| {
            let c = c.trim().trim_matches('"');
            Scalar::parse(field, c)
        })
        .collect()
}

pub fn parse_poly(field: FieldSpec, text: &str) -> Result<Polynomial> {
    Ok(Polynomial::new(field, parse_coeffs(field, text)?))
}

pub fn coeffs_from_raw(field: FieldSpec, raw: &[RawCoeff]) -> Result<Vec<Scalar>> {
    raw.iter().map(|c| c.to_scalar(field)).collect()
}

/// Parses a field tag, naming the offending input on failure.
pub fn parse_field(tag: &str) -> Result<FieldSpec> {
    tag.parse().map_err(|e| match e {
        Error::InvalidModulus(p) => Error::Parse(format!("F{p} is not a prime field below 2^31")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists() {
        let q = FieldSpec::rationals();
        let p = parse_poly(q, "[1, 0, 1]").unwrap();
        assert_eq!(p, Polynomial::from_i64s(q, &[1, 0, 1]));
        assert_eq!(
            parse_poly(q, "1,-1/2").unwrap().coeff(1).to_string(),
            "-1/2"
        );
        assert!(parse_poly(q, "").unwrap().is_zero());
        assert!(parse_poly(q, "1,,2").is_err());
    }

    #[test]
    fn json_shapes() {
        let q = FieldSpec::rationals();
        let p = parse_poly(q, "1/3,0,-2").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/3","0","-2"]"#);
        let m = DenseMatrix::from_i64s(q, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"[["1","2"],["3","4"]]"#
        );
        assert_eq!(
            serde_json::to_string(&FieldSpec::prime(7).unwrap()).unwrap(),
            r#""F7""#
        );
        let raw: Vec<RawCoeff> = serde_json::from_str(r#"[1, "2", "-1/2"]"#).unwrap();
        let f5 = FieldSpec::prime(5).unwrap();
        let c = coeffs_from_raw(f5, &raw).unwrap();
        assert_eq!(c, vec![f5.from_i64(1), f5.from_i64(2), f5.from_i64(2)]);
    }
}
