//! JSON forms of field elements and curves. Coordinates are written as
//! exact integers in the basis 1, omega.

use crate::num::Scalar;
use crate::quadfield::Frac;
use crate::{CurveOverK, Elem, FieldElem, QuadField};
use num_bigint::BigInt;
use serde::ser::{SerializeStruct, SerializeTuple};
use serde::{Serialize, Serializer};
use serde_json::{Number, Value};
use std::str::FromStr;
use thiserror::Error;

fn exact<T: Scalar>(v: &T) -> Number {
    Number::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

impl<T: Scalar> Serialize for FieldElem<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&exact(&self.x))?;
        t.serialize_element(&exact(&self.y))?;
        t.end()
    }
}

impl<T: Scalar> Serialize for Frac<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Frac", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &exact(&self.den))?;
        st.end()
    }
}

impl<T: Scalar> Serialize for CurveOverK<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Curve", 2)?;
        st.serialize_field("d", &self.field().d())?;
        st.serialize_field("a", self.a())?;
        st.end()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("expected an integer or an [x, y] pair, got {0}")]
    BadElement(String),
    #[error("expected 5 coefficients, got {0}")]
    WrongLength(usize),
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn int_of(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        Value::String(s) => BigInt::from_str(s.trim()).ok(),
        _ => None,
    }
}

/// An element written as an integer or as [x, y] meaning x + y omega.
pub fn parse_elem(k: &QuadField, v: &Value) -> Result<Elem, ParseError> {
    let bad = || ParseError::BadElement(v.to_string());
    match v {
        Value::Array(xs) if xs.len() == 2 => {
            let x = int_of(&xs[0]).ok_or_else(bad)?;
            let y = int_of(&xs[1]).ok_or_else(bad)?;
            Ok(k.elem(x, y))
        }
        _ => int_of(v).map(|x| k.int(x)).ok_or_else(bad),
    }
}

/// Weierstrass coefficients [a1, a2, a3, a4, a6] from JSON text.
pub fn parse_coeffs(k: &QuadField, text: &str) -> Result<[Elem; 5], ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let xs = match &v {
        Value::Array(xs) => xs,
        _ => return Err(ParseError::BadElement(v.to_string())),
    };
    if xs.len() != 5 {
        return Err(ParseError::WrongLength(xs.len()));
    }
    let es: Vec<Elem> = xs.iter().map(|x| parse_elem(k, x)).collect::<Result<_, _>>()?;
    Ok(es.try_into().unwrap())
}
