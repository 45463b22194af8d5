//! Serialization helpers shared by the JSON reports: rationals as `"p/q"`
//! strings, big integers as decimal strings, enclosures as decimal bounds.

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::rational::{self, Rational};
use crate::scalars::{DyadicInterval, RealScalar};

/// Fractional digits used when rendering enclosures.
pub const DECIMAL_DIGITS: usize = 12;

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&rational::format(r))?;
    }
    seq.end()
}

pub fn ser_rational_rows<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = v
        .iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect();
    rows.serialize(s)
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(ToString::to_string).collect();
    strs.serialize(s)
}

pub fn ser_dyadic<S: Serializer>(d: &DyadicInterval, s: S) -> Result<S::Ok, S::Error> {
    let (lo, hi) = d.decimal_bounds(DECIMAL_DIGITS);
    let mut st = s.serialize_struct("Enclosure", 3)?;
    st.serialize_field("lo", &lo)?;
    st.serialize_field("hi", &hi)?;
    st.serialize_field("width", &rational::decimal(&d.width(), DECIMAL_DIGITS + 4, true))?;
    st.end()
}

pub fn ser_opt_dyadic<S: Serializer>(d: &Option<DyadicInterval>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => ser_dyadic(d, s),
        None => s.serialize_none(),
    }
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}

/// A scalar as its display form, a decimal enclosure, and the exact
/// `"p/q"` coefficient of each declared constant.
pub fn ser_scalar<S: Serializer>(x: &RealScalar, s: S) -> Result<S::Ok, S::Error> {
    struct E(DyadicInterval);
    impl Serialize for E {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ser_dyadic(&self.0, s)
        }
    }
    let mut st = s.serialize_struct("Scalar", 3)?;
    st.serialize_field("display", &x.to_string())?;
    let width = Rational::new(1.into(), BigInt::from(10).pow(DECIMAL_DIGITS as u32));
    st.serialize_field("enclosure", &E(x.enclose(&width)))?;
    let coeffs: Vec<(String, String)> = x
        .set()
        .iter()
        .zip(x.coeffs())
        .map(|(c, v)| (c.symbol().to_string(), rational::format(v)))
        .collect();
    st.serialize_field("coefficients", &coeffs)?;
    st.end()
}

pub fn ser_scalars<S: Serializer>(v: &[RealScalar], s: S) -> Result<S::Ok, S::Error> {
    struct W<'a>(&'a RealScalar);
    impl Serialize for W<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ser_scalar(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&W(x))?;
    }
    seq.end()
}
