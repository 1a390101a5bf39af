//! JSON encodings: rationals as `"p/q"`, Laurent polynomials as exponent maps,
//! rational functions as `{"numer": .., "denom": ..}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LaurentPoly, RatFunc, ScalarError};

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn to_map(p: &LaurentPoly) -> BTreeMap<String, String> {
    p.terms()
        .map(|(e, c)| (e.to_string(), rational_string(c)))
        .collect()
}

fn from_map(map: &BTreeMap<String, String>) -> Result<LaurentPoly, ScalarError> {
    let mut terms = Vec::with_capacity(map.len());
    for (e, c) in map {
        let e: i32 = e
            .parse()
            .map_err(|_| ScalarError::Parse(format!("bad exponent {e:?}")))?;
        terms.push((e, parse_rational(c)?));
    }
    Ok(LaurentPoly::from_terms(terms))
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        to_map(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(deserializer)?;
        from_map(&map).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    // field order gives sorted keys
    denom: LaurentPoly,
    numer: LaurentPoly,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatFuncRepr {
            denom: self.denom(),
            numer: self.numer().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RatFuncRepr::deserialize(deserializer)?;
        RatFunc::from_parts(repr.numer, repr.denom).map_err(D::Error::custom)
    }
}
