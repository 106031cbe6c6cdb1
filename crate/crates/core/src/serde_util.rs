//! Serde helpers: rationals as `[numerator, denominator]` integer pairs.
//! Integers beyond 64 bits fall back to decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn to_repr(x: &BigInt) -> IntRepr {
    match x.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Big(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(v.into()),
        IntRepr::Big(s) => s.parse().map_err(E::custom),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_repr(IntRepr::deserialize(d)?)
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        (to_repr(x.numer()), to_repr(x.denom())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let (n, m) = <(IntRepr, IntRepr)>::deserialize(d)?;
        let (n, m) = (from_repr::<D::Error>(n)?, from_repr::<D::Error>(m)?);
        if m == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, m))
    }
}

pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|r| (to_repr(r.numer()), to_repr(r.denom()))).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let v = Option::<(IntRepr, IntRepr)>::deserialize(d)?;
        v.map(|(n, m)| Ok(BigRational::new(from_repr(n)?, from_repr(m)?))).transpose()
    }
}
