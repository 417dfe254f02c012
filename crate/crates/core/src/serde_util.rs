//! Big integers as JSON numbers when they fit in a `u64`, decimal strings otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Small(u64),
    Big(String),
}

impl From<&BigUint> for Repr {
    fn from(n: &BigUint) -> Self {
        match n.to_u64() {
            Some(v) => Repr::Small(v),
            None => Repr::Big(n.to_string()),
        }
    }
}

impl Repr {
    fn into_biguint<E: serde::de::Error>(self) -> Result<BigUint, E> {
        match self {
            Repr::Small(v) => Ok(BigUint::from(v)),
            Repr::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        Repr::from(n).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        Repr::deserialize(d)?.into_biguint()
    }
}

pub mod biguint_seq {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Repr::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(Repr::into_biguint)
            .collect()
    }
}
