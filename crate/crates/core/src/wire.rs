//! JSON helpers for arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer that serializes as a JSON number when it fits in `i64`, else as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireInt(pub BigInt);

impl Serialize for WireInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for WireInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = WireInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<WireInt, E> {
                Ok(WireInt(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WireInt, E> {
                Ok(WireInt(v.into()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<WireInt, E> {
                Err(E::custom(format!("expected an integer, found {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<WireInt, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(WireInt)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<BigInt> for WireInt {
    fn from(v: BigInt) -> Self {
        WireInt(v)
    }
}

/// Serializes a matrix (as rows) of big integers.
pub fn matrix_rows(m: &crate::fgab::IntMatrix) -> Vec<Vec<WireInt>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(WireInt).collect())
        .collect()
}
