//! JSON wire formats. Every arbitrary-precision integer travels as a decimal
//! string; plain JSON integers are also accepted on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::endomorphism::{EndoError, EndoGenerators, Endomorphism};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::{IntMatrix, IntVector};

/// Current `schema_version` of every top-level document.
pub const SCHEMA_VERSION: u32 = 1;

/// An integer parsed from a decimal string (or JSON number).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal(pub BigInt);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct DecimalVisitor;

impl<'de> Visitor<'de> for DecimalVisitor {
    type Value = Decimal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer as a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Decimal, E> {
        let t = v.strip_prefix('+').unwrap_or(v);
        if t.is_empty() || !t.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
            return Err(E::custom(format!("invalid decimal integer {v:?}")));
        }
        BigInt::from_str(t).map(Decimal).map_err(|_| E::custom(format!("invalid decimal integer {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Decimal, E> {
        Ok(Decimal(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Decimal, E> {
        Ok(Decimal(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Decimal, D::Error> {
        d.deserialize_any(DecimalVisitor)
    }
}

/// `#[serde(with = "decimal")]` for `BigInt` fields.
pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Decimal::deserialize(d).map(|x| x.0)
    }
}

/// `#[serde(with = "decimal_opt")]` for `Option<BigInt>` fields.
pub mod decimal_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Decimal>::deserialize(d).map(|x| x.map(|x| x.0))
    }
}

/// `#[serde(with = "decimal_vec")]` for `Vec<BigInt>` fields.
pub mod decimal_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Decimal>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(deserialize_with = "required")]` makes an `Option` field
/// mandatory (it may still be `null`).
pub fn required<'de, D: Deserializer<'de>, T: Deserialize<'de>>(d: D) -> Result<T, D::Error> {
    T::deserialize(d)
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        decimal_vec::serialize(self.entries(), s)
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IntVector, D::Error> {
        let v = decimal_vec::deserialize(d)?;
        if v.is_empty() {
            return Err(de::Error::custom("vector must have at least one entry"));
        }
        Ok(IntVector::new(v))
    }
}

/// Arrays of arrays of decimal strings, row by row.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.row_vectors().into_iter().map(|r| r.into_iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<Decimal>>::deserialize(d)?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        IntMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementWire {
    v: IntVector,
    #[serde(with = "decimal")]
    z: BigInt,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementWire { v: self.v.clone(), z: self.z.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<GroupElement, D::Error> {
        let w = ElementWire::deserialize(d)?;
        Ok(GroupElement::new(w.v, w.z))
    }
}

/// Endomorphism input: the group matrix and the images of `e_1, …, e_n, t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoDoc {
    pub schema_version: u32,
    pub matrix: IntMatrix,
    pub x: Vec<GroupElement>,
    pub t: GroupElement,
}

impl EndoDoc {
    pub fn new(f: &Endomorphism) -> Self {
        let gens = f.generators().clone();
        EndoDoc { schema_version: SCHEMA_VERSION, matrix: f.descriptor().matrix().clone(), x: gens.x, t: gens.t }
    }

    /// Builds the descriptor and checks the defining relations.
    pub fn into_endomorphism(self) -> Result<Endomorphism, EndoError> {
        let g = GroupDescriptor::new(self.matrix)?;
        Endomorphism::validate(&g, EndoGenerators { x: self.x, t: self.t })
    }
}

/// Renders any serializable value as pretty JSON with object keys sorted, so
/// equal values always produce byte-identical output.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize infallibly");
    // serde_json's default map is ordered by key
    serde_json::to_string_pretty(&v).expect("JSON values serialize infallibly")
}
