//! Serde support. Symbols, polynomials and 1-forms serialize as the strings
//! printed by `Display` and parse back with [`super::text`].

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::form::OneForm;
use super::poly::Polynomial;
use super::symbol::ScalarSymbol;
use super::text::{parse_one_form, parse_polynomial};

impl Serialize for ScalarSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScalarSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        ScalarSymbol::parse(&name).ok_or_else(|| D::Error::custom(format!("unknown symbol {name:?}")))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_polynomial(&text).map_err(D::Error::custom)
    }
}

impl Serialize for OneForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OneForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_one_form(&text).map_err(D::Error::custom)
    }
}
