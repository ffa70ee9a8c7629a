//! Field input: a JSON field file or a real quadratic discriminant.
//!
//! ```json
//! {
//!   "min_poly": [1, -2, -1, 1],
//!   "integral_basis": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
//!   "fundamental_units": [["0", "1", "0"], ["1", "-1", "0"]]
//! }
//! ```
//!
//! `min_poly` lists coefficients from the constant term up (integers, as
//! JSON numbers or decimal strings). Basis rows are power-basis coordinates
//! and units are coordinates over the integral basis, both as `"p/q"`
//! strings. Both are optional; without units only quadratic fields work.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use perfect_unary_core::{FieldElement, LogUnitLattice, NumberField, Q};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use crate::config::{check_squarefree, FieldSource};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLit(pub BigInt);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatLit(pub Q);

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = IntLit;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string of decimal digits")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntLit, E> {
        Ok(IntLit(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntLit, E> {
        Ok(IntLit(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<IntLit, E> {
        v.trim().parse().map(IntLit).map_err(|_| E::custom(format!("`{v}` is not an integer")))
    }
}

impl<'de> Deserialize<'de> for IntLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = RatLit;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational \"p/q\" or an integer")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatLit, E> {
        Ok(RatLit(Q::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatLit, E> {
        Ok(RatLit(Q::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<RatLit, E> {
        parse_rational(v).map(RatLit).ok_or_else(|| E::custom(format!("`{v}` is not a rational p/q")))
    }
}

impl<'de> Deserialize<'de> for RatLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// `"p"` or `"p/q"` with `q ≠ 0`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (q != BigInt::from(0)).then(|| Q::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub min_poly: Vec<IntLit>,
    #[serde(default)]
    pub integral_basis: Option<Vec<Vec<RatLit>>>,
    #[serde(default)]
    pub fundamental_units: Option<Vec<Vec<RatLit>>>,
}

impl FieldFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("field file: {e}")))
    }
}

/// A validated field and its unit lattice.
#[derive(Clone, Debug)]
pub struct LoadedField {
    pub label: String,
    pub quadratic_d: Option<i64>,
    pub field: NumberField,
    pub lattice: LogUnitLattice,
}

fn input(context: &str, e: perfect_unary_core::Error) -> CliError {
    CliError::Input(format!("{context}: {e}"))
}

pub fn build(file: &FieldFile, label: String, precision: u32) -> Result<LoadedField, CliError> {
    let poly: Vec<BigInt> = file.min_poly.iter().map(|c| c.0.clone()).collect();
    let basis =
        file.integral_basis.as_ref().map(|rows| rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect());
    let field = NumberField::with_precision(&poly, basis, precision).map_err(|e| input("field", e))?;
    let units = file
        .fundamental_units
        .as_ref()
        .map(|us| us.iter().map(|u| FieldElement::new(u.iter().map(|x| x.0.clone()).collect())).collect());
    let lattice = LogUnitLattice::new(&field, units).map_err(|e| input("fundamental units", e))?;
    Ok(LoadedField { label, quadratic_d: None, field, lattice })
}

pub fn quadratic(d: i64, precision: u32) -> Result<LoadedField, CliError> {
    check_squarefree(d)?;
    let field = NumberField::real_quadratic(d).map_err(|e| input("field", e))?.at_precision(precision);
    let lattice = LogUnitLattice::new(&field, None)?;
    Ok(LoadedField { label: format!("Q(sqrt({d}))"), quadratic_d: Some(d), field, lattice })
}

pub fn load_file(path: &Path, precision: u32) -> Result<LoadedField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read field file {}: {e}", path.display())))?;
    let file = FieldFile::parse(&text)?;
    build(&file, path.display().to_string(), precision)
}

pub fn load(source: &FieldSource, precision: u32) -> Result<LoadedField, CliError> {
    match source {
        FieldSource::File(p) => load_file(p, precision),
        FieldSource::Quadratic(d) => quadratic(*d, precision),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6"), Some(Q::new(1.into(), 2.into())));
        assert_eq!(parse_rational("-7"), Some(Q::from_integer((-7).into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn cubic_file() {
        let f =
            FieldFile::parse(r#"{"min_poly": [1, "-2", -1, 1], "fundamental_units": [["0","1","0"],["1","-1","0"]]}"#)
                .unwrap();
        let k = build(&f, "c".into(), 128).unwrap();
        assert_eq!(k.field.discriminant(), &BigInt::from(49));
        assert!((k.lattice.regulator() - 0.525454).abs() < 1e-5);
    }

    #[test]
    fn errors_carry_positions() {
        let err = FieldFile::parse("{\n  \"min_poly\": [1, 0, 1],\n  \"integral_basis\": [[\"1/x\"]]\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(FieldFile::parse("{\"min_poly\": [1, 1], \"extra\": 1}").is_err());
    }

    #[test]
    fn invalid_fields_are_input_errors() {
        let f = FieldFile::parse(r#"{"min_poly": [1, 0, 1]}"#).unwrap();
        assert!(matches!(build(&f, "i".into(), 128), Err(CliError::Input(_))));
        let f = FieldFile::parse(r#"{"min_poly": [1, -3, 0, 1]}"#).unwrap();
        assert!(matches!(build(&f, "no units".into(), 128), Err(CliError::Input(_))));
        assert!(matches!(quadratic(8, 128), Err(CliError::Input(_))));
    }
}
