//! JSON formats for lattices, sublattices and exact numbers.
//!
//! Integers in Gram and coordinate matrices may be JSON numbers of any size
//! or decimal strings. Values this crate emits in reports (vectors,
//! determinants, glue data) are written as strings so consumers never lose
//! precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::fibration::{FiberSpec, FibrationModel, Poly, WeierstrassModel};
use crate::lattice::Lattice;
use crate::sublattice::Sublattice;

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(ToString::to_string))
}

pub fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn int_from_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

/// Accepts `3`, `"-27/4"`, `"5"` or a JSON number with a decimal point
/// that is an exact integer.
pub fn rational_from_value(v: &Value) -> Result<BigRational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(Error::Parse(format!("expected a rational, found {other}"))),
    };
    parse_rational(&text)
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn matrix_from_value(v: &Value) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(int_from_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(parsed)
}

fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .into_iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|x| {
                            // exact: arbitrary_precision keeps every digit
                            serde_json::from_str::<Value>(&x.to_string()).expect("integer literal")
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

#[derive(Deserialize, Serialize)]
struct LatticeDoc {
    #[serde(default)]
    label: String,
    gram: Value,
}

pub fn lattice_from_json(text: &str) -> Result<Lattice> {
    let doc: LatticeDoc = serde_json::from_str(text)?;
    lattice_from_doc(doc)
}

fn lattice_from_doc(doc: LatticeDoc) -> Result<Lattice> {
    let gram = matrix_from_value(&doc.gram)?;
    if !gram.is_square() {
        return Err(Error::InvalidLattice("Gram matrix must be square".into()));
    }
    Lattice::new(doc.label, gram)
}

pub fn lattice_to_value(l: &Lattice) -> Value {
    serde_json::json!({
        "label": l.label(),
        "gram": matrix_to_value(l.gram()),
    })
}

pub fn lattice_to_json(l: &Lattice) -> String {
    serde_json::to_string_pretty(&lattice_to_value(l)).expect("serializable")
}

#[derive(Deserialize)]
struct SublatticeDoc {
    ambient: LatticeDoc,
    coords: Value,
    #[serde(default)]
    label: String,
}

pub fn sublattice_from_json(text: &str) -> Result<Sublattice> {
    let doc: SublatticeDoc = serde_json::from_str(text)?;
    let ambient = lattice_from_doc(doc.ambient)?;
    let coords = matrix_from_value(&doc.coords)?;
    // rows of the JSON matrix are generators
    Sublattice::new(ambient, coords.transpose(), doc.label)
}

pub fn sublattice_to_json(s: &Sublattice) -> String {
    let v = serde_json::json!({
        "label": s.label(),
        "ambient": lattice_to_value(s.ambient()),
        "coords": matrix_to_value(&s.coords().transpose()),
    });
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn poly_from_value(v: &Value, what: &str) -> Result<Poly> {
    match v {
        Value::Array(cs) => Ok(Poly::new(
            cs.iter().map(rational_from_value).collect::<Result<_>>()?,
        )),
        Value::Number(_) | Value::String(_) => Ok(Poly::constant(rational_from_value(v)?)),
        _ => Err(Error::Parse(format!(
            "{what} must be a rational or a list of coefficients"
        ))),
    }
}

/// `{"a4": [...], "a6": [...]}` or `{"a4_cubed": ..., "a6": [...]}`, with
/// coefficients listed from the constant term up.
pub fn weierstrass_from_value(v: &Value) -> Result<WeierstrassModel> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("Weierstrass model must be an object".into()))?;
    let label = obj.get("label").and_then(Value::as_str).unwrap_or("model");
    let a6 = poly_from_value(
        obj.get("a6")
            .ok_or_else(|| Error::Parse("missing a6".into()))?,
        "a6",
    )?;
    match (obj.get("a4"), obj.get("a4_cubed")) {
        (Some(a4), None) => WeierstrassModel::new(label, poly_from_value(a4, "a4")?, a6),
        (None, Some(c)) => {
            WeierstrassModel::from_a4_cubed(label, poly_from_value(c, "a4_cubed")?, a6)
        }
        _ => Err(Error::Parse("give exactly one of a4 and a4_cubed".into())),
    }
}

#[derive(Deserialize)]
struct FiberDoc {
    place: String,
    #[serde(rename = "type")]
    kodaira: String,
    #[serde(default)]
    identity: String,
    #[serde(default = "one")]
    count: u32,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
struct FibrationDoc {
    #[serde(default)]
    label: String,
    fibers: Vec<FiberDoc>,
    mw_rank: u32,
}

pub fn fibration_from_value(v: &Value) -> Result<FibrationModel> {
    let doc: FibrationDoc = serde_json::from_value(v.clone())?;
    let fibers = doc
        .fibers
        .into_iter()
        .map(|f| {
            Ok(FiberSpec {
                place: f.place,
                kodaira: f.kodaira.parse()?,
                identity: f.identity,
                count: f.count,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FibrationModel {
        label: doc.label,
        fibers,
        mw_rank: doc.mw_rank,
    })
}

/// Either kind of fibration input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibrationInput {
    Weierstrass(WeierstrassModel),
    Fibration(FibrationModel),
}

pub fn fibration_input_from_json(text: &str) -> Result<FibrationInput> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("fibers").is_some() {
        Ok(FibrationInput::Fibration(fibration_from_value(&v)?))
    } else {
        Ok(FibrationInput::Weierstrass(weierstrass_from_value(&v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_lattice_expr;

    #[test]
    fn lattice_round_trip() {
        let l = parse_lattice_expr("U+K7").unwrap();
        let back = lattice_from_json(&lattice_to_json(&l)).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn big_entries_survive() {
        let text = r#"{"label":"big","gram":[[123456789012345678901234567890]]}"#;
        let l = lattice_from_json(text).unwrap();
        assert_eq!(
            l.gram()[(0, 0)].to_string(),
            "123456789012345678901234567890"
        );
        assert!(lattice_to_json(&l).contains("123456789012345678901234567890"));
    }

    #[test]
    fn string_entries_accepted() {
        let l = lattice_from_json(r#"{"gram":[["-4","1"],["1","-2"]]}"#).unwrap();
        assert_eq!(l.det(), BigInt::from(7));
    }

    #[test]
    fn malformed_inputs() {
        assert!(lattice_from_json("").is_err());
        assert!(lattice_from_json(r#"{"gram":[[1,2]]}"#).is_err());
        assert!(lattice_from_json(r#"{"gram":[[0,1],[2,0]]}"#).is_err());
        assert!(lattice_from_json(r#"{"gram":[[1.5]]}"#).is_err());
    }

    #[test]
    fn sublattice_round_trip() {
        let text = r#"{"ambient":{"label":"U","gram":[[0,1],[1,0]]},"coords":[[1,1]]}"#;
        let s = sublattice_from_json(text).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.induced_gram()[(0, 0)], BigInt::from(2));
        let again = sublattice_from_json(&sublattice_to_json(&s)).unwrap();
        assert!(again.same_span(&s));
    }

    #[test]
    fn weierstrass_inputs() {
        let m = fibration_input_from_json(r#"{"a4_cubed": "-27/4", "a6": [-1,0,0,0,0,0,0,1]}"#)
            .unwrap();
        let FibrationInput::Weierstrass(w) = m else {
            panic!("expected a Weierstrass model")
        };
        assert_eq!(w.a6().degree(), Some(7));
        assert!(w.a4().is_none());
        let m = fibration_input_from_json(r#"{"a4": [0,0,0,1], "a6": [0,0,0,0,0,0,0,0,1]}"#);
        assert!(m.is_ok());
        assert!(fibration_input_from_json(r#"{"a4": [1], "a4_cubed": 1, "a6": [1]}"#).is_err());
        let mut a6 = vec!["0"; 13];
        a6.push("1");
        let text = serde_json::json!({"a4": [0], "a6": a6}).to_string();
        assert!(matches!(
            fibration_input_from_json(&text),
            Err(Error::Weierstrass(_))
        ));
    }

    #[test]
    fn fibration_inputs() {
        let text = r#"{"fibers":[
            {"place":"0","type":"I7","identity":"G7"},
            {"place":"t^7-2","type":"I1","count":7},
            {"place":"inf","type":"II*","identity":"T1"}],
            "mw_rank":0}"#;
        let FibrationInput::Fibration(f) = fibration_input_from_json(text).unwrap() else {
            panic!("expected fibration data")
        };
        assert_eq!(f.euler_sum(), 24);
        assert_eq!(f.fibers[1].count, 7);
        assert!(
            fibration_input_from_json(r#"{"fibers":[{"place":"0","type":"I0"}],"mw_rank":0}"#)
                .is_err()
        );
    }

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("-27/4").unwrap(),
            BigRational::new((-27).into(), 4.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
