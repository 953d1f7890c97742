//! Field spec files.
//!
//! ```json
//! { "type": "polynomial",
//!   "components": [ [ {"coeff": 1.0, "powers": [2, 0, 0]} ],
//!                   [],
//!                   [ {"coeff": -3.0, "powers": [0, 1, 1]} ] ] }
//! ```
//!
//! Unknown keys are rejected. Violations carry a JSON pointer to the
//! offending location.

use serde_json::{Map, Value};

use super::{Monomial, PolyField, Polynomial};
use crate::error::FieldSpecError;

pub const POLYNOMIAL_TYPE: &str = "polynomial";

/// Parses a field spec document.
pub fn parse_field_spec(text: &str) -> Result<PolyField, FieldSpecError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        FieldSpecError::new("", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column()))
    })?;
    field_from_value(&value)
}

pub fn field_from_value(value: &Value) -> Result<PolyField, FieldSpecError> {
    let root = expect_object(value, "")?;
    reject_unknown_keys(root, "", &["type", "components"])?;

    let ty = root
        .get("type")
        .ok_or_else(|| FieldSpecError::new("", "missing key \"type\""))?;
    match ty.as_str() {
        Some(POLYNOMIAL_TYPE) => {}
        Some(other) => {
            return Err(FieldSpecError::new(
                "/type",
                format!("unsupported field type {other:?}, expected \"polynomial\""),
            ))
        }
        None => return Err(FieldSpecError::new("/type", "expected a string")),
    }

    let components = root
        .get("components")
        .ok_or_else(|| FieldSpecError::new("", "missing key \"components\""))?;
    let components = components
        .as_array()
        .ok_or_else(|| FieldSpecError::new("/components", "expected an array"))?;
    if components.len() != 3 {
        return Err(FieldSpecError::new(
            "/components",
            format!("expected 3 components, found {}", components.len()),
        ));
    }

    let mut polys: [Polynomial; 3] = Default::default();
    for (k, component) in components.iter().enumerate() {
        let pointer = format!("/components/{k}");
        let terms = component
            .as_array()
            .ok_or_else(|| FieldSpecError::new(&pointer, "expected an array of monomials"))?;
        let monomials = terms
            .iter()
            .enumerate()
            .map(|(t, term)| monomial_from_value(term, &format!("{pointer}/{t}")))
            .collect::<Result<Vec<_>, _>>()?;
        polys[k] = Polynomial::new(monomials);
    }
    Ok(PolyField::new(polys))
}

fn monomial_from_value(value: &Value, pointer: &str) -> Result<Monomial, FieldSpecError> {
    let obj = expect_object(value, pointer)?;
    reject_unknown_keys(obj, pointer, &["coeff", "powers"])?;

    let coeff = obj
        .get("coeff")
        .ok_or_else(|| FieldSpecError::new(pointer, "missing key \"coeff\""))?
        .as_f64()
        .ok_or_else(|| FieldSpecError::new(format!("{pointer}/coeff"), "expected a number"))?;

    let powers_pointer = format!("{pointer}/powers");
    let powers = obj
        .get("powers")
        .ok_or_else(|| FieldSpecError::new(pointer, "missing key \"powers\""))?
        .as_array()
        .ok_or_else(|| FieldSpecError::new(&powers_pointer, "expected an array of 3 exponents"))?;
    if powers.len() != 3 {
        return Err(FieldSpecError::new(
            &powers_pointer,
            format!("expected 3 exponents, found {}", powers.len()),
        ));
    }
    let mut exps = [0u32; 3];
    for (axis, p) in powers.iter().enumerate() {
        exps[axis] = p
            .as_u64()
            .and_then(|p| u32::try_from(p).ok())
            .ok_or_else(|| {
                FieldSpecError::new(
                    format!("{powers_pointer}/{axis}"),
                    format!("exponent must be a non-negative integer, got {p}"),
                )
            })?;
    }
    Ok(Monomial::new(coeff, exps))
}

fn expect_object<'a>(value: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>, FieldSpecError> {
    value
        .as_object()
        .ok_or_else(|| FieldSpecError::new(pointer, "expected an object"))
}

fn reject_unknown_keys(
    obj: &Map<String, Value>,
    pointer: &str,
    allowed: &[&str],
) -> Result<(), FieldSpecError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(FieldSpecError::new(
            format!("{pointer}/{}", escape_pointer_token(key)),
            format!("unknown key {key:?}"),
        )),
        None => Ok(()),
    }
}

fn escape_pointer_token(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Serializes a field back into the spec format.
pub fn field_to_value(field: &PolyField) -> Value {
    let components: Vec<Value> = field
        .components()
        .iter()
        .map(|p| {
            Value::Array(
                p.terms()
                    .iter()
                    .map(|m| serde_json::json!({ "coeff": m.coeff, "powers": m.powers }))
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "type": POLYNOMIAL_TYPE, "components": components })
}
