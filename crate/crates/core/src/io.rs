//! JSON import and export for algebras and Lie algebras.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::magic_square::{LieAlgebra, Sector};
use crate::quadforms::{QuadraticForm, QuadraticFormJson};
use crate::scalars::{Field, FieldDescriptor, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("schema violation at {location}: {reason}")]
    SchemaViolation { location: String, reason: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn violation(location: impl Into<String>, reason: impl ToString) -> IoError {
    IoError::SchemaViolation { location: location.into(), reason: reason.to_string() }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AlgebraJson {
    pub field: FieldDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub mul: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<QuadraticFormJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct LieAlgebraJson {
    pub field: FieldDescriptor,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub sectors: Vec<Sector>,
    /// `[i, j, k, c]` with `i < j`.
    pub bracket: Vec<(usize, usize, usize, String)>,
}

pub fn algebra_to_json(a: &Algebra) -> AlgebraJson {
    let f = &a.field;
    AlgebraJson {
        field: f.descriptor(),
        name: Some(a.name.clone()),
        dim: a.dim(),
        basis: a.labels.clone(),
        mul: a.structure_constants().into_iter().map(|(i, j, k, c)| (i, j, k, f.format(&c))).collect(),
        unit: a.unit.as_ref().map(|u| u.iter().map(|c| f.format(c)).collect()),
        norm: a.norm.as_ref().map(QuadraticForm::to_json),
    }
}

pub fn algebra_to_string(a: &Algebra) -> String {
    serde_json::to_string_pretty(&algebra_to_json(a)).expect("serializable")
}

fn parse_scalar(f: &Field, s: &str, location: String) -> Result<Scalar, IoError> {
    f.parse(s).map_err(|e| violation(location, e))
}

fn check_labels(dim: usize, basis: &[String]) -> Result<(), IoError> {
    if dim == 0 {
        return Err(violation("dim", "must be positive"));
    }
    if basis.len() != dim {
        return Err(violation("basis", format!("expected {dim} labels, got {}", basis.len())));
    }
    Ok(())
}

fn check_index(idx: usize, dim: usize, location: String) -> Result<(), IoError> {
    if idx >= dim {
        return Err(violation(location, format!("index {idx} out of range for dimension {dim}")));
    }
    Ok(())
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<Algebra, IoError> {
    let f = Field::from_descriptor(&j.field).map_err(|e| violation("field", e))?;
    check_labels(j.dim, &j.basis)?;
    let mut entries = Vec::with_capacity(j.mul.len());
    for (n, (i, k, l, s)) in j.mul.iter().enumerate() {
        for (pos, idx) in [*i, *k, *l].into_iter().enumerate() {
            check_index(idx, j.dim, format!("mul[{n}][{pos}]"))?;
        }
        entries.push((*i, *k, *l, parse_scalar(&f, s, format!("mul[{n}][3]"))?));
    }
    let name = j.name.clone().unwrap_or_else(|| "imported".into());
    let mut a = Algebra::new(&f, &name, j.basis.clone(), entries).map_err(|e| violation("mul", e))?;
    if let Some(n) = &j.norm {
        if n.dim != j.dim {
            return Err(violation("norm.dim", format!("expected {}, got {}", j.dim, n.dim)));
        }
        for (m, (i, k, _)) in n.coeffs.iter().enumerate() {
            check_index(*i, j.dim, format!("norm.coeffs[{m}][0]"))?;
            check_index(*k, j.dim, format!("norm.coeffs[{m}][1]"))?;
        }
        let q = QuadraticForm::from_json(&f, n).map_err(|e| violation("norm", e))?;
        a = a.with_norm(q).map_err(|e| violation("norm", e))?;
    }
    if let Some(u) = &j.unit {
        if u.len() != j.dim {
            return Err(violation("unit", format!("expected {} coordinates, got {}", j.dim, u.len())));
        }
        let v = u
            .iter()
            .enumerate()
            .map(|(m, s)| parse_scalar(&f, s, format!("unit[{m}]")))
            .collect::<Result<Vec<_>, _>>()?;
        a = a.with_unit(v).map_err(|e| violation("unit", e))?;
    }
    Ok(a)
}

pub fn algebra_from_str(s: &str) -> Result<Algebra, IoError> {
    let j: AlgebraJson = serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))?;
    algebra_from_json(&j)
}

pub fn lie_to_json(l: &LieAlgebra) -> LieAlgebraJson {
    let f = &l.field;
    LieAlgebraJson {
        field: f.descriptor(),
        dim: l.dim(),
        basis: l.labels.clone(),
        sectors: l.sectors.clone(),
        bracket: l.structure_constants().into_iter().map(|(i, j, k, c)| (i, j, k, f.format(&c))).collect(),
    }
}

pub fn lie_to_string(l: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&lie_to_json(l)).expect("serializable")
}

pub fn lie_from_json(j: &LieAlgebraJson) -> Result<LieAlgebra, IoError> {
    let f = Field::from_descriptor(&j.field).map_err(|e| violation("field", e))?;
    check_labels(j.dim, &j.basis)?;
    for (n, s) in j.sectors.iter().enumerate() {
        if s.start + s.len > j.dim {
            return Err(violation(format!("sectors[{n}]"), "extends past the basis"));
        }
    }
    let mut entries = Vec::with_capacity(j.bracket.len());
    for (n, (a, b, c, s)) in j.bracket.iter().enumerate() {
        for (pos, idx) in [*a, *b, *c].into_iter().enumerate() {
            check_index(idx, j.dim, format!("bracket[{n}][{pos}]"))?;
        }
        if a >= b {
            return Err(violation(format!("bracket[{n}]"), "entries must have i < j"));
        }
        entries.push((*a, *b, *c, parse_scalar(&f, s, format!("bracket[{n}][3]"))?));
    }
    LieAlgebra::new(&f, j.basis.clone(), j.sectors.clone(), entries).map_err(|e| violation("bracket", e))
}

pub fn lie_from_str(s: &str) -> Result<LieAlgebra, IoError> {
    let j: LieAlgebraJson = serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))?;
    lie_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::split_cayley;
    use crate::magic_square::{build_g, magic_slot, Flavor};

    #[test]
    fn split_cayley_round_trip() {
        let a = split_cayley(&Field::rationals());
        let b = algebra_from_str(&algebra_to_string(&a)).unwrap();
        assert_eq!(a.structure_constants(), b.structure_constants());
        assert_eq!(a.norm, b.norm);
        assert_eq!(a.unit, b.unit);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn function_field_scalars_canonicalized() {
        let text = r#"{"field":{"kind":"ratfun","base":{"kind":"GF","p":3},"var":"t"},
            "dim":1,"basis":["e"],"mul":[[0,0,0,"(2*t)/(2*t+2)"]]}"#;
        let a = algebra_from_str(text).unwrap();
        let j = algebra_to_json(&a);
        assert_eq!(j.mul[0].3, "t/(t+1)");
        let b = algebra_from_json(&j).unwrap();
        assert_eq!(a.structure_constants(), b.structure_constants());
    }

    #[test]
    fn malformed_inputs() {
        let bad_index = r#"{"field":{"kind":"Q"},"dim":1,"basis":["e"],"mul":[[0,3,0,"1"]]}"#;
        assert_eq!(
            algebra_from_str(bad_index).unwrap_err(),
            IoError::SchemaViolation { location: "mul[0][1]".into(), reason: "index 3 out of range for dimension 1".into() }
        );
        let bad_scalar = r#"{"field":{"kind":"GF","p":5},"dim":1,"basis":["e"],"mul":[[0,0,0,"1/0"]]}"#;
        assert!(matches!(algebra_from_str(bad_scalar), Err(IoError::SchemaViolation { location, .. }) if location == "mul[0][3]"));
        let bad_unit = r#"{"field":{"kind":"Q"},"dim":1,"basis":["e"],"mul":[[0,0,0,"1"]],"unit":["2"]}"#;
        assert!(matches!(algebra_from_str(bad_unit), Err(IoError::SchemaViolation { location, .. }) if location == "unit"));
        let bad_labels = r#"{"field":{"kind":"Q"},"dim":2,"basis":["e"],"mul":[]}"#;
        assert!(matches!(algebra_from_str(bad_labels), Err(IoError::SchemaViolation { location, .. }) if location == "basis"));
        assert!(matches!(algebra_from_str("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn lie_round_trip() {
        let f = Field::rationals();
        let g = build_g(&magic_slot(&f, 1, Flavor::Para).unwrap(), &magic_slot(&f, 2, Flavor::Para).unwrap()).unwrap();
        let h = lie_from_str(&lie_to_string(&g)).unwrap();
        assert_eq!(g, h);
        let bad = r#"{"field":{"kind":"Q"},"dim":2,"basis":["a","b"],"bracket":[[1,0,0,"1"]]}"#;
        assert!(matches!(lie_from_str(bad), Err(IoError::SchemaViolation { location, .. }) if location == "bracket[0]"));
    }
}
