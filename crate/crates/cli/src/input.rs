//! JSON definitions of groups, cocycles and functions.

use std::f64::consts::TAU;
use std::path::Path;

use pga_core::clockshift::measured_cocycle;
use pga_core::cocycles::coboundary;
use pga_core::groups::{make_cyclic_power, make_finite_from_table_with, make_lattice};
use pga_core::{Cocycle, GaugePhase, Group, GroupElement, GroupFunction, GroupKind, C64};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDef {
    CyclicPower {
        n: u64,
        d: usize,
    },
    Lattice {
        d: usize,
    },
    Table {
        elements: Option<Vec<String>>,
        table: Vec<Vec<Value>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleDef {
    Zero,
    Bilinear { theta: Vec<Vec<f64>> },
    Table { alpha: Vec<Vec<f64>> },
    Coboundary { phi: Vec<f64> },
    Clockshift,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    element: Value,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed {}: {e}", path.display())))
}

impl GroupDef {
    pub fn build(self) -> Result<Group, CliError> {
        let g = match self {
            GroupDef::CyclicPower { n, d } => make_cyclic_power(n, d),
            GroupDef::Lattice { d } => make_lattice(d),
            GroupDef::Table { elements, table } => {
                let rows = table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| table_entry(v, elements.as_deref()))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                make_finite_from_table_with(rows, elements, false)
            }
        };
        g.map_err(|e| CliError::Input(format!("invalid group: {e}")))
    }
}

fn table_entry(v: &Value, names: Option<&[String]>) -> Result<usize, CliError> {
    if let Some(i) = v.as_u64() {
        return Ok(i as usize);
    }
    if let (Some(s), Some(names)) = (v.as_str(), names) {
        if let Some(i) = names.iter().position(|n| n == s) {
            return Ok(i);
        }
    }
    Err(CliError::Input(format!("table entry {v} names no element")))
}

impl CocycleDef {
    pub fn is_clockshift(&self) -> bool {
        matches!(self, CocycleDef::Clockshift)
    }

    pub fn build(self, g: &Group) -> Result<Cocycle, CliError> {
        let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("invalid cocycle: {e}"));
        let alpha = match self {
            CocycleDef::Zero => Cocycle::zero(),
            CocycleDef::Bilinear { theta } if g.is_finite() => {
                let n = g.order().expect("finite");
                if theta.len() != g.rank() || theta.iter().any(|r| r.len() != g.rank()) {
                    return Err(bad(&format!("theta must be {0}x{0}", g.rank())));
                }
                if g.modulus().is_none() {
                    return Err(bad(&"bilinear forms need a vector group"));
                }
                let coords: Vec<Vec<i64>> = (0..n)
                    .map(|i| g.element(i).coords().expect("vector").to_vec())
                    .collect();
                let table = coords
                    .iter()
                    .map(|a| coords.iter().map(|b| bilinear(&theta, a, b)).collect())
                    .collect();
                Cocycle::table(table).map_err(|e| bad(&e))?
            }
            CocycleDef::Bilinear { theta } => Cocycle::bilinear(theta).map_err(|e| bad(&e))?,
            CocycleDef::Table { alpha } => Cocycle::table(alpha).map_err(|e| bad(&e))?,
            CocycleDef::Coboundary { phi } => {
                let phi = GaugePhase::table(phi).map_err(|e| bad(&e))?;
                coboundary(g, &phi).map_err(|e| bad(&e))?
            }
            CocycleDef::Clockshift => match g.kind() {
                GroupKind::CyclicPower { n, d: 2 } => {
                    measured_cocycle(n as usize).map_err(|e| bad(&e))?
                }
                _ => return Err(bad(&"clockshift cocycles live on Z_n^2")),
            },
        };
        alpha.check_compatible(g).map_err(|e| bad(&e))?;
        Ok(alpha)
    }
}

fn bilinear(theta: &[Vec<f64>], a: &[i64], b: &[i64]) -> f64 {
    let mut s = 0.0;
    for (i, row) in theta.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            s += a[i] as f64 * t * b[j] as f64;
        }
    }
    s.rem_euclid(TAU)
}

/// Accepts coordinates, an index, a one-element index list, or an element
/// name for table groups.
pub fn parse_element(g: &Group, v: &Value) -> Result<GroupElement, CliError> {
    let e = match v {
        Value::Array(items) if g.is_finite() && g.modulus().is_none() && items.len() == 1 => {
            items[0].as_u64().map(|i| GroupElement::Index(i as usize))
        }
        Value::Array(items) => items
            .iter()
            .map(Value::as_i64)
            .collect::<Option<Vec<_>>>()
            .map(GroupElement::Vector),
        Value::Number(n) => n.as_u64().map(|i| GroupElement::Index(i as usize)),
        Value::String(s) => g
            .names()
            .and_then(|names| names.iter().position(|n| n == s))
            .map(GroupElement::Index),
        _ => None,
    };
    match e {
        Some(e) if g.contains(&e) => Ok(e),
        _ => Err(CliError::Input(format!(
            "{v} is not an element of {}",
            g.describe()
        ))),
    }
}

pub fn read_function(path: &Path, g: &Group) -> Result<GroupFunction, CliError> {
    let terms: Vec<Term> = read_json(path)?;
    let pairs = terms
        .iter()
        .map(|t| Ok((parse_element(g, &t.element)?, C64::new(t.re, t.im))))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(GroupFunction::from_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn group_kinds_parse() {
        let g: GroupDef =
            serde_json::from_value(json!({"kind":"cyclic_power","n":4,"d":2})).unwrap();
        assert_eq!(g.build().unwrap().order(), Some(16));
        let g: GroupDef = serde_json::from_value(json!({"kind":"lattice","d":2})).unwrap();
        assert!(g.build().unwrap().is_lattice());
        let g: GroupDef = serde_json::from_value(json!({
            "kind":"table","elements":["e","a"],"table":[["e","a"],["a","e"]]
        }))
        .unwrap();
        assert_eq!(g.build().unwrap().order(), Some(2));
    }

    #[test]
    fn broken_table_is_an_input_error() {
        let g: GroupDef = serde_json::from_value(json!({
            "kind":"table","table":[[0,1,2],[1,1,0],[2,0,1]]
        }))
        .unwrap();
        assert!(matches!(g.build(), Err(CliError::Input(_))));
    }

    #[test]
    fn elements_parse_in_every_form() {
        let z = make_cyclic_power(3, 2).unwrap();
        assert_eq!(
            parse_element(&z, &json!([1, 2])).unwrap(),
            GroupElement::Vector(vec![1, 2])
        );
        assert!(parse_element(&z, &json!([3, 0])).is_err());
        let names = Some(vec!["e".to_string(), "a".to_string()]);
        let t = make_finite_from_table_with(vec![vec![0, 1], vec![1, 0]], names, false).unwrap();
        for v in [json!(1), json!([1]), json!("a")] {
            assert_eq!(parse_element(&t, &v).unwrap(), GroupElement::Index(1));
        }
    }

    #[test]
    fn bilinear_on_cyclic_power_is_tabulated() {
        let g = make_cyclic_power(2, 2).unwrap();
        let def = CocycleDef::Bilinear {
            theta: vec![vec![0.0, std::f64::consts::PI], vec![0.0, 0.0]],
        };
        let alpha = def.build(&g).unwrap();
        let e1 = GroupElement::Vector(vec![1, 0]);
        let e2 = GroupElement::Vector(vec![0, 1]);
        assert!((alpha.phase(&g, &e1, &e2).abs() - std::f64::consts::PI).abs() < 1e-12);
    }
}
