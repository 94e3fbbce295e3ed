//! JSON output with every float printed to 17 significant digits.

use std::io::{self, Write};
use std::path::Path;

use pga_core::{CMatrix, GroupFunction, C64};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::CliError;

struct Precise<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
                self.0.$name(w)
            }
        )*
    };
}

macro_rules! forward_first {
    ($($name:ident),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
                self.0.$name(w, first)
            }
        )*
    };
}

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    forward!(
        begin_array,
        end_array,
        end_array_value,
        begin_object,
        end_object,
        begin_object_value,
        end_object_value
    );
    forward_first!(begin_array_value, begin_object_key);
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializable in memory");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = to_string(value);
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write output: {e}"))),
    }
}

pub fn complex_pair(c: C64) -> Value {
    json!([c.re, c.im])
}

/// Row-major `[re, im]` pairs.
pub fn matrix(m: &CMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().map(|c| complex_pair(*c)).collect()))
            .collect(),
    )
}

pub fn function(f: &GroupFunction) -> Value {
    Value::Array(
        f.iter()
            .map(|(a, c)| json!({"element": a, "re": c.re, "im": c.im}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        let s = to_string(&json!({"x": 0.1, "y": -2.5e-300}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-2.5000000000000000e-300"), "{s}");
    }

    #[test]
    fn printed_floats_round_trip() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02214076e23, -0.0] {
            let s = to_string(&x);
            assert_eq!(s.trim().parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn non_finite_values_become_null() {
        assert_eq!(to_string(&f64::NAN).trim(), "null");
        assert_eq!(to_string(&f64::INFINITY).trim(), "null");
    }
}
