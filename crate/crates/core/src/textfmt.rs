//! Deterministic numeric text output.
//!
//! All floating-point values are serialized with 17 significant digits,
//! enough to round-trip any f64 exactly, so identical requests produce
//! byte-identical output.

use std::io;

use serde::Serialize;

/// Formats an f64 with 17 significant digits.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// `serde_json` formatter that writes every float with 17 significant
/// digits instead of the shortest round-trip form.
pub struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a value to a JSON string with fixed-width floats.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, -2.718281828459045e-7, 1e300] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_uses_scientific_floats() {
        #[derive(Serialize)]
        struct S {
            x: f64,
        }
        let s = to_json_string(&S { x: 0.5 });
        assert_eq!(s, "{\"x\":5.0000000000000000e-1}");
    }
}
