//! JSON envelope and float formatting.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// Every command's output.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub results: Value,
    pub all_passed: bool,
    pub warnings: Vec<String>,
}

/// Pretty printing with every float written to 17 significant digits.
struct ExactFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFloats<'_> {
    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn render(envelope: &Envelope) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    envelope.serialize(&mut ser).expect("in-memory JSON");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        let x = 0.1 + 0.2;
        let e = Envelope {
            command: "t".into(),
            parameters: json!({}),
            seed: None,
            tolerance: 1e-10,
            results: json!({ "x": x, "n": 3, "bad": f64::NAN }),
            all_passed: true,
            warnings: vec![],
        };
        let text = render(&e);
        assert!(text.contains("3.0000000000000004e-1"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["results"]["x"].as_f64().unwrap(), x);
        assert_eq!(back["results"]["n"], 3);
        assert!(back["results"]["bad"].is_null());
        assert!(back["seed"].is_null());
    }
}
