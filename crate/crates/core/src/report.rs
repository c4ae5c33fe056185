//! Deterministic structured-text output.
//!
//! Documents render to TOML, with every float written at 17 significant
//! digits so that values round-trip exactly.

use num_complex::Complex64;

/// 17 significant digits, lowercase exponent. Negative zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.16e}", x)
}

/// `a+bi` with both parts at full precision.
pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Array(Vec<Value>),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<u64> for Value {
    fn from(i: u64) -> Self {
        Value::Int(i as i64)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::Array(v.into_iter().map(Into::into).collect())
    }
}

impl Value {
    fn render(&self, out: &mut String) {
        match self {
            Value::Str(s) => quote(s, out),
            Value::Int(i) => out.push_str(&i.to_string()),
            Value::Float(x) => out.push_str(&fmt_f64(*x)),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.render(out);
                }
                out.push(']');
            }
        }
    }
}

fn quote(s: &str, out: &mut String) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Section {
    name: Option<String>,
    repeated: bool,
    entries: Vec<(String, Value)>,
}

impl Section {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }
}

/// An ordered TOML document built section by section.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    root: Section,
    sections: Vec<Section>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(&mut self) -> &mut Section {
        &mut self.root
    }

    /// A `[name]` table.
    pub fn section(&mut self, name: &str) -> &mut Section {
        self.push(name, false)
    }

    /// One element of a `[[name]]` array of tables.
    pub fn array_item(&mut self, name: &str) -> &mut Section {
        self.push(name, true)
    }

    fn push(&mut self, name: &str, repeated: bool) -> &mut Section {
        self.sections.push(Section {
            name: Some(name.to_string()),
            repeated,
            entries: Vec::new(),
        });
        self.sections.last_mut().expect("just pushed")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        write_entries(&self.root, &mut out);
        for s in &self.sections {
            if !out.is_empty() {
                out.push('\n');
            }
            let name = s.name.as_deref().unwrap_or_default();
            if s.repeated {
                out.push_str(&format!("[[{name}]]\n"));
            } else {
                out.push_str(&format!("[{name}]\n"));
            }
            write_entries(s, &mut out);
        }
        out
    }
}

fn write_entries(s: &Section, out: &mut String) {
    for (k, v) in &s.entries {
        out.push_str(k);
        out.push_str(" = ");
        v.render(out);
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(12345.0), "1.2345000000000000e4");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn document_parses_as_toml() {
        let mut doc = Document::new();
        doc.root()
            .set("name", "a \"quoted\" value")
            .set("x", 1.5e-300);
        doc.section("config")
            .set("seed", 7u64)
            .set("flags", vec![true, false]);
        doc.array_item("step").set("msg", "one");
        doc.array_item("step").set("msg", "two");
        let parsed: toml::Value = toml::from_str(&doc.render()).unwrap();
        assert_eq!(parsed["name"].as_str(), Some("a \"quoted\" value"));
        assert_eq!(parsed["x"].as_float(), Some(1.5e-300));
        assert_eq!(parsed["config"]["seed"].as_integer(), Some(7));
        assert_eq!(parsed["step"].as_array().unwrap().len(), 2);
    }
}
