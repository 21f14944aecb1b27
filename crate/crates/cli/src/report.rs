//! Machine-readable reports: an ordered list of key/value fields rendered
//! either as `key: value` lines (structured schema, byte-stable for fixed
//! inputs in exact mode) or as an aligned two-column table.

use midshift::scalar::Scalar;

pub const SCHEMA: &str = "midshift-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Structured,
    Table,
}

#[derive(Clone, Debug)]
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report { fields: Vec::new() };
        r.push("schema", SCHEMA);
        r.push("version", env!("CARGO_PKG_VERSION"));
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.fields.push((key.into(), value.into()));
    }

    pub fn push_scalar(&mut self, key: impl Into<String>, value: &Scalar) {
        self.push(key, fmt_scalar(value));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut out = String::new();
                for (k, v) in &self.fields {
                    out.push_str(k);
                    out.push_str(": ");
                    out.push_str(v);
                    out.push('\n');
                }
                out
            }
            Format::Table => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k:<width$}  {v}\n"));
                }
                out
            }
        }
    }
}

/// Exact rationals render exactly, with a float echo for readability;
/// anything else renders as its f64 value.
pub fn fmt_scalar(s: &Scalar) -> String {
    match s.try_rational() {
        Some(r) => {
            if r.is_integer() {
                format!("{s}")
            } else {
                format!("{s} (~{})", s.to_f64())
            }
        }
        None => format!("{}", s.to_f64()),
    }
}
